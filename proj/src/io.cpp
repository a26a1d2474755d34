#include "rte/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw field format is little-endian; big-endian hosts need a byte swap here");

namespace rte {

namespace {

using nlohmann::json;

void minmax(const double* data, std::size_t count, double& lo, double& hi) {
  lo = 0.0;
  hi = 0.0;
  if (count == 0) return;
  lo = hi = data[0];
  for (std::size_t i = 1; i < count; ++i) {
    lo = std::min(lo, data[i]);
    hi = std::max(hi, data[i]);
  }
}

void write_sidecar(const std::string& path, const RawFieldInfo& info) {
  json j;
  j["schema_version"] = 1;
  j["dtype"] = "float64-le";
  j["kind"] = info.kind;
  j["n_x"] = info.n_x;
  j["n_d"] = info.n_d;
  j["shape"] = info.shape;
  j["min"] = info.min;
  j["max"] = info.max;
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("cannot open for writing: " + path + ".json");
  out << j.dump(2) << "\n";
}

}  // namespace

void write_raw(const std::string& path, const RawFieldInfo& info, const double* data,
               std::size_t count) {
  std::size_t expect = 1;
  for (std::size_t s : info.shape) expect *= s;
  if (expect != count) throw std::invalid_argument("write_raw: shape does not match count: " + path);

  RawFieldInfo full = info;
  minmax(data, count, full.min, full.max);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw std::runtime_error("short write: " + path);
  out.close();
  write_sidecar(path, full);
}

std::pair<RawFieldInfo, std::vector<double>> read_raw(const std::string& path) {
  std::ifstream meta(path + ".json");
  if (!meta) throw std::runtime_error("cannot open sidecar: " + path + ".json");
  json j = json::parse(meta);

  RawFieldInfo info;
  info.kind = j.at("kind").get<std::string>();
  info.n_x = j.at("n_x").get<int>();
  info.n_d = j.at("n_d").get<int>();
  info.shape = j.at("shape").get<std::vector<std::size_t>>();
  info.min = j.at("min").get<double>();
  info.max = j.at("max").get<double>();

  std::size_t count = 1;
  for (std::size_t s : info.shape) count *= s;
  std::vector<double> data(count);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
    throw std::runtime_error("short read: " + path);
  return {info, std::move(data)};
}

void write_scalar_field(const std::string& path, const std::string& kind, const ScalarField& f) {
  RawFieldInfo info;
  info.kind = kind;
  info.n_x = f.grid.n_x;
  info.n_d = f.grid.n_d;
  info.shape = {static_cast<std::size_t>(f.grid.n_x), static_cast<std::size_t>(f.grid.n_x)};
  write_raw(path, info, f.v.data(), f.v.size());
}

void write_angular_field(const std::string& path, const std::string& kind, const AngularField& f) {
  RawFieldInfo info;
  info.kind = kind;
  info.n_x = f.grid.n_x;
  info.n_d = f.grid.n_d;
  info.shape = {static_cast<std::size_t>(f.grid.n_d), static_cast<std::size_t>(f.grid.n_x),
                static_cast<std::size_t>(f.grid.n_x)};
  write_raw(path, info, f.v.data(), f.v.size());
}

void write_boundary_data(const std::string& path, const std::string& kind, const BoundaryData& b) {
  RawFieldInfo info;
  info.kind = kind;
  info.n_x = b.grid.n_x;
  info.n_d = b.grid.n_d;
  info.shape = {static_cast<std::size_t>(b.grid.n_d), static_cast<std::size_t>(b.grid.n_x)};
  write_raw(path, info, b.v.data(), b.v.size());
}

ScalarField read_scalar_field(const std::string& path) {
  auto [info, data] = read_raw(path);
  if (info.shape.size() != 2 || info.shape[0] != info.shape[1])
    throw std::runtime_error("not a square scalar field: " + path);
  ScalarField f(make_grid(info.n_x, info.n_d));
  if (data.size() != f.v.size()) throw std::runtime_error("size mismatch: " + path);
  f.v = std::move(data);
  return f;
}

BoundaryData read_boundary_data(const std::string& path) {
  auto [info, data] = read_raw(path);
  if (info.shape.size() != 2) throw std::runtime_error("not a boundary array: " + path);
  BoundaryData b(make_grid(info.n_x, info.n_d));
  if (data.size() != b.v.size()) throw std::runtime_error("size mismatch: " + path);
  b.v = std::move(data);
  return b;
}

void render_pgm(const std::string& path, const double* data, int rows, int cols) {
  std::size_t count = static_cast<std::size_t>(rows) * cols;
  double lo, hi;
  minmax(data, count, lo, hi);
  for (std::size_t i = 0; i < count; ++i)
    if (!std::isfinite(data[i])) throw std::invalid_argument("render_pgm: non-finite value: " + path);

  double range = hi - lo;
  std::vector<std::uint8_t> pix(count, 0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < count; ++i)
      pix[i] = static_cast<std::uint8_t>(std::lround(255.0 * (data[i] - lo) / range));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n" << cols << " " << rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(pix.data()), static_cast<std::streamsize>(count));
  if (!out) throw std::runtime_error("short write: " + path);

  json j;
  j["schema_version"] = 1;
  j["normalization"] = {{"min", lo}, {"max", hi}, {"degenerate", !(range > 0.0)}};
  j["rows"] = rows;
  j["cols"] = cols;
  std::ofstream meta(path + ".json");
  if (!meta) throw std::runtime_error("cannot open for writing: " + path + ".json");
  meta << j.dump(2) << "\n";
}

void render_pgm(const std::string& path, const ScalarField& f) {
  render_pgm(path, f.v.data(), f.grid.n_x, f.grid.n_x);
}

}  // namespace rte
