#include "rte/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "rte/io.hpp"
#include "rte/pipeline.hpp"
#include "rte/visibility.hpp"

namespace rte {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config " + field + ": " + why);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& obj, const char* key, double dflt,
                 const std::string& where) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_number()) bad_field(where + "." + key, "expected a number");
  return v->get<double>();
}

int as_int(const json& obj, const char* key, int dflt, const std::string& where) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_number_integer()) bad_field(where + "." + key, "expected an integer");
  return v->get<int>();
}

std::string as_string(const json& obj, const char* key, std::string dflt,
                      const std::string& where) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_string()) bad_field(where + "." + key, "expected a string");
  return v->get<std::string>();
}

PhantomSpec::Kind kind_from_name(const std::string& name) {
  if (name == "disk_bumps") return PhantomSpec::Kind::disk_bumps;
  if (name == "rect_bumps") return PhantomSpec::Kind::rect_bumps;
  if (name == "spiral_bumps") return PhantomSpec::Kind::spiral_bumps;
  bad_field("phantom.kind", "unknown kind '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

  ExperimentConfig c;
  if (const json* grid = find(j, "grid")) {
    c.n_x = as_int(*grid, "n_x", c.n_x, "grid");
    c.n_d = as_int(*grid, "n_d", c.n_d, "grid");
  }
  if (const json* tr = find(j, "truncation")) {
    c.m1 = as_int(*tr, "m1", c.m1, "truncation");
    c.m2 = as_int(*tr, "m2", c.m2, "truncation");
    if (c.m1 < 0) bad_field("truncation.m1", "must be >= 0");
    if (c.m2 < 0) bad_field("truncation.m2", "must be >= 0");
  }
  if (const json* noise = find(j, "noise")) {
    c.mu = as_number(*noise, "mu", c.mu, "noise");
    if (c.mu < 0.0) bad_field("noise.mu", "must be nonnegative");
    if (const json* seed = find(*noise, "seed")) {
      if (!seed->is_number_integer()) bad_field("noise.seed", "expected an integer");
      c.seed = seed->get<std::uint64_t>();
    }
  }
  if (const json* cut = find(j, "cutoff")) {
    c.arc_start = as_number(*cut, "arc_start", c.arc_start, "cutoff");
    c.arc_end = as_number(*cut, "arc_end", c.arc_end, "cutoff");
    if (c.arc_end < c.arc_start) bad_field("cutoff.arc_end", "must be >= arc_start");
  }
  if (const json* med = find(j, "medium")) {
    c.medium_preset = as_string(*med, "preset", c.medium_preset, "medium");
    c.medium_sigma = as_number(*med, "sigma", c.medium_sigma, "medium");
  }
  if (const json* ph = find(j, "phantom")) {
    c.phantom_preset = as_string(*ph, "preset", c.phantom_preset, "phantom");
    c.phantom_kind = as_string(*ph, "kind", c.phantom_kind, "phantom");
    if (const json* els = find(*ph, "elements")) {
      if (!els->is_array()) bad_field("phantom.elements", "expected an array");
      for (const json& e : *els) {
        if (!e.is_array() || e.size() != 5)
          bad_field("phantom.elements", "each element is [A, x0, y0, r, r0]");
        PhantomElement el;
        el.amplitude = e[0].get<double>();
        el.x0 = e[1].get<double>();
        el.y0 = e[2].get<double>();
        el.r = e[3].get<double>();
        el.r0 = e[4].get<double>();
        c.phantom_elements.push_back(el);
      }
    }
  }
  if (const json* vis = find(j, "visibility")) {
    c.n_xi = as_int(*vis, "n_xi", c.n_xi, "visibility");
    if (c.n_xi < 1) bad_field("visibility.n_xi", "must be positive");
    c.vis_threshold = as_number(*vis, "threshold", c.vis_threshold, "visibility");
    if (c.vis_threshold < 0.0) bad_field("visibility.threshold", "must be nonnegative");
  }
  c.out_dir = as_string(j, "out", c.out_dir, "config");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["grid"] = {{"n_x", cfg.n_x}, {"n_d", cfg.n_d}};
  j["truncation"] = {{"m1", cfg.m1}, {"m2", cfg.m2}};
  j["noise"] = {{"mu", cfg.mu}, {"seed", cfg.seed}};
  j["cutoff"] = {{"arc_start", cfg.arc_start}, {"arc_end", cfg.arc_end}};
  j["medium"] = {{"preset", cfg.medium_preset}, {"sigma", cfg.medium_sigma}};
  json ph;
  ph["preset"] = cfg.phantom_preset;
  ph["kind"] = cfg.phantom_kind;
  if (!cfg.phantom_elements.empty()) {
    json els = json::array();
    for (const PhantomElement& e : cfg.phantom_elements)
      els.push_back({e.amplitude, e.x0, e.y0, e.r, e.r0});
    ph["elements"] = els;
  }
  j["phantom"] = ph;
  j["visibility"] = {{"n_xi", cfg.n_xi}, {"threshold", cfg.vis_threshold}};
  j["out"] = cfg.out_dir;
  return j.dump(2);
}

ScalarField configured_phantom(const ExperimentConfig& cfg, const GridSpec& g) {
  PhantomSpec spec;
  if (!cfg.phantom_elements.empty()) {
    spec.kind = kind_from_name(cfg.phantom_kind);
    spec.elements = cfg.phantom_elements;
  } else if (cfg.phantom_preset == "disk") {
    spec = disk_phantom();
  } else if (cfg.phantom_preset == "rect") {
    spec = rect_phantom();
  } else if (cfg.phantom_preset == "spiral") {
    spec = spiral_phantom();
  } else {
    bad_field("phantom.preset", "unknown preset '" + cfg.phantom_preset + "'");
  }
  return make_phantom(spec, g);
}

MediumSpec configured_medium(const ExperimentConfig& cfg, const GridSpec& g) {
  if (cfg.medium_preset == "reference") return example_medium(g);
  if (cfg.medium_preset == "vacuum") return constant_medium(g, 0.0);
  if (cfg.medium_preset == "constant") return constant_medium(g, cfg.medium_sigma);
  bad_field("medium.preset", "unknown preset '" + cfg.medium_preset + "'");
}

CutoffSpec configured_cutoff(const ExperimentConfig& cfg) {
  if (cfg.arc_end - cfg.arc_start >= kTwoPi) return full_data_cutoff();
  return make_cutoff(cfg.arc_start, cfg.arc_end);
}

std::vector<double> polar_boundary(const BoundaryData& b) {
  const GridSpec& g = b.grid;
  const int n = g.n_x;
  std::vector<double> out(std::size_t(g.n_d) * n, 0.0);
  for (int id = 0; id < g.n_d; ++id) {
    const double eta = g.eta(id);
    for (int p = 0; p < n; ++p) {
      const double phi = (p + 0.5) * kTwoPi / n;
      if (std::cos(phi - eta) <= 0.0) continue;
      const double y = std::sin(phi - eta);
      const double u = (y + 1.0) / g.sx() - 0.5;
      const int j0 = int(std::floor(u));
      const double fu = u - j0;
      double v = 0.0;
      if (j0 >= 0 && j0 < n) v += (1.0 - fu) * b.at(id, j0);
      if (j0 + 1 >= 0 && j0 + 1 < n) v += fu * b.at(id, j0 + 1);
      out[std::size_t(id) * n + p] = v;
    }
  }
  return out;
}

std::string run_experiment(const ExperimentConfig& raw_cfg) {
  // the json round trip runs the field checks on configs assembled in code
  const ExperimentConfig cfg = parse_config(config_to_json(raw_cfg));
  GridSpec g;
  try {
    g = make_grid(cfg.n_x, cfg.n_d);
  } catch (const std::invalid_argument& e) {
    bad_field("grid", e.what());
  }
  ScalarField f = configured_phantom(cfg, g);
  MediumSpec medium = configured_medium(cfg, g);
  CutoffSpec cutoff = configured_cutoff(cfg);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + cfg.out_dir +
                             ": " + ec.message());
  const std::string dir = cfg.out_dir + "/";

  json outputs = json::array();
  auto put = [&](const std::string& name) {
    outputs.push_back(name);
    return dir + name;
  };
  json timings;
  const auto clock = [] { return std::chrono::steady_clock::now(); };
  const auto since = [](auto t0, auto t1) {
    return std::chrono::duration<double>(t1 - t0).count();
  };

  write_scalar_field(put("phantom.raw"), "phantom", f);
  render_pgm(put("phantom.pgm"), f);

  auto t0 = clock();
  ForwardResult fw = forward_XV(f, medium, cutoff, cfg.m1);
  timings["forward"] = since(t0, clock());

  ScalarField avg = collapse_J_adjoint(fw.u_total);
  for (double& v : avg.v) v *= 1.0 / kTwoPi;
  write_scalar_field(put("angular_average.raw"), "angular_average", avg);
  render_pgm(put("angular_average.pgm"), avg);

  write_boundary_data(put("data_full.raw"), "boundary_full", fw.raw_data);
  render_pgm(put("data_full.pgm"), fw.raw_data.v.data(), g.n_d, g.n_x);
  write_boundary_data(put("data_cutoff.raw"), "boundary_cutoff", fw.data);
  render_pgm(put("data_cutoff.pgm"), fw.data.v.data(), g.n_d, g.n_x);

  std::vector<double> polar = polar_boundary(fw.data);
  RawFieldInfo pinfo;
  pinfo.kind = "boundary_polar";
  pinfo.n_x = g.n_x;
  pinfo.n_d = g.n_d;
  pinfo.shape = {std::size_t(g.n_d), std::size_t(g.n_x)};
  write_raw(put("data_cutoff_polar.raw"), pinfo, polar.data(), polar.size());
  render_pgm(put("data_cutoff_polar.pgm"), polar.data(), g.n_d, g.n_x);

  BoundaryData measured = fw.data;
  if (cfg.mu > 0.0) {
    measured = add_noise(fw.data, NoiseSpec{cfg.mu, cfg.seed});
    write_boundary_data(put("data_noisy.raw"), "boundary_noisy", measured);
    render_pgm(put("data_noisy.pgm"), measured.v.data(), g.n_d, g.n_x);
  }

  t0 = clock();
  NormalResult nr = adjoint_XV(measured, medium, cutoff, cfg.m2);
  timings["normal"] = since(t0, clock());
  write_scalar_field(put("normal_image.raw"), "normal_image", nr.image);
  render_pgm(put("normal_image.pgm"), nr.image);

  t0 = clock();
  VisibilityMap vm = cfg.vis_threshold > 0.0
                         ? visibility_map(g, medium, cutoff, cfg.n_xi, cfg.vis_threshold)
                         : visibility_map(g, medium, cutoff, cfg.n_xi);
  timings["visibility"] = since(t0, clock());
  RawFieldInfo vinfo;
  vinfo.kind = "visibility_rho";
  vinfo.n_x = g.n_x;
  vinfo.n_d = g.n_d;
  vinfo.shape = {std::size_t(cfg.n_xi), std::size_t(g.n_x), std::size_t(g.n_x)};
  write_raw(put("visibility_rho.raw"), vinfo, vm.values.data(), vm.values.size());
  std::vector<double> mask(vm.mask.begin(), vm.mask.end());
  vinfo.kind = "visibility_mask";
  write_raw(put("visibility_mask.raw"), vinfo, mask.data(), mask.size());
  for (int k = 0; k < cfg.n_xi; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "visibility_%02d.pgm", k);
    render_pgm(put(name), vm.values.data() + std::size_t(k) * g.n_x * g.n_x,
               g.n_x, g.n_x);
  }

  json manifest;
  manifest["schema_version"] = 1;
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["term_norms"] = fw.term_norms;
  manifest["visibility_threshold"] = vm.threshold;
  manifest["noise_applied"] = cfg.mu > 0.0;
  manifest["outputs"] = outputs;
  manifest["timings"] = timings;
  const std::string mpath = dir + "manifest.json";
  std::ofstream out(mpath);
  if (!out) throw std::runtime_error("cannot open for writing: " + mpath);
  out << manifest.dump(2) << "\n";
  return mpath;
}

}  // namespace rte
