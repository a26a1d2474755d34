#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rte/grid.hpp"

namespace rte {

// Raw array format: float64 little-endian, C order, one array per file, with
// a sidecar JSON at <path>.json recording kind, grid, shape and value range.
struct RawFieldInfo {
  std::string kind;
  int n_x = 0;
  int n_d = 0;
  std::vector<std::size_t> shape;
  double min = 0.0;
  double max = 0.0;
};

void write_raw(const std::string& path, const RawFieldInfo& info, const double* data,
               std::size_t count);
std::pair<RawFieldInfo, std::vector<double>> read_raw(const std::string& path);

void write_scalar_field(const std::string& path, const std::string& kind, const ScalarField& f);
void write_angular_field(const std::string& path, const std::string& kind, const AngularField& f);
void write_boundary_data(const std::string& path, const std::string& kind, const BoundaryData& b);
ScalarField read_scalar_field(const std::string& path);
BoundaryData read_boundary_data(const std::string& path);

// 8-bit binary PGM, min-max normalized; a degenerate range maps everything
// to 0. Normalization constants go to the sidecar JSON. Row 0 is printed at
// the top of the image.
void render_pgm(const std::string& path, const double* data, int rows, int cols);
void render_pgm(const std::string& path, const ScalarField& f);

}  // namespace rte
