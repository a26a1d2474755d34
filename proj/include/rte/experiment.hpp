#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rte/grid.hpp"
#include "rte/scene.hpp"
#include "rte/transport.hpp"

namespace rte {

// One batch run, end to end: phantom -> forward data -> optional noise ->
// back-projection image -> visibility map, all written to out_dir. Fields
// mirror the JSON config; command-line flags override individual entries.
struct ExperimentConfig {
  int n_x = 256;
  int n_d = 128;
  int m1 = 8;
  int m2 = 2;
  double mu = 0.0;
  std::uint64_t seed = 0;
  double arc_start = 0.0;
  double arc_end = kPi / 3.0;
  std::string medium_preset = "reference";  // reference | vacuum | constant
  double medium_sigma = 0.5;                // constant preset level
  std::string phantom_preset = "disk";      // disk | rect | spiral
  std::vector<PhantomElement> phantom_elements;  // overrides the preset
  std::string phantom_kind = "disk_bumps";       // kind for explicit elements
  int n_xi = 16;
  double vis_threshold = 0.0;  // 0 keeps the visibility module's default
  std::string out_dir = "out";
};

// Parses the JSON config text; missing keys keep their defaults, bad values
// raise std::invalid_argument naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

// Realizes the configured pieces. The cutoff is the arc taper, or the
// full-boundary cutoff when the arc spans at least 2 pi.
ScalarField configured_phantom(const ExperimentConfig& cfg, const GridSpec& g);
MediumSpec configured_medium(const ExperimentConfig& cfg, const GridSpec& g);
CutoffSpec configured_cutoff(const ExperimentConfig& cfg);

// Boundary data resampled to the (direction, boundary angle) grid: entry
// (id, p) is the chord of direction eta_id exiting at angle phi_p, linearly
// interpolated between chord rows; inward pairs are zero. Presentation
// format only; the n_d x n_x chord-offset array stays normative.
std::vector<double> polar_boundary(const BoundaryData& b);

// Runs the whole experiment and writes every artifact plus manifest.json
// (schema_version, config echo, term norms, visibility threshold, timings)
// into cfg.out_dir. All raw outputs are bitwise reproducible for a fixed
// config and seed; timings are the one exception, quarantined in the
// manifest. Returns the manifest path.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace rte
