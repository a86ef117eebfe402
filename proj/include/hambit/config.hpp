#pragma once

// JSON run configuration shared by every CLI subcommand. Validation happens
// at parse time and names the offending field.

#include <cstdint>
#include <string>
#include <vector>

#include "hambit/kernels.hpp"
#include "hambit/noise.hpp"

namespace hambit {

struct RunConfig {
  int dim_u = 1, dim_v = 1, dim_h = 1;
  KernelSpec kernel;
  VolatilityModel vol;
  LevySpec noise;
  bool vol_shared_seed = false;

  double dt = 0.0, dx = 0.0;
  int n_steps = 0, j_nodes = 0;
  double t_final = 0.0, x_max = 0.0;
  int levels = 4;

  double weight_alpha = 1.0;
  std::uint64_t seed = 0;
  int n_paths = 1;
  std::string out_dir = ".";

  double charfn_t = 0.0;
  std::vector<Vec> charfn_h;

  double project_t = 0.0, project_s = 0.0;
  std::vector<Vec> project_xi;

  std::uint64_t config_hash = 0;  // hash of the raw config text
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace hambit
