#include "hambit/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "hambit/analysis.hpp"

namespace hambit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config: " + field + " " + why);
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) fail(field, "is missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number()) fail(field, "must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& field, double fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(field, "must be a number");
  return it->get<double>();
}

int integer(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) fail(field, "must be an integer");
  return v.get<int>();
}

Vec vector_field(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "must be a nonempty array");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(field, "must contain numbers");
    out[static_cast<int>(i)] = v[i].get<double>();
  }
  return out;
}

Mat matrix_field(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "must be a nonempty array of rows");
  std::size_t cols = 0;
  for (const auto& row : v) {
    if (!row.is_array() || row.empty()) fail(field, "rows must be nonempty arrays");
    if (cols == 0) cols = row.size();
    if (row.size() != cols) fail(field, "rows must have equal length");
  }
  Mat out(v.size(), cols);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) fail(field, "must contain numbers");
      out(static_cast<int>(i), static_cast<int>(j)) = v[i][j].get<double>();
    }
  return out;
}

LevySpec parse_levy(const json& j, const std::string& field, int expect_dim) {
  std::string type = require(j, "type").get<std::string>();
  Vec evs = vector_field(require(j, "eigenvalues"), field + ".eigenvalues");
  if (expect_dim > 0 && evs.size() != expect_dim)
    fail(field + ".eigenvalues", "length must match the space dimension");
  CovarianceOp cov;
  try {
    cov = CovarianceOp(evs);
  } catch (const std::exception&) {
    fail(field + ".eigenvalues", "must be nonnegative");
  }
  if (type == "wiener") return LevySpec::wiener(std::move(cov));
  if (type == "compound_poisson")
    return LevySpec::compound_poisson(number(j, "intensity"), std::move(cov));
  fail(field + ".type", "must be \"wiener\" or \"compound_poisson\"");
}

VolatilityModel parse_vol(const json& j, int dim_u) {
  std::string type = require(j, "type").get<std::string>();
  if (type == "constant") {
    Vec s0 = vector_field(require(j, "sigma0"), "volatility.sigma0");
    if (s0.size() != dim_u) fail("volatility.sigma0", "length must equal dim_u");
    return VolatilityModel::constant(std::move(s0));
  }
  if (type == "scalar_lss") {
    LevySpec driver = parse_levy(require(j, "driver"), "volatility.driver", dim_u);
    return VolatilityModel::scalar_lss(number(j, "rho"), std::move(driver));
  }
  if (type == "operator_ou") {
    Mat c = matrix_field(require(j, "c"), "volatility.c");
    Mat y0 = matrix_field(require(j, "y0"), "volatility.y0");
    if (c.rows() * c.rows() != dim_u)
      fail("volatility.c", "dimension squared must equal dim_u");
    return VolatilityModel::operator_ou(std::move(c), number(j, "jump_intensity"),
                                        number(j, "jump_scale"), std::move(y0));
  }
  fail("volatility.type", "must be \"constant\", \"scalar_lss\" or \"operator_ou\"");
}

KernelSpec parse_kernel(const json& j, int du, int dv, int dh) {
  const json& comps = require(j, "components");
  if (!comps.is_array() || comps.empty())
    fail("kernel.components", "must be a nonempty array");
  std::vector<KernelComponent> out;
  for (const auto& cj : comps) {
    KernelComponent comp;
    comp.phi_index = integer(cj, "phi_index");
    const json& g = require(cj, "g");
    std::string type = require(g, "type").get<std::string>();
    if (type == "exponential")
      comp.g = ScalarKernel::exponential(number(g, "kappa"));
    else if (type == "constant")
      comp.g = ScalarKernel::constant(number_or(g, "value", 1.0));
    else
      fail("kernel.components.g.type", "must be \"exponential\" or \"constant\"");
    comp.b = matrix_field(require(cj, "b"), "kernel.components.b");
    if (comp.b.rows() != dh || comp.b.cols() != dv)
      fail("kernel.components.b", "must be dim_h x dim_v");
    if (comp.phi_index < 0 || comp.phi_index >= du)
      fail("kernel.components.phi_index", "out of range for dim_u");
    out.push_back(std::move(comp));
  }
  return KernelSpec(du, dv, dh, std::move(out));
}

std::vector<Vec> vector_list(const json& j, const std::string& field, int dim) {
  if (!j.is_array() || j.empty()) fail(field, "must be a nonempty array");
  std::vector<Vec> out;
  for (const auto& v : j) {
    Vec x = vector_field(v, field);
    if (x.size() != dim) fail(field, "entries must have length dim_h");
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.config_hash = fnv1a_hash(text);

  const json& spaces = require(j, "spaces");
  cfg.dim_u = integer(spaces, "dim_u");
  cfg.dim_v = integer(spaces, "dim_v");
  cfg.dim_h = integer(spaces, "dim_h");
  if (cfg.dim_u < 1) fail("spaces.dim_u", "must be >= 1");
  if (cfg.dim_v < 1) fail("spaces.dim_v", "must be >= 1");
  if (cfg.dim_h < 1) fail("spaces.dim_h", "must be >= 1");

  cfg.kernel = parse_kernel(require(j, "kernel"), cfg.dim_u, cfg.dim_v, cfg.dim_h);
  cfg.vol = parse_vol(require(j, "volatility"), cfg.dim_u);
  cfg.noise = parse_levy(require(j, "noise"), "noise", cfg.dim_v);
  if (auto it = j.find("vol_shared_seed_with_noise"); it != j.end())
    cfg.vol_shared_seed = it->get<bool>();

  const json& grid = require(j, "grid");
  cfg.dt = number(grid, "dt");
  if (!(cfg.dt > 0.0)) fail("grid.dt", "must be positive");
  cfg.n_steps = integer(grid, "n_steps");
  if (cfg.n_steps < 1) fail("grid.n_steps", "must be >= 1");
  cfg.dx = number_or(grid, "dx", cfg.dt);
  if (!(cfg.dx > 0.0)) fail("grid.dx", "must be positive");
  if (cfg.dt > cfg.dx * (1.0 + 1e-12)) fail("grid.dt", "violates CFL (dt > dx)");
  cfg.j_nodes = grid.contains("j_nodes") ? integer(grid, "j_nodes") : cfg.n_steps;
  if (cfg.j_nodes < 1) fail("grid.j_nodes", "must be >= 1");
  cfg.t_final = number_or(grid, "t_final", cfg.n_steps * cfg.dt);
  cfg.x_max = number_or(grid, "x_max", cfg.j_nodes * cfg.dx);
  if (auto it = grid.find("levels"); it != grid.end()) {
    cfg.levels = integer(grid, "levels");
    if (cfg.levels < 3) fail("grid.levels", "must be >= 3");
  }

  cfg.weight_alpha = number_or(j, "weight_alpha", 1.0);
  if (!(cfg.weight_alpha > 0.0)) fail("weight_alpha", "must be positive");
  if (auto it = j.find("seed"); it != j.end())
    cfg.seed = it->get<std::uint64_t>();
  if (auto it = j.find("n_paths"); it != j.end()) {
    cfg.n_paths = it->get<int>();
    if (cfg.n_paths < 1) fail("n_paths", "must be >= 1");
  }
  if (auto it = j.find("out_dir"); it != j.end()) cfg.out_dir = it->get<std::string>();

  if (auto it = j.find("charfn"); it != j.end()) {
    cfg.charfn_t = number(*it, "t");
    cfg.charfn_h = vector_list(require(*it, "h"), "charfn.h", cfg.dim_h);
  }
  if (auto it = j.find("project"); it != j.end()) {
    cfg.project_t = number(*it, "t");
    cfg.project_s = number(*it, "s");
    if (cfg.project_s > cfg.project_t) fail("project.s", "must be <= project.t");
    cfg.project_xi = vector_list(require(*it, "xi"), "project.xi", cfg.dim_h);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hambit
