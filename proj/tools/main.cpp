// Command-line front end: simulate | converge | charfn | project.
// Exit codes: 0 ok, 2 validation failure, 3 computation failure, 4 I/O failure.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>

#include "hambit/analysis.hpp"
#include "hambit/config.hpp"
#include "hambit/fdscheme.hpp"
#include "hambit/parallel.hpp"
#include "hambit/simulate.hpp"

namespace {

using namespace hambit;

struct CliOverrides {
  std::string config_path;
  std::int64_t seed = -1;
  int paths = -1;
  int threads = 0;
  std::string out_dir;
};

RunConfig load_with_overrides(const CliOverrides& cli) {
  RunConfig cfg = load_config(cli.config_path);
  if (cli.seed >= 0) cfg.seed = static_cast<std::uint64_t>(cli.seed);
  if (cli.paths > 0) cfg.n_paths = cli.paths;
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_simulate(const RunConfig& cfg, int threads) {
  VolPaths vol = sample_volatility(cfg.vol, cfg.dt, cfg.n_steps, cfg.n_paths,
                                   cfg.seed, threads, cfg.vol_shared_seed);
  IncrementBatch noise =
      sample_increments(cfg.noise, cfg.dt, cfg.n_steps, cfg.n_paths, cfg.seed, threads);

  PathEnsemble direct = hambit_direct(cfg.kernel, vol, noise, threads);
  TruncationLevels full{cfg.dim_u, cfg.dim_v, cfg.dim_h};
  PathEnsemble series = vmv_series(cfg.kernel, vol, noise, full, threads);

  FDConfig fd;
  fd.dt = cfg.dt;
  fd.dx = cfg.dx;
  fd.n_steps = cfg.n_steps;
  fd.j_nodes = cfg.j_nodes;
  FDResult scheme = fd_run(fd, cfg.kernel, vol, noise, nullptr, threads);

  write_ensemble_csv(out_path(cfg, "direct.csv"), direct, cfg.config_hash, cfg.seed);
  write_ensemble_csv(out_path(cfg, "series.csv"), series, cfg.config_hash, cfg.seed);
  write_boundary_csv(out_path(cfg, "fd_boundary.csv"), scheme.boundary, cfg.dt,
                     cfg.config_hash, cfg.seed);
  return 0;
}

int cmd_converge(const RunConfig& cfg, int threads) {
  ConvergenceConfig cc;
  cc.base_dx = cfg.dx;
  cc.base_dt = cfg.dt;
  cc.n_levels = cfg.levels;
  cc.t_final = cfg.t_final;
  cc.x_max = cfg.x_max;
  cc.alpha = cfg.weight_alpha;
  ConvergenceTable table =
      convergence_study(cc, cfg.kernel, cfg.vol, cfg.noise, cfg.n_paths, cfg.seed, threads);
  write_convergence_csv(out_path(cfg, "convergence.csv"), table, cfg.config_hash, cfg.seed);
  FitResult fit = fit_rate(table, Predictor::DxMinusDt);
  std::cout << "slope=" << format_double(fit.slope)
            << " r_squared=" << format_double(fit.r_squared) << "\n";
  return 0;
}

int cmd_charfn(const RunConfig& cfg, int threads) {
  if (cfg.charfn_h.empty())
    throw std::invalid_argument("config: charfn section is required for this command");
  VolPaths vol = sample_volatility(cfg.vol, cfg.dt, cfg.n_steps, cfg.n_paths,
                                   cfg.seed, threads, cfg.vol_shared_seed);
  IncrementBatch noise =
      sample_increments(cfg.noise, cfg.dt, cfg.n_steps, cfg.n_paths, cfg.seed, threads);
  PathEnsemble ensemble = hambit_direct(cfg.kernel, vol, noise, threads);

  std::vector<CharFnRow> rows;
  for (const Vec& h : cfg.charfn_h) {
    CharFnRow row;
    row.h = h;
    CharFnEstimate mc = char_functional_mc(ensemble, cfg.charfn_t, h);
    row.mc = mc.value;
    row.std_error = mc.std_error;
    row.analytic = char_functional_analytic(cfg.kernel, vol, cfg.noise, cfg.charfn_t, h);
    rows.push_back(std::move(row));
  }
  write_charfn_csv(out_path(cfg, "charfn.csv"), rows, cfg.config_hash, cfg.seed);
  return 0;
}

int cmd_project(const RunConfig& cfg, int threads) {
  if (cfg.project_xi.empty())
    throw std::invalid_argument("config: project section is required for this command");
  VolPaths vol = sample_volatility(cfg.vol, cfg.dt, cfg.n_steps, 1, cfg.seed, threads,
                                   cfg.vol_shared_seed);
  int step = static_cast<int>(std::lround(cfg.project_s / cfg.dt));
  if (std::abs(step * cfg.dt - cfg.project_s) > 1e-9 || step > vol.n_steps)
    throw std::invalid_argument("config: project.s must lie on the time grid");
  Vec sigma = vol.sigma(0, step).transpose();
  ProjectionResult res = project(cfg.kernel, sigma, cfg.noise.covariance(),
                                 cfg.project_t, cfg.project_s, cfg.project_xi);
  write_matrix_csv(out_path(cfg, "gram.csv"), res.gram, "gram", cfg.config_hash, cfg.seed);
  write_matrix_csv(out_path(cfg, "c.csv"), res.c, "c", cfg.config_hash, cfg.seed);
  write_matrix_csv(out_path(cfg, "gamma.csv"), res.gamma, "gamma", cfg.config_hash,
                   cfg.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for Hilbert-space-valued "
               "volatility-modulated fields"};
  app.require_subcommand(1);

  CliOverrides cli;
  app.add_option("--threads", cli.threads, "worker threads (default: hardware)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "JSON config file")->required();
    sub->add_option("--seed", cli.seed, "override config seed");
    sub->add_option("--paths", cli.paths, "override config path count");
    sub->add_option("--out", cli.out_dir, "override output directory");
  };
  CLI::App* sim = app.add_subcommand("simulate", "direct, series and FD paths");
  CLI::App* conv = app.add_subcommand("converge", "grid refinement study");
  CLI::App* chf = app.add_subcommand("charfn", "characteristic functional comparison");
  CLI::App* proj = app.add_subcommand("project", "finite-frame projection matrices");
  for (CLI::App* sub : {sim, conv, chf, proj}) add_common(sub);

  CLI11_PARSE(app, argc, argv);
  int threads = cli.threads > 0 ? cli.threads : hambit::default_threads();

  try {
    hambit::RunConfig cfg = load_with_overrides(cli);
    if (sim->parsed()) return cmd_simulate(cfg, threads);
    if (conv->parsed()) return cmd_converge(cfg, threads);
    if (chf->parsed()) return cmd_charfn(cfg, threads);
    return cmd_project(cfg, threads);
  } catch (const hambit::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 3;
  }
}
