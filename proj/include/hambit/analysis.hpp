#pragma once

// Convergence studies against the mild reference, rate fitting, moment
// estimators, and CSV report emission.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hambit/fdscheme.hpp"
#include "hambit/kernels.hpp"
#include "hambit/simulate.hpp"

namespace hambit {

/// Raised by the CSV writers; lets callers separate file-system failures
/// from computation failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceRow {
  int level = 0;
  double dx = 0.0;
  double dt = 0.0;
  double lambda = 0.0;
  int n_paths = 0;
  double mse = 0.0;        // mean squared weighted-norm error at the final time
  double std_error = 0.0;  // standard error of the squared-error mean
  double bound_rhs = 0.0;  // theoretical upper bound at this level
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

struct ConvergenceConfig {
  double base_dx = 0.0;
  double base_dt = 0.0;
  int n_levels = 0;   // dyadic refinements of (dx, dt), lambda held fixed
  double t_final = 0.0;
  double x_max = 0.0;  // spatial extent of the error norm
  double alpha = 1.0;  // weight of the discrete norm
};

/// Runs the scheme against the exact mild reference on dyadically refined
/// grids with coupled increments: one batch is sampled at the finest step and
/// aggregated upward, so each row measures scheme error on the same noise
/// realizations. The error is the discrete weighted norm of the final-time
/// field difference.
ConvergenceTable convergence_study(const ConvergenceConfig& cfg,
                                   const KernelSpec& kernel,
                                   const VolatilityModel& vol, const LevySpec& noise,
                                   int n_paths, std::uint64_t seed, int threads = 1);

/// Theoretical squared-error bound for one grid level: with zero initial
/// condition and node-exact beta sampling the surviving terms are
/// 8 C t^2 (dx - dt) + 8 C t (1 + shift_bound^2 / 3) dt^2, where C is the
/// discrete-norm Lipschitz constant from discrete_hs_lipschitz_constant.
double convergence_bound_rhs(const KernelSpec& kernel, const Vec& sigma_bound,
                             const CovarianceOp& q, const WeightFunction& w,
                             double t, double dx, double dt, int grid_nodes);

/// Constant C with E || (S_x beta(s) - S_y beta(s)) Q^{1/2} ||_HS^2
/// <= C |x - y|^2 in the discrete weighted norm on the given grid;
/// sigma_bound[n] bounds sqrt(E (sigma(s), u_n)^2) uniformly in s.
double discrete_hs_lipschitz_constant(const KernelSpec& kernel,
                                      const Vec& sigma_bound, const CovarianceOp& q,
                                      const WeightFunction& w, double dx,
                                      int grid_nodes);

/// Per-coordinate uniform bound on sqrt(E (sigma(s), u_n)^2) over s in [0, t].
Vec sigma_l2_bound(const VolatilityModel& model, double t);

enum class Predictor { DxMinusDt, Dt };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int used_rows = 0;  // rows with positive mse entering the fit
};

/// Ordinary least squares of log(mse) on the log of the chosen predictor;
/// rows with nonpositive mse are excluded.
FitResult fit_rate(const ConvergenceTable& table, Predictor predictor);

struct MomentEstimate {
  Vec mean;
  Vec mean_std_error;
  Mat covariance;
  Mat covariance_std_error;
};

MomentEstimate empirical_moments(const PathEnsemble& ensemble, double t);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

/// FNV-1a hash of a string, printed in output headers so a result file can be
/// matched to its configuration.
std::uint64_t fnv1a_hash(const std::string& s);

// CSV writers; every file starts with comment lines carrying the config hash
// and seed, then a header row. Values use shortest round-trip formatting so
// emit/parse round-trips are exact and repeated runs are byte-identical.
void write_ensemble_csv(const std::string& path, const PathEnsemble& ensemble,
                        std::uint64_t config_hash, std::uint64_t seed);
void write_boundary_csv(const std::string& path, const std::vector<Mat>& boundary,
                        double dt, std::uint64_t config_hash, std::uint64_t seed);
void write_convergence_csv(const std::string& path, const ConvergenceTable& table,
                           std::uint64_t config_hash, std::uint64_t seed);
void write_matrix_csv(const std::string& path, const Mat& m, const std::string& name,
                      std::uint64_t config_hash, std::uint64_t seed);

struct CharFnRow {
  Vec h;
  std::complex<double> mc;
  double std_error = 0.0;
  std::complex<double> analytic;
};

void write_charfn_csv(const std::string& path, const std::vector<CharFnRow>& rows,
                      std::uint64_t config_hash, std::uint64_t seed);

}  // namespace hambit
