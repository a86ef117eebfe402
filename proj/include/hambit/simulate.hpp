#pragma once

// Non-FD computational routes to the field X(t): direct left-point quadrature
// (the oracle), truncated series representation, projection onto a finite
// frame, plus covariance and characteristic-functional calculators.

#include <complex>
#include <vector>

#include "hambit/kernels.hpp"
#include "hambit/noise.hpp"

namespace hambit {

struct TruncationLevels {
  int n = 1, m = 1, k = 1;
};

/// Sample paths of X on the uniform grid t_i = i*dt; row 0 is X(0) = 0.
struct PathEnsemble {
  double dt = 0.0;
  std::vector<Mat> data;  // per path: (n_steps + 1) x dim_h

  int n_paths() const { return static_cast<int>(data.size()); }
  int n_steps() const { return data.empty() ? 0 : static_cast<int>(data[0].rows()) - 1; }
  int dim_h() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
  /// Grid index of t; throws when t is not a grid point.
  int time_index(double t) const;
};

/// Left-point Riemann sum X(t_n) = sum_{i<n} Gamma(t_n, t_i)(sigma_i) dL_i.
/// Exponential and constant scalar kernels admit an exact one-step recursion,
/// so the cost is linear in the number of steps.
PathEnsemble hambit_direct(const KernelSpec& kernel, const VolPaths& vol,
                           const IncrementBatch& noise, int threads = 1);

/// Truncated series X_{N,M,K}: keeps sigma-coordinates n < N, noise
/// coordinates m < M, and target coordinates k < K. At full levels this is
/// the identical arithmetic as hambit_direct.
PathEnsemble vmv_series(const KernelSpec& kernel, const VolPaths& vol,
                        const IncrementBatch& noise, TruncationLevels levels,
                        int threads = 1);

/// Scalar component path Y_{n,m,k}(t_i) for every path, computed as its own
/// left-point Riemann sum against the coordinate increments dL_m.
std::vector<Vec> vmv_component(const KernelSpec& kernel, const VolPaths& vol,
                               const IncrementBatch& noise, int n, int m, int k);

/// Upper bound on (E |X(t) - X_{N,M,K}(t)|^2)^{1/2}: Minkowski sum over every
/// discarded index triple of the componentwise second-moment bound
/// E[Y^2] <= sqrt(E[L_m(1)^2]) * int_0^t c_{nmk}^2(t,s) E[(sigma(s),u_n)^2] ds,
/// with left-point quadrature at step `dt`. Valid whenever the noise
/// covariance eigenvalues are <= 1. The sum runs over the full complement of
/// the index box, so cross terms (small n but large m, etc.) are included.
double truncation_error_bound(const KernelSpec& kernel, const VolatilityModel& vol,
                              const LevySpec& noise, TruncationLevels levels,
                              double t, double dt);

/// Conditional covariance of X(t) given the volatility path:
/// sum_{i: t_i < t} Gamma(t,t_i)(sigma_i) Q Gamma(t,t_i)(sigma_i)' dt.
Mat conditional_covariance(const KernelSpec& kernel, const Mat& sigma_path,
                           double dt, const CovarianceOp& q, double t);

/// Covariance of the stationary version, int_0^inf G(s) Q G(s)' ds, by Simpson
/// quadrature on [0, horizon]. Requires every scalar kernel exponential with
/// kappa > 0; throws if the analytic tail bound beyond `horizon` exceeds tol.
Mat stationary_covariance(const KernelSpec& kernel, const Vec& sigma0,
                          const CovarianceOp& q, double horizon, double tol);

struct CharFnEstimate {
  std::complex<double> value;
  double std_error = 0.0;
};

/// Monte Carlo estimate of E exp(i <h, X(t)>) with jackknife standard error.
CharFnEstimate char_functional_mc(const PathEnsemble& ensemble, double t, const Vec& h);

/// Cumulant-formula side: per volatility path the quadrature of
/// Psi_L((Gamma(t,s)(sigma(s)))* h) ds, then the average of exponentials.
/// Requires sigma independent of L; rejects shared-seed volatility.
std::complex<double> char_functional_analytic(const KernelSpec& kernel,
                                              const VolPaths& vol,
                                              const LevySpec& noise, double t,
                                              const Vec& h);

struct ProjectionResult {
  Mat gram;   // H_n, pairwise inner products of the frame
  Mat c;      // covariance matrix C(t,s)
  Mat gamma;  // symmetric PSD root, gamma * gamma' = c
};

/// Projection data for the frame xi at kernel arguments (t, s):
/// C_ij = (Q^{1/2} Gamma(t,s)(sigma)* xi_i, Q^{1/2} Gamma(t,s)(sigma)* xi_j).
/// Throws when the Gram matrix condition number exceeds 1e12.
ProjectionResult project(const KernelSpec& kernel, const Vec& sigma,
                         const CovarianceOp& q, double t, double s,
                         const std::vector<Vec>& xi);

/// P_n(f) = (f, xi)' H_n^{-1} xi, the best approximation in span(xi).
Vec apply_projection(const std::vector<Vec>& xi, const Vec& f);

struct IsometryResult {
  double empirical = 0.0;   // mean of |X_p(t)|^2
  double quadrature = 0.0;  // mean over sigma-paths of int ||Gamma sigma Q^{1/2}||^2_HS
  double std_error = 0.0;   // standard error of the per-path difference
};

IsometryResult isometry_check(const PathEnsemble& ensemble, const KernelSpec& kernel,
                              const VolPaths& vol, const CovarianceOp& q, double t);

}  // namespace hambit
