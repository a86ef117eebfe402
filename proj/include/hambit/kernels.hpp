#pragma once

// Finite-rank operator-valued kernels Gamma(t,s) and the stochastic
// volatility models feeding them.

#include <cstdint>
#include <vector>

#include "hambit/hilbert.hpp"
#include "hambit/noise.hpp"

namespace hambit {

struct ScalarKernel {
  enum class Kind { Exponential, Constant };

  Kind kind = Kind::Constant;
  double kappa = 0.0;  // Exponential: g(t,s) = exp(-kappa (t-s))
  double value = 1.0;  // Constant

  static ScalarKernel exponential(double kappa);
  static ScalarKernel constant(double value);

  double operator()(double t, double s) const;
  /// Factor relating g(t+dt, s) to g(t, s); both variants are stationary,
  /// so integrals in t admit an exact one-step recursion.
  double step_factor(double dt) const;
  double lipschitz_in_t() const { return kind == Kind::Exponential ? kappa : 0.0; }
};

/// One separable term of the kernel: sigma -> sigma[phi_index] * g(t,s) * B.
struct KernelComponent {
  int phi_index = 0;
  ScalarKernel g;
  Mat b;  // dim_h x dim_v
};

struct KernelSpec {
  int dim_u = 1, dim_v = 1, dim_h = 1;
  std::vector<KernelComponent> components;

  KernelSpec() = default;
  KernelSpec(int du, int dv, int dh, std::vector<KernelComponent> comps);

  /// Gamma(t,s)(sigma) as a dim_h x dim_v matrix; requires s <= t.
  Mat eval(double t, double s, const Vec& sigma) const;

  /// Upper bound on ||Gamma(t,s)||_op from the componentwise triangle
  /// inequality: sum_i |g_i(t,s)| ||B_i||_op.
  double op_norm_bound(double t, double s) const;

  /// Constant C with ||Gamma(s+x,s)(sigma) - Gamma(s+y,s)(sigma)||_op
  /// <= sqrt(C) |x-y| |sigma|: C = (sum_i kappa_i ||B_i||_op)^2.
  double lipschitz_bound() const;

  /// Cached spectral norms of the component operators.
  const std::vector<double>& b_norms() const;

 private:
  mutable std::vector<double> b_norms_;
};

struct VolatilityModel {
  enum class Kind { Constant, ScalarLSS, OperatorOU };

  Kind kind = Kind::Constant;

  // Constant
  Vec sigma0;

  // ScalarLSS: sigma(t) = int_0^t exp(-rho (t-s)) dU(s), U on the U-space
  double rho = 1.0;
  LevySpec driver;

  // OperatorOU: dY = (C Y + Y C')/2 dt + dZ, sigma = Y^{1/2}; jumps are
  // jump_scale * g g' with g standard Gaussian, arriving at rate
  // jump_intensity. Coordinates of sigma in U are the row-major entries.
  int ou_dim = 0;
  Mat c_op;
  double jump_intensity = 0.0;
  double jump_scale = 0.0;
  Mat y0;

  static VolatilityModel constant(Vec sigma0);
  static VolatilityModel scalar_lss(double rho, LevySpec driver);
  static VolatilityModel operator_ou(Mat c_op, double jump_intensity,
                                     double jump_scale, Mat y0);

  int dim_u() const;
  bool deterministic() const { return kind == Kind::Constant; }
};

/// Sampled volatility paths; sigma used on [t_n, t_{n+1}) is the row at n.
/// A deterministic model stores a single path shared by every index.
struct VolPaths {
  double dt = 0.0;
  int n_paths = 0;
  int n_steps = 0;
  std::vector<Mat> data;  // per stored path: (n_steps + 1) x dim_u
  bool shared_seed_with_noise = false;
  bool clipped = false;  // an OperatorOU step needed eigenvalue clipping

  int dim_u() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
  int stored_paths() const { return static_cast<int>(data.size()); }
  /// Row view for path p at step n (p collapses to 0 when deterministic).
  Eigen::Ref<const Eigen::RowVectorXd> sigma(int p, int step) const {
    return data[stored_paths() == 1 ? 0 : p].row(step);
  }
};

VolPaths sample_volatility(const VolatilityModel& model, double dt, int n_steps,
                           int n_paths, std::uint64_t seed, int threads = 1,
                           bool shared_seed_with_noise = false);

/// E ||sigma(t)||_HS^2 = Tr(Y(t)) for the OperatorOU model, by the matrix
/// exponential flow plus Simpson quadrature of the jump-compensation term.
double expected_hs_norm_sq(const VolatilityModel& ou, double t);

/// E (sigma(s), u_n)^2 at time s, available for the Constant and ScalarLSS
/// models (used by series truncation bounds).
double vol_coord_second_moment(const VolatilityModel& model, int n, double s);

}  // namespace hambit
