#pragma once

// Finite-dimensional coordinate realizations of the state spaces: covariance
// operators in their eigenbasis, the exponentially weighted function space on
// the half line, and grid functions with linear interpolation and flat
// extension past the last node.

#include <Eigen/Dense>
#include <vector>

namespace hambit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Symmetric nonnegative trace-class operator, diagonal in the coordinate
/// basis. Only the eigenvalues are stored.
struct CovarianceOp {
  Vec eigenvalues;

  CovarianceOp() = default;
  explicit CovarianceOp(Vec evs);
  static CovarianceOp identity(int dim);
  static CovarianceOp zero(int dim);

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double trace() const { return eigenvalues.sum(); }
  Vec sqrt_eigenvalues() const { return eigenvalues.cwiseSqrt(); }
};

/// ||A Q^{1/2}||_HS for A mapping the Q-space into another coordinate space.
double hs_norm_with_root(const Mat& a, const CovarianceOp& q);

/// Weight w(x) = exp(alpha x), alpha > 0, so that w(0)=1 and
/// integral of 1/w over the half line equals 1/alpha.
struct WeightFunction {
  double alpha = 1.0;

  explicit WeightFunction(double a);
  double operator()(double x) const { return std::exp(alpha * x); }
  double inverse(double x) const { return std::exp(-alpha * x); }
  double c_squared() const { return 1.0 / alpha; }
};

struct SpaceConstants {
  double c_squared;
  double shift_bound;  // uniform bound on the shift semigroup operator norm
  double eval_bound;   // bound on the point-evaluation operator norm
};

SpaceConstants space_constants(const WeightFunction& w);

/// Discretized element of the weighted function space: values at nodes
/// x_j = j*delta_x, linear interpolation in between, constant beyond the
/// last node.
struct GridFunction {
  double delta_x = 1.0;
  std::vector<Vec> values;

  GridFunction() = default;
  GridFunction(double dx, std::vector<Vec> vals);
  static GridFunction zero(double dx, int n_nodes, int h_dim);

  int nodes() const { return static_cast<int>(values.size()); }
  int last() const { return nodes() - 1; }
  int h_dim() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
  double x_max() const { return last() * delta_x; }
};

/// Right shift by k grid cells; the last value extends flat.
GridFunction shift(const GridFunction& f, int k);

/// Discrete weighted norm: |f(0)|^2 plus left-endpoint quadrature of
/// w |f'|^2 with forward differences, zero derivative past the last node.
double hw_norm(const GridFunction& f, const WeightFunction& w);

/// Inner product inducing hw_norm; requires equal grids and dimensions.
double hw_inner(const GridFunction& f, const GridFunction& g, const WeightFunction& w);

/// Point evaluation with linear interpolation and flat extension.
Vec evaluate(const GridFunction& f, double x);

/// One application of the scheme operator: f + dt (S_dx f - f)/dx.
/// Requires dt <= delta_x (CFL).
GridFunction apply_T(const GridFunction& f, double dt);

/// m-th power of the scheme operator via its binomial expansion over shifts.
GridFunction apply_T_power_binomial(const GridFunction& f, double dt, int m);

/// Scalar representer of point evaluation at x: y -> 1 + int_0^{x ^ y} 1/w,
/// sampled on the given grid (closed form for the exponential weight).
GridFunction representer(double x, const WeightFunction& w, double dx, int n_nodes);

/// <g, h>_w for scalar h (the representer); returns an H-vector so that the
/// pairing reproduces g(x) coordinatewise up to discretization error.
Vec representer_pairing(const GridFunction& g, const GridFunction& h,
                        const WeightFunction& w);

/// Symmetric PSD square root by eigendecomposition, eigenvalues clipped at
/// zero below `clip_tol`.
Mat psd_sqrt(const Mat& m, double clip_tol = 1e-12);

/// Spectral norm.
double operator_norm(const Mat& m);

}  // namespace hambit
