#pragma once

// Explicit finite difference scheme for the transport SPDE
// dY = dY/dx dt + beta(t) dL(t), boundary extraction delta_0 Y ~ X, and the
// exact-shift mild reference used for error measurement.

#include <vector>

#include "hambit/kernels.hpp"
#include "hambit/noise.hpp"
#include "hambit/simulate.hpp"

namespace hambit {

struct FDConfig {
  double dt = 0.0;
  double dx = 0.0;
  int n_steps = 0;  // time steps
  int j_nodes = 0;  // output spatial nodes 0..j_nodes

  double lambda() const { return dt / dx; }
  /// Internal grid size; information moves leftward one node per step, so
  /// n_steps extra nodes keep every output node defined at the final time.
  int total_nodes() const { return j_nodes + 1 + n_steps; }
  void validate() const;
};

struct SchemeState {
  int n = 0;
  std::vector<Vec> y;  // internal grid values; active range is 0..last-n
};

/// One scheme update y_j <- lambda y_{j+1} + (1-lambda) y_j + beta_j(dL),
/// applied over the active range, which then shrinks by one from the right.
void fd_step(SchemeState& state, const std::vector<Mat>& beta_row, const Vec& dl,
             const FDConfig& cfg);

struct FDResult {
  double dt = 0.0;
  double dx = 0.0;
  std::vector<Mat> boundary;        // per path: (n_steps+1) x dim_h
  std::vector<GridFunction> field;  // per path: final field on nodes 0..j_nodes
};

/// Full scheme run; for this field beta_j at step n is
/// Gamma(t_n + x_j, t_n)(sigma(t_n)). Null y0 means the zero initial field.
FDResult fd_run(const FDConfig& cfg, const KernelSpec& kernel, const VolPaths& vol,
                const IncrementBatch& noise, const GridFunction* y0 = nullptr,
                int threads = 1);

/// Same approximation through the closed form
/// Y^n = T^n Y_0 + sum_i T^{n-1-i} beta~^i(dL^i), with operator powers taken
/// via their binomial expansion over shifts; a cross-implementation check.
FDResult fd_run_iterative(const FDConfig& cfg, const KernelSpec& kernel,
                          const VolPaths& vol, const IncrementBatch& noise,
                          const GridFunction* y0 = nullptr, int threads = 1);

/// Discretized mild solution with exact shifts:
/// boundary X(t_n) = Y_0(t_n) + sum_{i<n} Gamma(t_i + t_n - t_{i+1}, t_i)(sigma_i) dL_i,
/// field node x_j shifted accordingly. The comparison target whose distance
/// to fd_run isolates the transport error term.
FDResult exact_mild_reference(const FDConfig& cfg, const KernelSpec& kernel,
                              const VolPaths& vol, const IncrementBatch& noise,
                              const GridFunction* y0 = nullptr, int threads = 1);

struct BinomialIdentity {
  double lhs = 0.0;  // sum_k C(m,k) lambda^k (1-lambda)^{m-k} (k dx - t)^2
  double rhs = 0.0;  // t (dx - dt), t = m dt
};

BinomialIdentity binomial_variance_identity(int m, double dt, double dx);

}  // namespace hambit
