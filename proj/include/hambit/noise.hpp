#pragma once

// Square-integrable zero-mean driving noise in the eigenbasis of its
// covariance operator: Q-Wiener increments or compensated compound Poisson
// with mean-zero Gaussian jumps.

#include <complex>
#include <cstdint>
#include <vector>

#include "hambit/hilbert.hpp"

namespace hambit {

struct LevySpec {
  enum class Kind { Wiener, CompoundPoisson };

  Kind kind = Kind::Wiener;
  CovarianceOp base;       // Q for Wiener, the jump covariance otherwise
  double intensity = 0.0;  // expected jumps per unit time (compound Poisson)

  static LevySpec wiener(CovarianceOp q);
  static LevySpec compound_poisson(double intensity, CovarianceOp jump_cov);

  int dim() const { return base.dim(); }

  /// Covariance operator of L(1).
  CovarianceOp covariance() const;

  /// Cumulant functional of L(1). Real-valued for both variants since the
  /// jump law is symmetric; kept complex to match the general contract.
  std::complex<double> cumulant(const Vec& v) const;
};

/// Independent increments with law L(dt), indexed (path, step).
struct IncrementBatch {
  double dt = 0.0;
  int n_paths = 0;
  int n_steps = 0;
  std::vector<Mat> data;  // per path: n_steps x dim, one increment per row

  int dim() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
  const Mat& path(int p) const { return data[p]; }
};

/// Exact sampling of increments; one deterministic substream per path, so
/// results are independent of worker count.
IncrementBatch sample_increments(const LevySpec& spec, double dt, int n_steps,
                                 int n_paths, std::uint64_t seed, int threads = 1);

/// Sums groups of `factor` consecutive increments; pathwise-consistent
/// coarsening of a fine batch (used for coupled refinement studies).
IncrementBatch aggregate_increments(const IncrementBatch& fine, int factor);

}  // namespace hambit
