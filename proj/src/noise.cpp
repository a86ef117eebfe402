#include "hambit/noise.hpp"

#include <stdexcept>

#include "hambit/parallel.hpp"
#include "hambit/rng.hpp"

namespace hambit {

LevySpec LevySpec::wiener(CovarianceOp q) {
  LevySpec s;
  s.kind = Kind::Wiener;
  s.base = std::move(q);
  return s;
}

LevySpec LevySpec::compound_poisson(double intensity, CovarianceOp jump_cov) {
  if (intensity < 0.0)
    throw std::invalid_argument("compound Poisson intensity must be nonnegative");
  LevySpec s;
  s.kind = Kind::CompoundPoisson;
  s.base = std::move(jump_cov);
  s.intensity = intensity;
  return s;
}

CovarianceOp LevySpec::covariance() const {
  if (kind == Kind::Wiener) return base;
  return CovarianceOp(intensity * base.eigenvalues);
}

std::complex<double> LevySpec::cumulant(const Vec& v) const {
  if (v.size() != dim()) throw std::invalid_argument("cumulant: dimension mismatch");
  double quad = (base.eigenvalues.array() * v.array().square()).sum();
  if (kind == Kind::Wiener) return {-0.5 * quad, 0.0};
  // Levy-Khintchine with symmetric Gaussian jumps; compensator vanishes.
  return {intensity * (std::exp(-0.5 * quad) - 1.0), 0.0};
}

IncrementBatch sample_increments(const LevySpec& spec, double dt, int n_steps,
                                 int n_paths, std::uint64_t seed, int threads) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt must be positive");
  if (n_steps < 0 || n_paths < 0)
    throw std::invalid_argument("sample_increments: negative counts");
  IncrementBatch batch;
  batch.dt = dt;
  batch.n_paths = n_paths;
  batch.n_steps = n_steps;
  batch.data.assign(n_paths, Mat());

  int d = spec.dim();
  Vec root = spec.base.sqrt_eigenvalues();
  double sqrt_dt = std::sqrt(dt);
  double jump_mean = spec.intensity * dt;

  parallel_for(n_paths, threads, [&](int p) {
    Rng rng(substream_key(seed, stream::noise, static_cast<std::uint64_t>(p)));
    Mat m = Mat::Zero(n_steps, d);
    for (int i = 0; i < n_steps; ++i) {
      if (spec.kind == LevySpec::Kind::Wiener) {
        for (int c = 0; c < d; ++c) m(i, c) = sqrt_dt * root[c] * rng.normal();
      } else {
        int count = rng.poisson(jump_mean);
        for (int k = 0; k < count; ++k)
          for (int c = 0; c < d; ++c) m(i, c) += root[c] * rng.normal();
      }
    }
    batch.data[p] = std::move(m);
  });
  return batch;
}

IncrementBatch aggregate_increments(const IncrementBatch& fine, int factor) {
  if (factor < 1 || fine.n_steps % factor != 0)
    throw std::invalid_argument("aggregate_increments: factor must divide n_steps");
  IncrementBatch out;
  out.dt = fine.dt * factor;
  out.n_paths = fine.n_paths;
  out.n_steps = fine.n_steps / factor;
  out.data.reserve(fine.data.size());
  for (const Mat& m : fine.data) {
    Mat c = Mat::Zero(out.n_steps, m.cols());
    for (int i = 0; i < out.n_steps; ++i)
      for (int k = 0; k < factor; ++k) c.row(i) += m.row(i * factor + k);
    out.data.push_back(std::move(c));
  }
  return out;
}

}  // namespace hambit
