#include "hambit/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hambit/parallel.hpp"

namespace hambit {

namespace {

constexpr double kGridTol = 1e-9;

int grid_index(double t, double dt, int max_index, const char* who) {
  double pos = t / dt;
  int i = static_cast<int>(std::lround(pos));
  if (std::abs(pos - i) > kGridTol || i < 0 || i > max_index)
    throw std::invalid_argument(std::string(who) + ": t is not on the time grid");
  return i;
}

void check_compat(const KernelSpec& kernel, const VolPaths& vol,
                  const IncrementBatch& noise) {
  if (vol.dim_u() != kernel.dim_u)
    throw std::invalid_argument("simulate: volatility dimension does not match kernel");
  if (noise.dim() != kernel.dim_v)
    throw std::invalid_argument("simulate: noise dimension does not match kernel");
  if (std::abs(vol.dt - noise.dt) > kGridTol * noise.dt)
    throw std::invalid_argument("simulate: volatility and noise grids differ");
  if (vol.n_steps < noise.n_steps)
    throw std::invalid_argument("simulate: volatility path shorter than noise path");
  if (vol.stored_paths() != 1 && vol.n_paths < noise.n_paths)
    throw std::invalid_argument("simulate: fewer volatility paths than noise paths");
}

// Per-component scalar weights of the one-step recursion
//   A_c(i+1) = decay_c (A_c(i) + gain_c sigma_i dL_i),
// which reproduces the left-point sum exactly for stationary kernels:
// exponential components pick up g(t_{i+1}, t_i) on entry, constants keep
// their value.
struct Recursion {
  double decay, gain;
};

Recursion recursion_weights(const ScalarKernel& g, double dt) {
  if (g.kind == ScalarKernel::Kind::Exponential) return {g.step_factor(dt), 1.0};
  return {1.0, g.value};
}

PathEnsemble run_direct(const KernelSpec& kernel, const VolPaths& vol,
                        const IncrementBatch& noise, int threads) {
  check_compat(kernel, vol, noise);
  PathEnsemble out;
  out.dt = noise.dt;
  out.data.assign(noise.n_paths, Mat());

  int n_comp = static_cast<int>(kernel.components.size());
  std::vector<Recursion> rec(n_comp);
  for (int c = 0; c < n_comp; ++c)
    rec[c] = recursion_weights(kernel.components[c].g, noise.dt);

  parallel_for(noise.n_paths, threads, [&](int p) {
    Mat x = Mat::Zero(noise.n_steps + 1, kernel.dim_h);
    Mat acc = Mat::Zero(kernel.dim_h, n_comp);
    for (int i = 0; i < noise.n_steps; ++i) {
      auto sig = vol.sigma(p, i);
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        acc.col(c) += rec[c].gain * sig[comp.phi_index] *
                      (comp.b * noise.data[p].row(i).transpose());
        acc.col(c) *= rec[c].decay;
      }
      x.row(i + 1) = acc.rowwise().sum();
    }
    out.data[p] = std::move(x);
  });
  return out;
}

}  // namespace

int PathEnsemble::time_index(double t) const {
  return grid_index(t, dt, n_steps(), "PathEnsemble");
}

PathEnsemble hambit_direct(const KernelSpec& kernel, const VolPaths& vol,
                           const IncrementBatch& noise, int threads) {
  return run_direct(kernel, vol, noise, threads);
}

PathEnsemble vmv_series(const KernelSpec& kernel, const VolPaths& vol,
                        const IncrementBatch& noise, TruncationLevels levels,
                        int threads) {
  if (levels.n < 1 || levels.n > kernel.dim_u || levels.m < 1 ||
      levels.m > kernel.dim_v || levels.k < 1 || levels.k > kernel.dim_h)
    throw std::invalid_argument("vmv_series: truncation levels out of range");
  // Truncation acts by zeroing: drop components whose sigma-functional index
  // is cut, zero the B columns (noise coordinates) and rows (target
  // coordinates) beyond the kept ranges.
  std::vector<KernelComponent> comps;
  for (const auto& c : kernel.components) {
    if (c.phi_index >= levels.n) continue;
    KernelComponent tc = c;
    tc.b.rightCols(kernel.dim_v - levels.m).setZero();
    tc.b.bottomRows(kernel.dim_h - levels.k).setZero();
    comps.push_back(std::move(tc));
  }
  if (comps.empty()) {
    PathEnsemble out;
    out.dt = noise.dt;
    out.data.assign(noise.n_paths, Mat::Zero(noise.n_steps + 1, kernel.dim_h));
    return out;
  }
  KernelSpec truncated(kernel.dim_u, kernel.dim_v, kernel.dim_h, std::move(comps));
  return run_direct(truncated, vol, noise, threads);
}

std::vector<Vec> vmv_component(const KernelSpec& kernel, const VolPaths& vol,
                               const IncrementBatch& noise, int n, int m, int k) {
  check_compat(kernel, vol, noise);
  if (n < 0 || n >= kernel.dim_u || m < 0 || m >= kernel.dim_v || k < 0 ||
      k >= kernel.dim_h)
    throw std::invalid_argument("vmv_component: index out of range");
  int n_comp = static_cast<int>(kernel.components.size());
  std::vector<Recursion> rec(n_comp);
  for (int c = 0; c < n_comp; ++c)
    rec[c] = recursion_weights(kernel.components[c].g, noise.dt);

  std::vector<Vec> out(noise.n_paths);
  for (int p = 0; p < noise.n_paths; ++p) {
    Vec y = Vec::Zero(noise.n_steps + 1);
    Vec acc = Vec::Zero(n_comp);
    for (int i = 0; i < noise.n_steps; ++i) {
      double sig_n = vol.sigma(p, i)[n];
      double dl_m = noise.data[p](i, m);
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        if (comp.phi_index != n) continue;
        acc[c] = rec[c].decay * (acc[c] + rec[c].gain * comp.b(k, m) * sig_n * dl_m);
      }
      y[i + 1] = acc.sum();
    }
    out[p] = std::move(y);
  }
  return out;
}

double truncation_error_bound(const KernelSpec& kernel, const VolatilityModel& vol,
                              const LevySpec& noise, TruncationLevels levels,
                              double t, double dt) {
  if (!(t >= 0.0) || !(dt > 0.0))
    throw std::invalid_argument("truncation_error_bound: invalid t or dt");
  int steps = static_cast<int>(std::lround(t / dt));
  Vec lambda = noise.covariance().eigenvalues;
  double bound = 0.0;
  for (int n = 0; n < kernel.dim_u; ++n) {
    for (int m = 0; m < kernel.dim_v; ++m) {
      if (lambda[m] == 0.0) continue;
      for (int k = 0; k < kernel.dim_h; ++k) {
        if (n < levels.n && m < levels.m && k < levels.k) continue;
        double integral = 0.0;
        for (int i = 0; i < steps; ++i) {
          double s = i * dt;
          double c = 0.0;
          for (const auto& comp : kernel.components)
            if (comp.phi_index == n) c += comp.g(t, s) * comp.b(k, m);
          if (c != 0.0) integral += c * c * vol_coord_second_moment(vol, n, s) * dt;
        }
        bound += std::sqrt(std::sqrt(lambda[m]) * integral);
      }
    }
  }
  return bound;
}

Mat conditional_covariance(const KernelSpec& kernel, const Mat& sigma_path,
                           double dt, const CovarianceOp& q, double t) {
  if (sigma_path.cols() != kernel.dim_u)
    throw std::invalid_argument("conditional_covariance: sigma dimension mismatch");
  if (q.dim() != kernel.dim_v)
    throw std::invalid_argument("conditional_covariance: Q dimension mismatch");
  int steps = grid_index(t, dt, static_cast<int>(sigma_path.rows()) - 1,
                         "conditional_covariance");
  Mat acc = Mat::Zero(kernel.dim_h, kernel.dim_h);
  for (int i = 0; i < steps; ++i) {
    Mat g = kernel.eval(t, i * dt, sigma_path.row(i).transpose());
    acc += g * q.eigenvalues.asDiagonal() * g.transpose() * dt;
  }
  return 0.5 * (acc + acc.transpose());
}

Mat stationary_covariance(const KernelSpec& kernel, const Vec& sigma0,
                          const CovarianceOp& q, double horizon, double tol) {
  if (!(horizon > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("stationary_covariance: horizon and tol must be positive");
  double kappa_min = std::numeric_limits<double>::infinity();
  for (const auto& c : kernel.components) {
    if (c.g.kind != ScalarKernel::Kind::Exponential || !(c.g.kappa > 0.0))
      throw std::invalid_argument(
          "stationary_covariance: requires exponential kernels with kappa > 0");
    kappa_min = std::min(kappa_min, c.g.kappa);
  }
  // Tail beyond the horizon, bounded by exponential decay of the integrand.
  double amp = 0.0;
  const auto& norms = kernel.b_norms();
  for (std::size_t i = 0; i < kernel.components.size(); ++i)
    amp += std::abs(sigma0[kernel.components[i].phi_index]) * norms[i];
  double tail = amp * amp * q.eigenvalues.maxCoeff() *
                std::exp(-2.0 * kappa_min * horizon) / (2.0 * kappa_min);
  if (tail > tol)
    throw std::invalid_argument(
        "stationary_covariance: tail bound exceeds tolerance; increase horizon");

  auto integrand = [&](double s) -> Mat {
    Mat g = kernel.eval(s, 0.0, sigma0);
    return g * q.eigenvalues.asDiagonal() * g.transpose();
  };
  int panels = std::max(512, static_cast<int>(std::ceil(horizon * 64.0)));
  double h = horizon / (2 * panels);
  Mat sum = integrand(0.0) + integrand(horizon);
  for (int i = 1; i < 2 * panels; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
  Mat acc = sum * h / 3.0;
  return 0.5 * (acc + acc.transpose());
}

CharFnEstimate char_functional_mc(const PathEnsemble& ensemble, double t, const Vec& h) {
  if (h.size() != ensemble.dim_h())
    throw std::invalid_argument("char_functional_mc: h dimension mismatch");
  int idx = ensemble.time_index(t);
  int np = ensemble.n_paths();
  std::vector<std::complex<double>> z(np);
  std::complex<double> mean = 0.0;
  for (int p = 0; p < np; ++p) {
    double phase = ensemble.data[p].row(idx).dot(h);
    z[p] = {std::cos(phase), std::sin(phase)};
    mean += z[p];
  }
  mean /= static_cast<double>(np);
  if (np < 2) return {mean, 0.0};
  // Jackknife over paths; for a plain mean this reduces to the usual
  // standard error of the complex sample mean.
  double var = 0.0;
  for (int p = 0; p < np; ++p) var += std::norm(z[p] - mean);
  return {mean, std::sqrt(var / (static_cast<double>(np) * (np - 1)))};
}

std::complex<double> char_functional_analytic(const KernelSpec& kernel,
                                              const VolPaths& vol,
                                              const LevySpec& noise, double t,
                                              const Vec& h) {
  if (vol.shared_seed_with_noise)
    throw std::invalid_argument(
        "char_functional_analytic: volatility must be sampled independently of the noise");
  if (h.size() != kernel.dim_h)
    throw std::invalid_argument("char_functional_analytic: h dimension mismatch");
  if (noise.dim() != kernel.dim_v)
    throw std::invalid_argument("char_functional_analytic: noise dimension mismatch");
  int steps = grid_index(t, vol.dt, vol.n_steps, "char_functional_analytic");

  int n_comp = static_cast<int>(kernel.components.size());
  std::vector<Vec> bth(n_comp);  // B_c' h, reused across paths and steps
  for (int c = 0; c < n_comp; ++c) bth[c] = kernel.components[c].b.transpose() * h;

  int stored = vol.stored_paths();
  std::complex<double> acc = 0.0;
  Vec v(kernel.dim_v);
  for (int p = 0; p < stored; ++p) {
    std::complex<double> integral = 0.0;
    for (int i = 0; i < steps; ++i) {
      auto sig = vol.sigma(p, i);
      v.setZero();
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        v += sig[comp.phi_index] * comp.g(t, i * vol.dt) * bth[c];
      }
      integral += noise.cumulant(v) * vol.dt;
    }
    acc += std::exp(integral);
  }
  return acc / static_cast<double>(stored);
}

ProjectionResult project(const KernelSpec& kernel, const Vec& sigma,
                         const CovarianceOp& q, double t, double s,
                         const std::vector<Vec>& xi) {
  if (xi.empty()) throw std::invalid_argument("project: empty frame");
  int n = static_cast<int>(xi.size());
  for (const auto& x : xi)
    if (x.size() != kernel.dim_h)
      throw std::invalid_argument("project: frame vector dimension mismatch");

  ProjectionResult out;
  out.gram = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.gram(i, j) = xi[i].dot(xi[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(out.gram);
  double ev_min = es.eigenvalues().minCoeff();
  double ev_max = es.eigenvalues().maxCoeff();
  double cond = ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12))
    throw std::invalid_argument("project: Gram matrix condition number " +
                                std::to_string(cond) + " exceeds 1e12");

  Mat g = kernel.eval(t, s, sigma);
  Mat m = g * q.eigenvalues.asDiagonal() * g.transpose();
  out.c = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.c(i, j) = xi[i].dot(m * xi[j]);
  out.c = 0.5 * (out.c + out.c.transpose()).eval();
  out.gamma = psd_sqrt(out.c);
  return out;
}

Vec apply_projection(const std::vector<Vec>& xi, const Vec& f) {
  int n = static_cast<int>(xi.size());
  Mat gram(n, n);
  Vec rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = f.dot(xi[i]);
    for (int j = 0; j < n; ++j) gram(i, j) = xi[i].dot(xi[j]);
  }
  Vec coef = gram.ldlt().solve(rhs);
  Vec out = Vec::Zero(f.size());
  for (int i = 0; i < n; ++i) out += coef[i] * xi[i];
  return out;
}

IsometryResult isometry_check(const PathEnsemble& ensemble, const KernelSpec& kernel,
                              const VolPaths& vol, const CovarianceOp& q, double t) {
  int idx = ensemble.time_index(t);
  int np = ensemble.n_paths();
  if (np < 2) throw std::invalid_argument("isometry_check: needs at least two paths");

  // Quadrature side per sigma-path; the same path index drives both sides so
  // the difference D_p has the volatility fluctuation removed.
  auto quad_for = [&](int p) {
    double acc = 0.0;
    for (int i = 0; i < idx; ++i) {
      Mat g = kernel.eval(t, i * vol.dt, vol.sigma(p, i).transpose());
      double term = hs_norm_with_root(g, q);
      acc += term * term * vol.dt;
    }
    return acc;
  };

  IsometryResult out;
  std::vector<double> d(np);
  double quad_shared = vol.stored_paths() == 1 ? quad_for(0) : 0.0;
  for (int p = 0; p < np; ++p) {
    double emp = ensemble.data[p].row(idx).squaredNorm();
    double quad = vol.stored_paths() == 1 ? quad_shared : quad_for(p);
    out.empirical += emp;
    out.quadrature += quad;
    d[p] = emp - quad;
  }
  out.empirical /= np;
  out.quadrature /= np;
  double mean_d = out.empirical - out.quadrature;
  double var = 0.0;
  for (double x : d) var += (x - mean_d) * (x - mean_d);
  out.std_error = std::sqrt(var / (static_cast<double>(np) * (np - 1)));
  return out;
}

}  // namespace hambit
