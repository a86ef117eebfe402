#include "hambit/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "hambit/parallel.hpp"
#include "hambit/rng.hpp"

namespace hambit {

ScalarKernel ScalarKernel::exponential(double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("exponential kernel: kappa must be nonnegative");
  ScalarKernel k;
  k.kind = Kind::Exponential;
  k.kappa = kappa;
  return k;
}

ScalarKernel ScalarKernel::constant(double value) {
  ScalarKernel k;
  k.kind = Kind::Constant;
  k.value = value;
  return k;
}

double ScalarKernel::operator()(double t, double s) const {
  if (s > t) throw std::invalid_argument("scalar kernel: requires s <= t");
  return kind == Kind::Exponential ? std::exp(-kappa * (t - s)) : value;
}

double ScalarKernel::step_factor(double dt) const {
  return kind == Kind::Exponential ? std::exp(-kappa * dt) : 1.0;
}

KernelSpec::KernelSpec(int du, int dv, int dh, std::vector<KernelComponent> comps)
    : dim_u(du), dim_v(dv), dim_h(dh), components(std::move(comps)) {
  if (du < 1 || dv < 1 || dh < 1)
    throw std::invalid_argument("kernel: dimensions must be positive");
  if (components.empty()) throw std::invalid_argument("kernel: needs at least one component");
  for (const auto& c : components) {
    if (c.phi_index < 0 || c.phi_index >= du)
      throw std::invalid_argument("kernel component: phi_index out of range");
    if (c.b.rows() != dh || c.b.cols() != dv)
      throw std::invalid_argument("kernel component: B must be dim_h x dim_v");
  }
}

Mat KernelSpec::eval(double t, double s, const Vec& sigma) const {
  if (sigma.size() != dim_u) throw std::invalid_argument("kernel eval: sigma dimension mismatch");
  Mat out = Mat::Zero(dim_h, dim_v);
  for (const auto& c : components) out += sigma[c.phi_index] * c.g(t, s) * c.b;
  return out;
}

const std::vector<double>& KernelSpec::b_norms() const {
  if (b_norms_.size() != components.size()) {
    b_norms_.clear();
    b_norms_.reserve(components.size());
    for (const auto& c : components) b_norms_.push_back(operator_norm(c.b));
  }
  return b_norms_;
}

double KernelSpec::op_norm_bound(double t, double s) const {
  const auto& norms = b_norms();
  double acc = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i)
    acc += std::abs(components[i].g(t, s)) * norms[i];
  return acc;
}

double KernelSpec::lipschitz_bound() const {
  const auto& norms = b_norms();
  double acc = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i)
    acc += components[i].g.lipschitz_in_t() * norms[i];
  return acc * acc;
}

VolatilityModel VolatilityModel::constant(Vec s0) {
  if (s0.size() < 1) throw std::invalid_argument("constant volatility: empty sigma");
  VolatilityModel m;
  m.kind = Kind::Constant;
  m.sigma0 = std::move(s0);
  return m;
}

VolatilityModel VolatilityModel::scalar_lss(double rho, LevySpec driver) {
  if (!(rho > 0.0)) throw std::invalid_argument("scalar LSS: rho must be positive");
  VolatilityModel m;
  m.kind = Kind::ScalarLSS;
  m.rho = rho;
  m.driver = std::move(driver);
  return m;
}

VolatilityModel VolatilityModel::operator_ou(Mat c_op, double jump_intensity,
                                             double jump_scale, Mat y0) {
  if (c_op.rows() != c_op.cols() || c_op.rows() < 1)
    throw std::invalid_argument("operator OU: C must be square");
  if (y0.rows() != c_op.rows() || y0.cols() != c_op.cols())
    throw std::invalid_argument("operator OU: Y0 must match C");
  if (jump_intensity < 0.0 || jump_scale < 0.0)
    throw std::invalid_argument("operator OU: jump parameters must be nonnegative");
  if (!y0.isApprox(y0.transpose(), 1e-12))
    throw std::invalid_argument("operator OU: Y0 must be symmetric");
  VolatilityModel m;
  m.kind = Kind::OperatorOU;
  m.ou_dim = static_cast<int>(c_op.rows());
  m.c_op = std::move(c_op);
  m.jump_intensity = jump_intensity;
  m.jump_scale = jump_scale;
  m.y0 = std::move(y0);
  return m;
}

int VolatilityModel::dim_u() const {
  switch (kind) {
    case Kind::Constant: return static_cast<int>(sigma0.size());
    case Kind::ScalarLSS: return driver.dim();
    case Kind::OperatorOU: return ou_dim * ou_dim;
  }
  return 0;
}

namespace {

// Row-major entries of the symmetric PSD root; reports whether the
// eigensolver saw a materially negative eigenvalue.
Eigen::RowVectorXd root_entries(const Mat& y, bool& clipped) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (y + y.transpose()));
  Vec evs = es.eigenvalues();
  for (int i = 0; i < evs.size(); ++i) {
    if (evs[i] < -1e-12) clipped = true;
    evs[i] = evs[i] > 0.0 ? std::sqrt(evs[i]) : 0.0;
  }
  Mat root = es.eigenvectors() * evs.asDiagonal() * es.eigenvectors().transpose();
  Eigen::RowVectorXd out(root.size());
  int d = static_cast<int>(root.rows());
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out[r * d + c] = root(r, c);
  return out;
}

}  // namespace

VolPaths sample_volatility(const VolatilityModel& model, double dt, int n_steps,
                           int n_paths, std::uint64_t seed, int threads,
                           bool shared_seed_with_noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_volatility: dt must be positive");
  if (n_steps < 0 || n_paths < 1)
    throw std::invalid_argument("sample_volatility: invalid counts");

  VolPaths out;
  out.dt = dt;
  out.n_paths = n_paths;
  out.n_steps = n_steps;
  out.shared_seed_with_noise = shared_seed_with_noise;
  int du = model.dim_u();

  if (model.kind == VolatilityModel::Kind::Constant) {
    Mat path(n_steps + 1, du);
    path.rowwise() = model.sigma0.transpose();
    out.data.assign(1, std::move(path));
    return out;
  }

  out.data.assign(n_paths, Mat());
  std::uint64_t purpose = shared_seed_with_noise ? stream::noise : stream::volatility;
  std::vector<char> clip_flags(n_paths, 0);

  if (model.kind == VolatilityModel::Kind::ScalarLSS) {
    double decay = std::exp(-model.rho * dt);
    bool gaussian = model.driver.kind == LevySpec::Kind::Wiener;
    // Wiener driver: the stationary OU transition is Gaussian with exactly
    // this per-coordinate variance, so the recursion is distribution-exact.
    Vec trans_sd = (model.driver.base.eigenvalues *
                    ((1.0 - decay * decay) / (2.0 * model.rho)))
                       .cwiseSqrt();
    Vec jump_root = model.driver.base.sqrt_eigenvalues();
    double jump_mean = model.driver.intensity * dt;
    parallel_for(n_paths, threads, [&](int p) {
      Rng rng(substream_key(seed, purpose, static_cast<std::uint64_t>(p)));
      Mat path = Mat::Zero(n_steps + 1, du);
      for (int i = 0; i < n_steps; ++i) {
        for (int c = 0; c < du; ++c) {
          double incr = gaussian ? trans_sd[c] * rng.normal() : 0.0;
          path(i + 1, c) = decay * path(i, c) + incr;
        }
        if (!gaussian) {
          int count = rng.poisson(jump_mean);
          for (int k = 0; k < count; ++k)
            for (int c = 0; c < du; ++c)
              path(i + 1, c) += jump_root[c] * rng.normal();
        }
      }
      out.data[p] = std::move(path);
    });
  } else {
    int d = model.ou_dim;
    double jump_mean = model.jump_intensity * dt;
    parallel_for(n_paths, threads, [&](int p) {
      Rng rng(substream_key(seed, purpose, static_cast<std::uint64_t>(p)));
      Mat path(n_steps + 1, du);
      Mat y = model.y0;
      bool clipped = false;
      path.row(0) = root_entries(y, clipped);
      Vec g(d);
      for (int i = 0; i < n_steps; ++i) {
        Mat drift = 0.5 * (model.c_op * y + y * model.c_op.transpose());
        y += dt * drift;
        int count = rng.poisson(jump_mean);
        for (int k = 0; k < count; ++k) {
          for (int c = 0; c < d; ++c) g[c] = rng.normal();
          y += model.jump_scale * (g * g.transpose());
        }
        path.row(i + 1) = root_entries(y, clipped);
      }
      out.data[p] = std::move(path);
      clip_flags[p] = clipped ? 1 : 0;
    });
  }
  for (char f : clip_flags) out.clipped = out.clipped || (f != 0);
  return out;
}

double expected_hs_norm_sq(const VolatilityModel& ou, double t) {
  if (ou.kind != VolatilityModel::Kind::OperatorOU)
    throw std::invalid_argument("expected_hs_norm_sq: requires an operator OU model");
  if (t < 0.0) throw std::invalid_argument("expected_hs_norm_sq: t must be nonnegative");
  // Tr E Y(t) = Tr(e^{Ct/2} Y0 e^{C't/2})
  //           + intensity * scale * int_0^t Tr(e^{Cs/2} e^{C's/2}) ds.
  Mat half_flow = (0.5 * t * ou.c_op).exp();
  double acc = (half_flow * ou.y0 * half_flow.transpose()).trace();
  double rate = ou.jump_intensity * ou.jump_scale;
  if (rate > 0.0 && t > 0.0) {
    int n = 64;  // Simpson panels; integrand is smooth
    auto integrand = [&](double s) {
      Mat e = (0.5 * s * ou.c_op).exp();
      return (e * e.transpose()).trace();
    };
    double h = t / (2 * n);
    double sum = integrand(0.0) + integrand(t);
    for (int i = 1; i < 2 * n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
    acc += rate * sum * h / 3.0;
  }
  return acc;
}

double vol_coord_second_moment(const VolatilityModel& model, int n, double s) {
  if (n < 0 || n >= model.dim_u())
    throw std::invalid_argument("vol_coord_second_moment: index out of range");
  if (model.kind == VolatilityModel::Kind::Constant) {
    double v = model.sigma0[n];
    return v * v;
  }
  if (model.kind == VolatilityModel::Kind::ScalarLSS) {
    double lambda = model.driver.covariance().eigenvalues[n];
    return lambda * (1.0 - std::exp(-2.0 * model.rho * s)) / (2.0 * model.rho);
  }
  throw std::invalid_argument(
      "vol_coord_second_moment: not available for the operator OU model");
}

}  // namespace hambit
