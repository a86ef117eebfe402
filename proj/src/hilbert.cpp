#include "hambit/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace hambit {

CovarianceOp::CovarianceOp(Vec evs) : eigenvalues(std::move(evs)) {
  if ((eigenvalues.array() < 0.0).any())
    throw std::invalid_argument("covariance eigenvalues must be nonnegative");
}

CovarianceOp CovarianceOp::identity(int dim) {
  return CovarianceOp(Vec::Ones(dim));
}

CovarianceOp CovarianceOp::zero(int dim) {
  return CovarianceOp(Vec::Zero(dim));
}

double hs_norm_with_root(const Mat& a, const CovarianceOp& q) {
  if (a.cols() != q.dim())
    throw std::invalid_argument("hs_norm_with_root: operator domain does not match Q");
  double acc = 0.0;
  for (int m = 0; m < q.dim(); ++m)
    acc += q.eigenvalues[m] * a.col(m).squaredNorm();
  return std::sqrt(acc);
}

WeightFunction::WeightFunction(double a) : alpha(a) {
  if (!(a > 0.0)) throw std::invalid_argument("weight alpha must be positive");
}

SpaceConstants space_constants(const WeightFunction& w) {
  double c2 = w.c_squared();
  return {c2, std::sqrt(2.0 * (1.0 + c2)), std::sqrt(2.0 * std::max(1.0, c2))};
}

GridFunction::GridFunction(double dx, std::vector<Vec> vals)
    : delta_x(dx), values(std::move(vals)) {
  if (!(dx > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (values.size() < 2) throw std::invalid_argument("grid needs at least two nodes");
  for (const auto& v : values)
    if (v.size() != values[0].size())
      throw std::invalid_argument("grid values must share one dimension");
}

GridFunction GridFunction::zero(double dx, int n_nodes, int h_dim) {
  return GridFunction(dx, std::vector<Vec>(n_nodes, Vec::Zero(h_dim)));
}

GridFunction shift(const GridFunction& f, int k) {
  if (k < 0) throw std::invalid_argument("shift offset must be nonnegative");
  GridFunction out = f;
  int last = f.last();
  for (int j = 0; j <= last; ++j) out.values[j] = f.values[std::min(j + k, last)];
  return out;
}

double hw_norm(const GridFunction& f, const WeightFunction& w) {
  return std::sqrt(hw_inner(f, f, w));
}

double hw_inner(const GridFunction& f, const GridFunction& g, const WeightFunction& w) {
  if (f.nodes() != g.nodes() || f.h_dim() != g.h_dim() || f.delta_x != g.delta_x)
    throw std::invalid_argument("hw_inner: grid mismatch");
  double dx = f.delta_x;
  double acc = f.values[0].dot(g.values[0]);
  for (int j = 0; j < f.last(); ++j) {
    Vec df = (f.values[j + 1] - f.values[j]) / dx;
    Vec dg = (g.values[j + 1] - g.values[j]) / dx;
    acc += w(j * dx) * df.dot(dg) * dx;
  }
  return acc;
}

Vec evaluate(const GridFunction& f, double x) {
  if (x < 0.0) throw std::invalid_argument("evaluate: x must be nonnegative");
  double pos = x / f.delta_x;
  int j = static_cast<int>(std::floor(pos));
  if (j >= f.last()) return f.values[f.last()];
  double theta = pos - j;
  return (1.0 - theta) * f.values[j] + theta * f.values[j + 1];
}

GridFunction apply_T(const GridFunction& f, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("apply_T: dt must be positive");
  if (dt > f.delta_x * (1.0 + 1e-12))
    throw std::invalid_argument("apply_T: CFL violated (dt > delta_x)");
  double lambda = dt / f.delta_x;
  GridFunction out = f;
  for (int j = 0; j < f.last(); ++j)
    out.values[j] = (1.0 - lambda) * f.values[j] + lambda * f.values[j + 1];
  return out;
}

GridFunction apply_T_power_binomial(const GridFunction& f, double dt, int m) {
  if (m < 1) throw std::invalid_argument("apply_T_power_binomial: m must be positive");
  if (dt > f.delta_x * (1.0 + 1e-12))
    throw std::invalid_argument("apply_T_power_binomial: CFL violated");
  double lambda = dt / f.delta_x;
  GridFunction out = GridFunction::zero(f.delta_x, f.nodes(), f.h_dim());
  // weight_k = C(m,k) lambda^k (1-lambda)^{m-k}, built recursively
  double weight = std::pow(1.0 - lambda, m);
  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      if (lambda == 1.0) {
        weight = (k == m) ? 1.0 : 0.0;
      } else {
        weight *= lambda / (1.0 - lambda) * static_cast<double>(m - k + 1) / k;
      }
    }
    if (weight != 0.0) {
      int last = f.last();
      for (int j = 0; j <= last; ++j)
        out.values[j] += weight * f.values[std::min(j + k, last)];
    }
  }
  return out;
}

GridFunction representer(double x, const WeightFunction& w, double dx, int n_nodes) {
  if (x < 0.0) throw std::invalid_argument("representer: x must be nonnegative");
  std::vector<Vec> vals(n_nodes, Vec(1));
  for (int j = 0; j < n_nodes; ++j) {
    double y = std::min(x, j * dx);
    vals[j][0] = 1.0 + (1.0 - std::exp(-w.alpha * y)) / w.alpha;
  }
  return GridFunction(dx, std::move(vals));
}

Vec representer_pairing(const GridFunction& g, const GridFunction& h,
                        const WeightFunction& w) {
  if (h.h_dim() != 1) throw std::invalid_argument("representer_pairing: h must be scalar");
  if (g.nodes() != h.nodes() || g.delta_x != h.delta_x)
    throw std::invalid_argument("representer_pairing: grid mismatch");
  double dx = g.delta_x;
  Vec acc = g.values[0] * h.values[0][0];
  for (int j = 0; j < g.last(); ++j) {
    double dh = (h.values[j + 1][0] - h.values[j][0]) / dx;
    acc += w(j * dx) * dh * (g.values[j + 1] - g.values[j]);
  }
  return acc;
}

Mat psd_sqrt(const Mat& m, double clip_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  Vec evs = es.eigenvalues();
  for (int i = 0; i < evs.size(); ++i)
    evs[i] = evs[i] > clip_tol ? std::sqrt(evs[i]) : 0.0;
  return es.eigenvectors() * evs.asDiagonal() * es.eigenvectors().transpose();
}

double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

}  // namespace hambit
