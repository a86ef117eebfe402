#include "hambit/analysis.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hambit {

namespace {

VolPaths subsample_volatility(const VolPaths& fine, int factor) {
  VolPaths out;
  out.dt = fine.dt * factor;
  out.n_paths = fine.n_paths;
  out.n_steps = fine.n_steps / factor;
  out.shared_seed_with_noise = fine.shared_seed_with_noise;
  out.clipped = fine.clipped;
  out.data.reserve(fine.data.size());
  for (const Mat& m : fine.data) {
    Mat c(out.n_steps + 1, m.cols());
    for (int i = 0; i <= out.n_steps; ++i) c.row(i) = m.row(i * factor);
    out.data.push_back(std::move(c));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

void write_header(std::ofstream& f, std::uint64_t config_hash, std::uint64_t seed) {
  f << "# config_hash=" << config_hash << "\n# seed=" << seed << "\n";
}

}  // namespace

double discrete_hs_lipschitz_constant(const KernelSpec& kernel,
                                      const Vec& sigma_bound, const CovarianceOp& q,
                                      const WeightFunction& w, double dx,
                                      int grid_nodes) {
  if (sigma_bound.size() != kernel.dim_u)
    throw std::invalid_argument("lipschitz constant: sigma bound dimension mismatch");
  if (q.dim() != kernel.dim_v)
    throw std::invalid_argument("lipschitz constant: Q dimension mismatch");
  int n_comp = static_cast<int>(kernel.components.size());
  // Weighted tails W_c = sum_j w(x_j) exp(-2 kappa_c x_j) dx on the grid.
  std::vector<double> root_wc(n_comp, 0.0);
  for (int c = 0; c < n_comp; ++c) {
    const auto& g = kernel.components[c].g;
    if (g.kind != ScalarKernel::Kind::Exponential) continue;
    double acc = 0.0;
    for (int j = 0; j < grid_nodes; ++j) {
      double x = j * dx;
      acc += w(x) * std::exp(-2.0 * g.kappa * x) * dx;
    }
    root_wc[c] = std::sqrt(acc);
  }

  double total = 0.0;
  for (int m = 0; m < kernel.dim_v; ++m) {
    double point = 0.0;  // bound at the left boundary value
    double deriv = 0.0;  // bound on the weighted derivative term
    for (int c = 0; c < n_comp; ++c) {
      const auto& comp = kernel.components[c];
      if (comp.g.kind != ScalarKernel::Kind::Exponential) continue;
      double bvm = comp.b.col(m).norm();
      double s = sigma_bound[comp.phi_index] * comp.g.kappa * bvm;
      point += s;
      deriv += s * comp.g.kappa * root_wc[c];
    }
    total += q.eigenvalues[m] * (point * point + deriv * deriv);
  }
  return total;
}

double convergence_bound_rhs(const KernelSpec& kernel, const Vec& sigma_bound,
                             const CovarianceOp& q, const WeightFunction& w,
                             double t, double dx, double dt, int grid_nodes) {
  double c = discrete_hs_lipschitz_constant(kernel, sigma_bound, q, w, dx, grid_nodes);
  double sup_s_sq = space_constants(w).shift_bound;
  sup_s_sq *= sup_s_sq;
  return 8.0 * c * t * t * (dx - dt) +
         8.0 * c * t * (1.0 + sup_s_sq / 3.0) * dt * dt;
}

Vec sigma_l2_bound(const VolatilityModel& model, double t) {
  switch (model.kind) {
    case VolatilityModel::Kind::Constant:
      return model.sigma0.cwiseAbs();
    case VolatilityModel::Kind::ScalarLSS: {
      Vec out(model.dim_u());
      for (int n = 0; n < out.size(); ++n)
        out[n] = std::sqrt(vol_coord_second_moment(model, n, t));
      return out;
    }
    case VolatilityModel::Kind::OperatorOU: {
      // Each coordinate second moment is dominated by the expected squared
      // Hilbert-Schmidt norm; take its maximum over a sampling of [0, t].
      double sup = 0.0;
      for (int i = 0; i <= 64; ++i)
        sup = std::max(sup, expected_hs_norm_sq(model, t * i / 64.0));
      return Vec::Constant(model.dim_u(), std::sqrt(sup));
    }
  }
  throw std::invalid_argument("sigma_l2_bound: unknown volatility model");
}

ConvergenceTable convergence_study(const ConvergenceConfig& cfg,
                                   const KernelSpec& kernel,
                                   const VolatilityModel& vol, const LevySpec& noise,
                                   int n_paths, std::uint64_t seed, int threads) {
  if (cfg.n_levels < 3)
    throw std::invalid_argument("convergence_study: needs at least 3 levels");
  if (!(cfg.base_dx > 0.0) || !(cfg.base_dt > 0.0) || cfg.base_dt > cfg.base_dx * (1.0 + 1e-12))
    throw std::invalid_argument("convergence_study: invalid base grid (CFL)");
  if (n_paths < 2) throw std::invalid_argument("convergence_study: needs >= 2 paths");

  int base_steps = static_cast<int>(std::lround(cfg.t_final / cfg.base_dt));
  if (std::abs(base_steps * cfg.base_dt - cfg.t_final) > 1e-9 * cfg.t_final)
    throw std::invalid_argument("convergence_study: t_final not a multiple of base_dt");
  int base_nodes = static_cast<int>(std::lround(cfg.x_max / cfg.base_dx));
  if (base_nodes < 1 || std::abs(base_nodes * cfg.base_dx - cfg.x_max) > 1e-9 * cfg.x_max)
    throw std::invalid_argument("convergence_study: x_max not a multiple of base_dx");

  int fine_factor = 1 << (cfg.n_levels - 1);
  double fine_dt = cfg.base_dt / fine_factor;
  int fine_steps = base_steps * fine_factor;
  IncrementBatch fine = sample_increments(noise, fine_dt, fine_steps, n_paths, seed, threads);
  VolPaths fine_vol = sample_volatility(vol, fine_dt, fine_steps, n_paths, seed, threads);

  WeightFunction w(cfg.alpha);
  Vec sig_bound = sigma_l2_bound(vol, cfg.t_final);

  ConvergenceTable table;
  for (int level = 0; level < cfg.n_levels; ++level) {
    int factor = 1 << (cfg.n_levels - 1 - level);
    IncrementBatch batch = factor == 1 ? fine : aggregate_increments(fine, factor);
    VolPaths level_vol = factor == 1 ? fine_vol : subsample_volatility(fine_vol, factor);

    FDConfig fd;
    fd.dt = cfg.base_dt / (1 << level);
    fd.dx = cfg.base_dx / (1 << level);
    fd.n_steps = base_steps * (1 << level);
    fd.j_nodes = base_nodes * (1 << level);
    fd.validate();

    FDResult approx = fd_run(fd, kernel, level_vol, batch, nullptr, threads);
    FDResult reference = exact_mild_reference(fd, kernel, level_vol, batch, nullptr, threads);

    std::vector<double> sq(n_paths);
    double mean = 0.0;
    for (int p = 0; p < n_paths; ++p) {
      GridFunction diff = approx.field[p];
      for (int j = 0; j < diff.nodes(); ++j)
        diff.values[j] -= reference.field[p].values[j];
      double e = hw_norm(diff, w);
      sq[p] = e * e;
      mean += sq[p];
    }
    mean /= n_paths;
    double var = 0.0;
    for (double s : sq) var += (s - mean) * (s - mean);

    ConvergenceRow row;
    row.level = level;
    row.dx = fd.dx;
    row.dt = fd.dt;
    row.lambda = fd.lambda();
    row.n_paths = n_paths;
    row.mse = mean;
    row.std_error = std::sqrt(var / (static_cast<double>(n_paths) * (n_paths - 1)));
    row.bound_rhs = convergence_bound_rhs(kernel, sig_bound, noise.covariance(), w,
                                          cfg.t_final, fd.dx, fd.dt, fd.total_nodes());
    table.rows.push_back(row);
  }
  return table;
}

FitResult fit_rate(const ConvergenceTable& table, Predictor predictor) {
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    if (!(row.mse > 0.0)) continue;
    double x = predictor == Predictor::DxMinusDt ? row.dx - row.dt : row.dt;
    if (!(x > 0.0)) continue;
    xs.push_back(std::log(x));
    ys.push_back(std::log(row.mse));
  }
  int n = static_cast<int>(xs.size());
  if (n < 3) throw std::invalid_argument("fit_rate: fewer than 3 usable rows");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  out.used_rows = n;
  return out;
}

MomentEstimate empirical_moments(const PathEnsemble& ensemble, double t) {
  int idx = ensemble.time_index(t);
  int np = ensemble.n_paths();
  int d = ensemble.dim_h();
  if (np < 2) throw std::invalid_argument("empirical_moments: needs at least two paths");

  MomentEstimate out;
  out.mean = Vec::Zero(d);
  for (int p = 0; p < np; ++p) out.mean += ensemble.data[p].row(idx).transpose();
  out.mean /= np;

  out.mean_std_error = Vec::Zero(d);
  out.covariance = Mat::Zero(d, d);
  Mat second = Mat::Zero(d, d);  // mean of squared centered products
  for (int p = 0; p < np; ++p) {
    Vec c = ensemble.data[p].row(idx).transpose() - out.mean;
    out.mean_std_error += c.cwiseProduct(c);
    Mat prod = c * c.transpose();
    out.covariance += prod;
    second += prod.cwiseProduct(prod);
  }
  out.mean_std_error =
      (out.mean_std_error / (static_cast<double>(np) * (np - 1))).cwiseSqrt();
  out.covariance /= (np - 1);
  second /= np;
  Mat var = second - out.covariance.cwiseProduct(out.covariance) * ((np - 1.0) * (np - 1.0) / (np * static_cast<double>(np)));
  out.covariance_std_error = (var.cwiseMax(0.0) / np).cwiseSqrt();
  return out;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_ensemble_csv(const std::string& path, const PathEnsemble& ensemble,
                        std::uint64_t config_hash, std::uint64_t seed) {
  auto f = open_out(path);
  write_header(f, config_hash, seed);
  f << "path,t";
  for (int k = 0; k < ensemble.dim_h(); ++k) f << ",x" << k;
  f << "\n";
  for (int p = 0; p < ensemble.n_paths(); ++p)
    for (int i = 0; i <= ensemble.n_steps(); ++i) {
      f << p << ',' << format_double(i * ensemble.dt);
      for (int k = 0; k < ensemble.dim_h(); ++k)
        f << ',' << format_double(ensemble.data[p](i, k));
      f << "\n";
    }
  finish(f, path);
}

void write_boundary_csv(const std::string& path, const std::vector<Mat>& boundary,
                        double dt, std::uint64_t config_hash, std::uint64_t seed) {
  auto f = open_out(path);
  write_header(f, config_hash, seed);
  int dim = boundary.empty() ? 0 : static_cast<int>(boundary[0].cols());
  f << "path,t";
  for (int k = 0; k < dim; ++k) f << ",x" << k;
  f << "\n";
  for (std::size_t p = 0; p < boundary.size(); ++p)
    for (int i = 0; i < boundary[p].rows(); ++i) {
      f << p << ',' << format_double(i * dt);
      for (int k = 0; k < dim; ++k) f << ',' << format_double(boundary[p](i, k));
      f << "\n";
    }
  finish(f, path);
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table,
                           std::uint64_t config_hash, std::uint64_t seed) {
  auto f = open_out(path);
  write_header(f, config_hash, seed);
  f << "level,dx,dt,lambda,n_paths,mse,stderr,bound_rhs\n";
  for (const auto& r : table.rows)
    f << r.level << ',' << format_double(r.dx) << ',' << format_double(r.dt) << ','
      << format_double(r.lambda) << ',' << r.n_paths << ',' << format_double(r.mse)
      << ',' << format_double(r.std_error) << ',' << format_double(r.bound_rhs)
      << "\n";
  finish(f, path);
}

void write_matrix_csv(const std::string& path, const Mat& m, const std::string& name,
                      std::uint64_t config_hash, std::uint64_t seed) {
  auto f = open_out(path);
  write_header(f, config_hash, seed);
  f << "# name=" << name << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) f << ',';
      f << format_double(m(i, j));
    }
    f << "\n";
  }
  finish(f, path);
}

void write_charfn_csv(const std::string& path, const std::vector<CharFnRow>& rows,
                      std::uint64_t config_hash, std::uint64_t seed) {
  auto f = open_out(path);
  write_header(f, config_hash, seed);
  int dim = rows.empty() ? 0 : static_cast<int>(rows[0].h.size());
  for (int k = 0; k < dim; ++k) f << 'h' << k << ',';
  f << "re_mc,im_mc,stderr,re_analytic,im_analytic\n";
  for (const auto& r : rows) {
    for (int k = 0; k < dim; ++k) f << format_double(r.h[k]) << ',';
    f << format_double(r.mc.real()) << ',' << format_double(r.mc.imag()) << ','
      << format_double(r.std_error) << ',' << format_double(r.analytic.real()) << ','
      << format_double(r.analytic.imag()) << "\n";
  }
  finish(f, path);
}

}  // namespace hambit
