#include "hambit/fdscheme.hpp"

#include <cmath>
#include <stdexcept>

#include "hambit/parallel.hpp"

namespace hambit {

namespace {

constexpr double kCflSlack = 1.0 + 1e-12;

void check_inputs(const FDConfig& cfg, const KernelSpec& kernel, const VolPaths& vol,
                  const IncrementBatch& noise) {
  cfg.validate();
  if (vol.dim_u() != kernel.dim_u)
    throw std::invalid_argument("fdscheme: volatility dimension does not match kernel");
  if (noise.dim() != kernel.dim_v)
    throw std::invalid_argument("fdscheme: noise dimension does not match kernel");
  if (noise.n_steps < cfg.n_steps || vol.n_steps < cfg.n_steps)
    throw std::invalid_argument("fdscheme: fewer sampled steps than configured");
  if (std::abs(vol.dt - cfg.dt) > 1e-9 * cfg.dt ||
      std::abs(noise.dt - cfg.dt) > 1e-9 * cfg.dt)
    throw std::invalid_argument("fdscheme: sampled step size differs from config");
  if (vol.stored_paths() != 1 && vol.n_paths < noise.n_paths)
    throw std::invalid_argument("fdscheme: fewer volatility paths than noise paths");
}

Mat initial_values(const FDConfig& cfg, const GridFunction* y0, int dim_h) {
  Mat y = Mat::Zero(cfg.total_nodes(), dim_h);
  if (y0) {
    if (y0->h_dim() != dim_h)
      throw std::invalid_argument("fdscheme: y0 dimension does not match kernel");
    for (int j = 0; j < cfg.total_nodes(); ++j)
      y.row(j) = evaluate(*y0, j * cfg.dx).transpose();
  }
  return y;
}

/// g_c at spatial lag x (the kernels are stationary, so
/// g(t + x, t) = g(x, 0)).
double lag_value(const ScalarKernel& g, double x) { return g(x, 0.0); }

GridFunction field_from_rows(const FDConfig& cfg, const Mat& y) {
  std::vector<Vec> vals(cfg.j_nodes + 1);
  for (int j = 0; j <= cfg.j_nodes; ++j) vals[j] = y.row(j).transpose();
  return GridFunction(cfg.dx, std::move(vals));
}

}  // namespace

void FDConfig::validate() const {
  if (!(dt > 0.0) || !(dx > 0.0))
    throw std::invalid_argument("FDConfig: dt and dx must be positive");
  if (lambda() > kCflSlack)
    throw std::invalid_argument("FDConfig: CFL violated (dt > dx)");
  if (n_steps < 1 || j_nodes < 1)
    throw std::invalid_argument("FDConfig: n_steps and j_nodes must be positive");
}

void fd_step(SchemeState& state, const std::vector<Mat>& beta_row, const Vec& dl,
             const FDConfig& cfg) {
  cfg.validate();
  int active_last = static_cast<int>(state.y.size()) - 1 - state.n;
  if (active_last < 1)
    throw std::invalid_argument("fd_step: internal grid exhausted");
  if (static_cast<int>(beta_row.size()) < active_last)
    throw std::invalid_argument("fd_step: beta row shorter than active range");
  double lambda = cfg.lambda();
  for (int j = 0; j < active_last; ++j)
    state.y[j] = lambda * state.y[j + 1] + (1.0 - lambda) * state.y[j] +
                 beta_row[j] * dl;
  state.n += 1;
}

FDResult fd_run(const FDConfig& cfg, const KernelSpec& kernel, const VolPaths& vol,
                const IncrementBatch& noise, const GridFunction* y0, int threads) {
  check_inputs(cfg, kernel, vol, noise);
  int n_comp = static_cast<int>(kernel.components.size());
  int total = cfg.total_nodes();
  // Node profile of each component at lag x_j, shared across paths and steps.
  Mat profile(n_comp, total);
  for (int c = 0; c < n_comp; ++c)
    for (int j = 0; j < total; ++j)
      profile(c, j) = lag_value(kernel.components[c].g, j * cfg.dx);

  Mat y_init = initial_values(cfg, y0, kernel.dim_h);
  double lambda = cfg.lambda();

  FDResult out;
  out.dt = cfg.dt;
  out.dx = cfg.dx;
  out.boundary.assign(noise.n_paths, Mat());
  out.field.assign(noise.n_paths, GridFunction());

  parallel_for(noise.n_paths, threads, [&](int p) {
    Mat y = y_init;
    Mat boundary = Mat::Zero(cfg.n_steps + 1, kernel.dim_h);
    boundary.row(0) = y.row(0);
    Mat w(n_comp, kernel.dim_h);  // sigma_c B_c dL per component
    for (int n = 0; n < cfg.n_steps; ++n) {
      auto sig = vol.sigma(p, n);
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        w.row(c) = sig[comp.phi_index] *
                   (comp.b * noise.data[p].row(n).transpose()).transpose();
      }
      int active_last = total - 1 - n;
      for (int j = 0; j < active_last; ++j) {
        y.row(j) = lambda * y.row(j + 1) + (1.0 - lambda) * y.row(j);
        for (int c = 0; c < n_comp; ++c) y.row(j) += profile(c, j) * w.row(c);
      }
      boundary.row(n + 1) = y.row(0);
    }
    out.boundary[p] = std::move(boundary);
    out.field[p] = field_from_rows(cfg, y);
  });
  return out;
}

FDResult fd_run_iterative(const FDConfig& cfg, const KernelSpec& kernel,
                          const VolPaths& vol, const IncrementBatch& noise,
                          const GridFunction* y0, int threads) {
  check_inputs(cfg, kernel, vol, noise);
  int n_comp = static_cast<int>(kernel.components.size());
  int total = cfg.total_nodes();
  Mat y_init = initial_values(cfg, y0, kernel.dim_h);

  std::vector<Vec> init_vals(total);
  for (int j = 0; j < total; ++j) init_vals[j] = y_init.row(j).transpose();
  GridFunction start(cfg.dx, init_vals);

  auto power = [&](const GridFunction& f, int m) {
    return m == 0 ? f : apply_T_power_binomial(f, cfg.dt, m);
  };

  FDResult out;
  out.dt = cfg.dt;
  out.dx = cfg.dx;
  out.boundary.assign(noise.n_paths, Mat());
  out.field.assign(noise.n_paths, GridFunction());

  parallel_for(noise.n_paths, threads, [&](int p) {
    // beta~^i(dL^i) as grid functions, built once per path.
    std::vector<GridFunction> beta_dl(cfg.n_steps);
    for (int i = 0; i < cfg.n_steps; ++i) {
      auto sig = vol.sigma(p, i);
      std::vector<Vec> vals(total, Vec::Zero(kernel.dim_h));
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        Vec w = sig[comp.phi_index] * (comp.b * noise.data[p].row(i).transpose());
        for (int j = 0; j < total; ++j)
          vals[j] += lag_value(comp.g, j * cfg.dx) * w;
      }
      beta_dl[i] = GridFunction(cfg.dx, std::move(vals));
    }

    Mat boundary = Mat::Zero(cfg.n_steps + 1, kernel.dim_h);
    boundary.row(0) = start.values[0].transpose();
    GridFunction final_state;
    for (int n = 1; n <= cfg.n_steps; ++n) {
      GridFunction acc = power(start, n);
      for (int i = 0; i < n; ++i) {
        GridFunction term = power(beta_dl[i], n - 1 - i);
        for (int j = 0; j < total; ++j) acc.values[j] += term.values[j];
      }
      boundary.row(n) = acc.values[0].transpose();
      if (n == cfg.n_steps) final_state = std::move(acc);
    }
    out.boundary[p] = std::move(boundary);
    std::vector<Vec> vals(final_state.values.begin(),
                          final_state.values.begin() + cfg.j_nodes + 1);
    out.field[p] = GridFunction(cfg.dx, std::move(vals));
  });
  return out;
}

FDResult exact_mild_reference(const FDConfig& cfg, const KernelSpec& kernel,
                              const VolPaths& vol, const IncrementBatch& noise,
                              const GridFunction* y0, int threads) {
  check_inputs(cfg, kernel, vol, noise);
  int n_comp = static_cast<int>(kernel.components.size());
  // Per-component recursion A_c(n) = sum_{i<n} g_c(t_n - t_{i+1}, 0)
  // sigma_{c,i} B_c dL_i; exact for stationary kernels since the lag factors
  // multiply. Field node x_j then scales each A_c by g_c(x_j, 0).
  std::vector<double> decay(n_comp), boundary_weight(n_comp);
  for (int c = 0; c < n_comp; ++c) {
    const auto& g = kernel.components[c].g;
    decay[c] = g.step_factor(cfg.dt);
    boundary_weight[c] = g.kind == ScalarKernel::Kind::Exponential ? 1.0 : g.value;
  }

  FDResult out;
  out.dt = cfg.dt;
  out.dx = cfg.dx;
  out.boundary.assign(noise.n_paths, Mat());
  out.field.assign(noise.n_paths, GridFunction());

  parallel_for(noise.n_paths, threads, [&](int p) {
    Mat boundary = Mat::Zero(cfg.n_steps + 1, kernel.dim_h);
    Mat acc = Mat::Zero(kernel.dim_h, n_comp);
    if (y0) boundary.row(0) = evaluate(*y0, 0.0).transpose();
    for (int n = 0; n < cfg.n_steps; ++n) {
      auto sig = vol.sigma(p, n);
      for (int c = 0; c < n_comp; ++c) {
        const auto& comp = kernel.components[c];
        acc.col(c) = decay[c] * acc.col(c) +
                     boundary_weight[c] * sig[comp.phi_index] *
                         (comp.b * noise.data[p].row(n).transpose());
      }
      boundary.row(n + 1) = acc.rowwise().sum();
      if (y0)
        boundary.row(n + 1) += evaluate(*y0, (n + 1) * cfg.dt).transpose();
    }
    out.boundary[p] = std::move(boundary);

    std::vector<Vec> vals(cfg.j_nodes + 1);
    double t_final = cfg.n_steps * cfg.dt;
    for (int j = 0; j <= cfg.j_nodes; ++j) {
      Vec v = Vec::Zero(kernel.dim_h);
      for (int c = 0; c < n_comp; ++c) {
        double scale = lag_value(kernel.components[c].g, j * cfg.dx);
        if (kernel.components[c].g.kind == ScalarKernel::Kind::Constant)
          scale = 1.0;  // the constant value already sits in the recursion
        v += scale * acc.col(c);
      }
      if (y0) v += evaluate(*y0, j * cfg.dx + t_final);
      vals[j] = std::move(v);
    }
    out.field[p] = GridFunction(cfg.dx, std::move(vals));
  });
  return out;
}

BinomialIdentity binomial_variance_identity(int m, double dt, double dx) {
  if (m < 1) throw std::invalid_argument("binomial_variance_identity: m must be positive");
  if (!(dt > 0.0) || !(dx > 0.0) || dt > dx * kCflSlack)
    throw std::invalid_argument("binomial_variance_identity: CFL violated");
  double lambda = dt / dx;
  double t = m * dt;
  BinomialIdentity out;
  out.rhs = t * (dx - dt);
  double weight = std::pow(1.0 - lambda, m);
  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      if (lambda == 1.0)
        weight = (k == m) ? 1.0 : 0.0;
      else
        weight *= lambda / (1.0 - lambda) * static_cast<double>(m - k + 1) / k;
    }
    double dev = k * dx - t;
    out.lhs += weight * dev * dev;
  }
  return out;
}

}  // namespace hambit
