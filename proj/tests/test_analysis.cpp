#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hambit/analysis.hpp"

using namespace hambit;

namespace {

KernelSpec scalar_kernel(ScalarKernel g) {
  KernelComponent c;
  c.phi_index = 0;
  c.g = g;
  c.b = Mat::Identity(1, 1);
  return KernelSpec(1, 1, 1, {c});
}

ConvergenceTable synthetic_table(double slope, double scale) {
  ConvergenceTable t;
  double dx = 0.4, dt = 0.2;
  for (int level = 0; level < 5; ++level) {
    ConvergenceRow r;
    r.level = level;
    r.dx = dx;
    r.dt = dt;
    r.lambda = dt / dx;
    r.n_paths = 100;
    r.mse = scale * std::pow(dx - dt, slope);
    t.rows.push_back(r);
    dx /= 2;
    dt /= 2;
  }
  return t;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rate fitting") {
  SUBCASE("recovers a unit slope") {
    FitResult f = fit_rate(synthetic_table(1.0, 3.0), Predictor::DxMinusDt);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.used_rows == 5);
  }
  SUBCASE("recovers a quadratic slope") {
    FitResult f = fit_rate(synthetic_table(2.0, 0.5), Predictor::DxMinusDt);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("constant errors fit a zero slope") {
    FitResult f = fit_rate(synthetic_table(0.0, 0.7), Predictor::DxMinusDt);
    CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("dt predictor sees double the slope at fixed lambda") {
    // mse ~ (dx - dt)^1 = (dt/lambda - dt)^1 is linear in dt as well.
    FitResult f = fit_rate(synthetic_table(1.0, 1.0), Predictor::Dt);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("nonpositive rows are dropped, too few rows throw") {
    ConvergenceTable t = synthetic_table(1.0, 1.0);
    t.rows[0].mse = 0.0;
    FitResult f = fit_rate(t, Predictor::DxMinusDt);
    CHECK(f.used_rows == 4);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-10));
    for (auto& r : t.rows) r.mse = 0.0;
    CHECK_THROWS_AS(fit_rate(t, Predictor::DxMinusDt), std::invalid_argument);
  }
}

TEST_CASE("convergence study") {
  ConvergenceConfig cc;
  cc.base_dx = 0.25;
  cc.base_dt = 0.125;
  cc.n_levels = 3;
  cc.t_final = 1.0;
  cc.x_max = 1.0;
  cc.alpha = 1.0;
  LevySpec noise = LevySpec::wiener(CovarianceOp::identity(1));
  VolatilityModel vol = VolatilityModel::constant(Vec::Ones(1));
  SUBCASE("unit ratio has no scheme error") {
    ConvergenceConfig c1 = cc;
    c1.base_dt = 0.25;  // lambda = 1 at every level
    KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
    ConvergenceTable t = convergence_study(c1, k, vol, noise, 50, 7);
    for (const ConvergenceRow& r : t.rows) CHECK(r.mse <= 1e-20);
  }
  SUBCASE("constant kernel is exact for any ratio") {
    // beta is spatially flat, so the transport step commutes with it.
    KernelSpec k = scalar_kernel(ScalarKernel::constant(1.0));
    ConvergenceTable t = convergence_study(cc, k, vol, noise, 50, 7);
    for (const ConvergenceRow& r : t.rows) CHECK(r.mse <= 1e-20);
  }
  SUBCASE("errors stay below the theoretical bound and shrink") {
    KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
    ConvergenceTable t = convergence_study(cc, k, vol, noise, 400, 11, 4);
    REQUIRE(t.rows.size() == 3);
    for (const ConvergenceRow& r : t.rows) {
      CHECK(r.mse > 0.0);
      CHECK(r.mse <= r.bound_rhs);
    }
    CHECK(t.rows[2].mse < t.rows[0].mse);
    FitResult f = fit_rate(t, Predictor::DxMinusDt);
    CHECK(f.slope > 0.5);
  }
  SUBCASE("grid divisibility is validated") {
    ConvergenceConfig bad = cc;
    bad.t_final = 0.9;  // not a multiple of base_dt
    KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
    CHECK_THROWS_AS(convergence_study(bad, k, vol, noise, 10, 1), std::invalid_argument);
    bad = cc;
    bad.n_levels = 2;
    CHECK_THROWS_AS(convergence_study(bad, k, vol, noise, 10, 1), std::invalid_argument);
  }
}

TEST_CASE("lipschitz constant and bound shape") {
  WeightFunction w(1.0);
  KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
  CovarianceOp q = CovarianceOp::identity(1);
  SUBCASE("zero sigma bound gives zero constant") {
    CHECK(discrete_hs_lipschitz_constant(k, Vec::Zero(1), q, w, 0.1, 50) == 0.0);
  }
  SUBCASE("constant kernels contribute nothing") {
    KernelSpec flat = scalar_kernel(ScalarKernel::constant(2.0));
    CHECK(discrete_hs_lipschitz_constant(flat, Vec::Ones(1), q, w, 0.1, 50) == 0.0);
  }
  SUBCASE("bound vanishes at lambda = 1 up to the dt^2 term") {
    double with_gap = convergence_bound_rhs(k, Vec::Ones(1), q, w, 1.0, 0.2, 0.1, 50);
    double no_gap = convergence_bound_rhs(k, Vec::Ones(1), q, w, 1.0, 0.2, 0.2, 50);
    CHECK(no_gap < with_gap);
    CHECK(no_gap > 0.0);  // the dt^2 remainder survives
  }
  SUBCASE("sigma bound for the constant model is sigma0 itself") {
    Vec s0(2);
    s0 << 1.5, -2.0;
    Vec b = sigma_l2_bound(VolatilityModel::constant(s0), 3.0);
    CHECK(b[0] == doctest::Approx(1.5));
    CHECK(b[1] == doctest::Approx(2.0));
  }
}

TEST_CASE("empirical moments") {
  double dt = 0.1;
  int steps = 10;
  KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
  SUBCASE("zero volatility gives exact zeros") {
    VolPaths vol = sample_volatility(VolatilityModel::constant(Vec::Zero(1)), dt, steps, 1, 0);
    IncrementBatch incr =
        sample_increments(LevySpec::wiener(CovarianceOp::identity(1)), dt, steps, 50, 1);
    MomentEstimate m = empirical_moments(hambit_direct(k, vol, incr), 1.0);
    CHECK(m.mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.covariance.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("mean is statistically zero") {
    VolPaths vol = sample_volatility(VolatilityModel::constant(Vec::Ones(1)), dt, steps, 1, 0);
    IncrementBatch incr =
        sample_increments(LevySpec::wiener(CovarianceOp::identity(1)), dt, steps, 5000, 2, 4);
    MomentEstimate m = empirical_moments(hambit_direct(k, vol, incr), 1.0);
    CHECK(std::abs(m.mean[0]) <= 4.0 * m.mean_std_error[0]);
    CHECK(m.covariance(0, 0) > 0.0);
  }
}

TEST_CASE("deterministic formatting") {
  SUBCASE("round-trips exactly") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, -0.0, 42.0}) {
      CHECK(std::stod(format_double(x)) == x);
    }
  }
  SUBCASE("shortest form for simple values") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
  }
  SUBCASE("hash is stable") {
    CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
    CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
    CHECK(fnv1a_hash("") == 14695981039346656037ull);
  }
}

TEST_CASE("csv emission") {
  std::string dir = "/tmp/hambit_csv_test";
  std::remove((dir + "/a.csv").c_str());
  std::string cmd = "mkdir -p " + dir;
  REQUIRE(std::system(cmd.c_str()) == 0);

  KernelSpec k = scalar_kernel(ScalarKernel::exponential(1.0));
  VolPaths vol = sample_volatility(VolatilityModel::constant(Vec::Ones(1)), 0.1, 5, 1, 0);
  IncrementBatch incr =
      sample_increments(LevySpec::wiener(CovarianceOp::identity(1)), 0.1, 5, 3, 9);
  PathEnsemble ens = hambit_direct(k, vol, incr);

  SUBCASE("repeated writes are byte-identical") {
    write_ensemble_csv(dir + "/a.csv", ens, 123, 9);
    std::string first = slurp(dir + "/a.csv");
    write_ensemble_csv(dir + "/a.csv", ens, 123, 9);
    CHECK(first == slurp(dir + "/a.csv"));
    CHECK(first.find("# config_hash=123") != std::string::npos);
    CHECK(first.find("# seed=9") != std::string::npos);
  }
  SUBCASE("matrix writer round-trips the entries") {
    Mat m(2, 2);
    m << 0.25, -1.0 / 3.0, 7.0, 0.0;
    write_matrix_csv(dir + "/m.csv", m, "cov", 1, 2);
    std::string text = slurp(dir + "/m.csv");
    CHECK(text.find("0.25") != std::string::npos);
    CHECK(text.find(format_double(-1.0 / 3.0)) != std::string::npos);
  }
  SUBCASE("unwritable path raises IoError") {
    CHECK_THROWS_AS(write_ensemble_csv("/nonexistent_dir_xyz/out.csv", ens, 1, 2), IoError);
  }
}
