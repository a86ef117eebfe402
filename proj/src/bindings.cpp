#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hambit/analysis.hpp"
#include "hambit/fdscheme.hpp"
#include "hambit/kernels.hpp"
#include "hambit/noise.hpp"
#include "hambit/simulate.hpp"

namespace py = pybind11;
using namespace hambit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation toolkit for Hilbert-space-valued volatility-modulated fields";

  py::class_<CovarianceOp>(m, "CovarianceOp")
      .def(py::init<Vec>(), py::arg("eigenvalues"))
      .def_static("identity", &CovarianceOp::identity)
      .def_readonly("eigenvalues", &CovarianceOp::eigenvalues)
      .def_property_readonly("trace", &CovarianceOp::trace);

  py::class_<LevySpec>(m, "LevySpec")
      .def_static("wiener", &LevySpec::wiener, py::arg("q"))
      .def_static("compound_poisson", &LevySpec::compound_poisson,
                  py::arg("intensity"), py::arg("jump_cov"))
      .def("cumulant", &LevySpec::cumulant)
      .def("covariance", &LevySpec::covariance);

  py::class_<ScalarKernel>(m, "ScalarKernel")
      .def_static("exponential", &ScalarKernel::exponential, py::arg("kappa"))
      .def_static("constant", &ScalarKernel::constant, py::arg("value"))
      .def("__call__", &ScalarKernel::operator());

  py::class_<KernelComponent>(m, "KernelComponent")
      .def(py::init([](int phi_index, const ScalarKernel& g, const Mat& b) {
             KernelComponent c;
             c.phi_index = phi_index;
             c.g = g;
             c.b = b;
             return c;
           }),
           py::arg("phi_index"), py::arg("g"), py::arg("b"));

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init<int, int, int, std::vector<KernelComponent>>(), py::arg("dim_u"),
           py::arg("dim_v"), py::arg("dim_h"), py::arg("components"))
      .def("eval", &KernelSpec::eval, py::arg("t"), py::arg("s"), py::arg("sigma"))
      .def("op_norm_bound", &KernelSpec::op_norm_bound)
      .def("lipschitz_bound", &KernelSpec::lipschitz_bound);

  py::class_<VolatilityModel>(m, "VolatilityModel")
      .def_static("constant", &VolatilityModel::constant, py::arg("sigma0"))
      .def_static("scalar_lss", &VolatilityModel::scalar_lss, py::arg("rho"),
                  py::arg("driver"))
      .def_static("operator_ou", &VolatilityModel::operator_ou, py::arg("c"),
                  py::arg("jump_intensity"), py::arg("jump_scale"), py::arg("y0"))
      .def_property_readonly("dim_u", &VolatilityModel::dim_u);

  py::class_<VolPaths>(m, "VolPaths")
      .def_readonly("dt", &VolPaths::dt)
      .def_readonly("n_paths", &VolPaths::n_paths)
      .def_readonly("n_steps", &VolPaths::n_steps)
      .def_readonly("data", &VolPaths::data)
      .def_readonly("clipped", &VolPaths::clipped);

  py::class_<IncrementBatch>(m, "IncrementBatch")
      .def_readonly("dt", &IncrementBatch::dt)
      .def_readonly("n_paths", &IncrementBatch::n_paths)
      .def_readonly("n_steps", &IncrementBatch::n_steps)
      .def_readonly("data", &IncrementBatch::data);

  py::class_<PathEnsemble>(m, "PathEnsemble")
      .def_readonly("dt", &PathEnsemble::dt)
      .def_readonly("data", &PathEnsemble::data)
      .def_property_readonly("n_paths", &PathEnsemble::n_paths)
      .def_property_readonly("n_steps", &PathEnsemble::n_steps);

  py::class_<TruncationLevels>(m, "TruncationLevels")
      .def(py::init([](int n, int mm, int k) {
             TruncationLevels l;
             l.n = n;
             l.m = mm;
             l.k = k;
             return l;
           }),
           py::arg("n"), py::arg("m"), py::arg("k"));

  py::class_<CharFnEstimate>(m, "CharFnEstimate")
      .def_readonly("value", &CharFnEstimate::value)
      .def_readonly("std_error", &CharFnEstimate::std_error);

  py::class_<IsometryResult>(m, "IsometryResult")
      .def_readonly("empirical", &IsometryResult::empirical)
      .def_readonly("quadrature", &IsometryResult::quadrature)
      .def_readonly("std_error", &IsometryResult::std_error);

  py::class_<ProjectionResult>(m, "ProjectionResult")
      .def_readonly("gram", &ProjectionResult::gram)
      .def_readonly("c", &ProjectionResult::c)
      .def_readonly("gamma", &ProjectionResult::gamma);

  py::class_<BinomialIdentity>(m, "BinomialIdentity")
      .def_readonly("lhs", &BinomialIdentity::lhs)
      .def_readonly("rhs", &BinomialIdentity::rhs);

  m.def("sample_increments", &sample_increments, py::arg("spec"), py::arg("dt"),
        py::arg("n_steps"), py::arg("n_paths"), py::arg("seed"), py::arg("threads") = 1);
  m.def("sample_volatility", &sample_volatility, py::arg("model"), py::arg("dt"),
        py::arg("n_steps"), py::arg("n_paths"), py::arg("seed"), py::arg("threads") = 1,
        py::arg("shared_seed_with_noise") = false);
  m.def("expected_hs_norm_sq", &expected_hs_norm_sq, py::arg("model"), py::arg("t"));
  m.def("hambit_direct", &hambit_direct, py::arg("kernel"), py::arg("vol"),
        py::arg("noise"), py::arg("threads") = 1);
  m.def("vmv_series", &vmv_series, py::arg("kernel"), py::arg("vol"), py::arg("noise"),
        py::arg("levels"), py::arg("threads") = 1);
  m.def("truncation_error_bound", &truncation_error_bound);
  m.def("conditional_covariance", &conditional_covariance, py::arg("kernel"),
        py::arg("sigma_path"), py::arg("dt"), py::arg("q"), py::arg("t"));
  m.def("stationary_covariance", &stationary_covariance, py::arg("kernel"),
        py::arg("sigma0"), py::arg("q"), py::arg("horizon"), py::arg("tol"));
  m.def("char_functional_mc", &char_functional_mc);
  m.def("char_functional_analytic", &char_functional_analytic);
  m.def("project", &project, py::arg("kernel"), py::arg("sigma"), py::arg("q"),
        py::arg("t"), py::arg("s"), py::arg("xi"));
  m.def("isometry_check", &isometry_check);
  m.def("binomial_variance_identity", &binomial_variance_identity, py::arg("m"),
        py::arg("dt"), py::arg("dx"));
  m.def(
      "fd_boundary",
      [](double dt, double dx, int n_steps, int j_nodes, const KernelSpec& kernel,
         const VolPaths& vol, const IncrementBatch& noise, int threads) {
        FDConfig cfg;
        cfg.dt = dt;
        cfg.dx = dx;
        cfg.n_steps = n_steps;
        cfg.j_nodes = j_nodes;
        return fd_run(cfg, kernel, vol, noise, nullptr, threads).boundary;
      },
      py::arg("dt"), py::arg("dx"), py::arg("n_steps"), py::arg("j_nodes"),
      py::arg("kernel"), py::arg("vol"), py::arg("noise"), py::arg("threads") = 1);
}
