#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "sarrs/estimators.hpp"
#include "sarrs/simbench.hpp"

namespace py = pybind11;
using namespace sarrs;

namespace {

PenaltySpec make_penalty(const std::string& kind, double lambda, std::optional<double> gamma,
                         std::optional<double> cap) {
  return PenaltySpec::auto_level(penalty_kind(kind), gamma, cap).at_level(lambda);
}

SarrsConfig make_config(const std::string& penalty, std::optional<double> lambda,
                        std::optional<double> gamma, std::optional<double> cap,
                        std::optional<int> rank, const std::string& init,
                        std::optional<Matrix> v0, std::optional<double> sigma,
                        std::optional<double> split_sigma, std::uint64_t split_seed, double eta,
                        std::optional<double> init_lambda0, double tol, int max_iter) {
  SarrsConfig config;
  config.penalty = lambda ? make_penalty(penalty, *lambda, gamma, cap)
                          : PenaltySpec::auto_level(penalty_kind(penalty), gamma, cap);
  config.auto_lambda = !lambda.has_value();
  config.rank = rank;
  if (init == "lowrank") config.init = InitMethod::LowRank;
  else if (init == "sparse") config.init = InitMethod::Sparse;
  else if (init == "provided") config.init = InitMethod::Provided;
  else throw InputError("unknown init \"" + init + "\"");
  config.v0 = std::move(v0);
  config.sigma = sigma;
  if (split_sigma) config.splitting = SplitMode{*split_sigma, split_seed};
  config.eta = eta;
  config.init_lambda0 = init_lambda0;
  config.solver.tol = tol;
  config.solver.max_iter = max_iter;
  return config;
}

py::dict report_to_dict(const FitReport& report) {
  py::dict d;
  d["a_hat"] = report.a_hat;
  d["b2"] = report.b2;
  d["v1"] = report.v1;
  d["rank_used"] = report.rank_used;
  d["support"] = report.support;
  d["lambda_used"] = report.diagnostics.lambda_used;
  d["sigma_used"] = report.diagnostics.sigma_used;
  d["gpls_invocations"] = report.diagnostics.gpls_invocations;
  d["gpls_sweeps"] = report.diagnostics.gpls_sweeps;
  d["alternations"] = report.diagnostics.alternations;
  d["init_method"] = report.diagnostics.init_method;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse reduced-rank multivariate regression";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("thin_svd",
        [](const Matrix& a, std::optional<int> k) {
          const ThinSvd svd = k ? thin_svd(a, *k) : thin_svd(a);
          return py::make_tuple(svd.u, svd.singular_values, svd.v);
        },
        py::arg("a"), py::arg("k") = std::nullopt,
        "Leading singular triplets (u, s, v) with a deterministic sign convention");
  m.def("schatten_norm_sq",
        [](const Matrix& a, double q) { return schatten_norm_sq(a, SchattenQ(q)); },
        py::arg("a"), py::arg("q"));
  m.def("operator_norm", &operator_norm, py::arg("a"));
  m.def("projection_onto_column_space", &projection_onto_column_space, py::arg("x"));
  m.def("sparse_riesz_constants",
        [](const Matrix& x, int k) { return sparse_riesz_constants(x, k); }, py::arg("x"),
        py::arg("k"));

  m.def("penalty_value",
        [](const Matrix& b, const std::string& kind, double lambda, std::optional<double> gamma,
           std::optional<double> cap) { return penalty_value(b, make_penalty(kind, lambda, gamma, cap)); },
        py::arg("b"), py::arg("penalty"), py::arg("lambda"), py::arg("gamma") = std::nullopt,
        py::arg("cap") = std::nullopt);
  m.def("group_threshold",
        [](const Vector& v, double curvature, const std::string& kind, double lambda,
           std::optional<double> gamma, std::optional<double> cap) {
          return group_threshold(v, curvature, make_penalty(kind, lambda, gamma, cap));
        },
        py::arg("v"), py::arg("curvature"), py::arg("penalty"), py::arg("lambda"),
        py::arg("gamma") = std::nullopt, py::arg("cap") = std::nullopt);

  m.def("solve_gpls",
        [](const Matrix& x, const Matrix& w, const std::string& kind, double lambda,
           std::optional<double> gamma, std::optional<double> cap, double tol, int max_iter,
           std::optional<Matrix> warm_start) {
          GplsOptions options;
          options.tol = tol;
          options.max_iter = max_iter;
          options.warm_start = std::move(warm_start);
          const GplsSolution sol =
              solve_gpls(GplsProblem(x, w, make_penalty(kind, lambda, gamma, cap)), options);
          py::dict d;
          d["b"] = sol.b;
          d["objective"] = sol.objective;
          d["iterations"] = sol.iterations;
          d["converged"] = sol.converged;
          d["kkt_residual"] = sol.kkt_residual;
          return d;
        },
        py::arg("x"), py::arg("w"), py::arg("penalty"), py::arg("lambda"),
        py::arg("gamma") = std::nullopt, py::arg("cap") = std::nullopt, py::arg("tol") = 1e-7,
        py::arg("max_iter") = 10000, py::arg("warm_start") = std::nullopt,
        "Group-penalized least squares by block coordinate descent");
  m.def("kkt_certificate",
        [](const Matrix& x, const Matrix& w, double lambda, const Matrix& b) {
          return kkt_certificate(GplsProblem(x, w, PenaltySpec::group_lasso(lambda)), b);
        },
        py::arg("x"), py::arg("w"), py::arg("lambda"), py::arg("b"));
  m.def("default_lambda", &default_lambda, py::arg("x"), py::arg("r"), py::arg("sigma"));
  m.def("lambda_grid_max", &lambda_grid_max, py::arg("x"), py::arg("r"), py::arg("sigma"));

  m.def("estimate_sigma", &estimate_sigma, py::arg("y"));
  m.def("init_low_rank",
        [](const Matrix& x, const Matrix& y, double sigma, double eta, std::optional<int> rank) {
          const InitResult r = init_low_rank(x, y, sigma, eta, rank);
          return py::make_tuple(r.r_hat, r.v0);
        },
        py::arg("x"), py::arg("y"), py::arg("sigma"), py::arg("eta") = -1.0,
        py::arg("rank") = std::nullopt);
  m.def("init_sparse",
        [](const Matrix& x, const Matrix& y, double sigma, double lambda0,
           std::optional<double> eta, std::optional<int> rank) {
          const EtaRule rule = eta ? EtaRule{*eta} : EtaRule{EtaFromSupport{}};
          const InitResult r = init_sparse(x, y, sigma, lambda0, rule, rank);
          return py::make_tuple(r.r_hat, r.v0);
        },
        py::arg("x"), py::arg("y"), py::arg("sigma"), py::arg("lambda0") = -1.0,
        py::arg("eta") = std::nullopt, py::arg("rank") = std::nullopt);
  m.def("subspace_overlap", &subspace_overlap, py::arg("v"), py::arg("v0"));

  m.def("split_responses",
        [](const Matrix& y, double sigma, std::uint64_t seed) {
          const SplitResponses s = split_responses(y, sigma, seed);
          return py::make_tuple(s.copies[0], s.copies[1], s.copies[2], s.copies[3]);
        },
        py::arg("y"), py::arg("sigma"), py::arg("seed"));

  const auto fit_args = [](auto fn) {
    return [fn](const Matrix& x, const Matrix& y, const std::string& penalty,
                std::optional<double> lambda, std::optional<double> gamma,
                std::optional<double> cap, std::optional<int> rank, const std::string& init,
                std::optional<Matrix> v0, std::optional<double> sigma,
                std::optional<double> split_sigma, std::uint64_t split_seed, double eta,
                std::optional<double> init_lambda0, double tol, int max_iter) {
      const SarrsConfig config =
          make_config(penalty, lambda, gamma, cap, rank, init, std::move(v0), sigma, split_sigma,
                      split_seed, eta, init_lambda0, tol, max_iter);
      return report_to_dict(fn(x, y, config));
    };
  };
  for (auto [name, fn, doc] :
       {std::tuple{"sarrs_fit", +[](const Matrix& x, const Matrix& y, const SarrsConfig& c) {
                     return sarrs_fit(x, y, c);
                   },
                   "Two-stage sparse reduced-rank fit"},
        std::tuple{"bsw_fit", +[](const Matrix& x, const Matrix& y, const SarrsConfig& c) {
                     return bsw_fit(x, y, c);
                   },
                   "Alternating sparse reduced-rank baseline"}})
    m.def(name, fit_args(fn), py::arg("x"), py::arg("y"), py::arg("penalty") = "grlasso",
          py::arg("lambda") = std::nullopt, py::arg("gamma") = std::nullopt,
          py::arg("cap") = std::nullopt, py::arg("rank") = std::nullopt,
          py::arg("init") = "lowrank", py::arg("v0") = std::nullopt,
          py::arg("sigma") = std::nullopt, py::arg("split_sigma") = std::nullopt,
          py::arg("split_seed") = 0, py::arg("eta") = -1.0,
          py::arg("init_lambda0") = std::nullopt, py::arg("tol") = 1e-7,
          py::arg("max_iter") = 10000, doc);

  m.def("generate_scenario",
        [](int n, int m, int p, int s, int r, double rho, double sigma, double b,
           int n_validation, std::uint64_t seed) {
          Scenario sc;
          sc.name = "python";
          sc.n = n; sc.m = m; sc.p = p; sc.s = s; sc.r = r;
          sc.rho = rho; sc.sigma = sigma; sc.signal = b;
          sc.n_validation = n_validation;
          const ScenarioData data = generate_scenario(sc, seed);
          py::dict d;
          d["x"] = data.x;
          d["y"] = data.y;
          d["a"] = data.a;
          if (n_validation > 0) {
            d["x_validation"] = data.x_validation;
            d["y_validation"] = data.y_validation;
          }
          return d;
        },
        py::arg("n"), py::arg("m"), py::arg("p"), py::arg("s"), py::arg("r"),
        py::arg("rho") = 0.0, py::arg("sigma") = 1.0, py::arg("b") = 1.0,
        py::arg("n_validation") = 0, py::arg("seed") = 1);
  m.def("evaluate",
        [](const Matrix& a_hat, const Matrix& a_true, const Matrix& x_test, const Matrix& y_test) {
          const Metrics mt = evaluate(a_hat, a_true, x_test, y_test);
          py::dict d;
          d["prediction_error"] = mt.prediction_error;
          d["estimation_error"] = mt.estimation_error;
          d["support_size"] = mt.support_size;
          return d;
        },
        py::arg("a_hat"), py::arg("a_true"), py::arg("x_test"), py::arg("y_test"));
}
