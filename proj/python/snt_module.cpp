#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snt/certificate.hpp"
#include "snt/completion.hpp"
#include "snt/constructions.hpp"
#include "snt/examples.hpp"
#include "snt/matcore.hpp"
#include "snt/perturbation.hpp"
#include "snt/search.hpp"
#include "snt/types.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace snt;

namespace {

FitOptions make_options(int restarts, int max_iters, double tol,
                        std::uint64_t seed) {
  FitOptions o;
  o.restarts = restarts;
  o.max_iters = max_iters;
  o.tol_residual = tol;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_sntri, m) {
  m.doc() = "Symmetric nonnegative trifactorization A = B C B^T";

  py::register_exception<DimensionError>(m, "DimensionError",
                                         PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "verify",
      [](const Matrix& a, const Matrix& b, const Matrix& c, double tol) {
        const VerifyReport r = verify_trifactorization(SymMatrix(a), b, c, tol);
        return py::dict("valid"_a = r.valid, "max_residual"_a = r.max_residual,
                        "fro_residual"_a = r.fro_residual,
                        "nonneg_ok"_a = r.nonneg_ok,
                        "symmetry_ok"_a = r.symmetry_ok);
      },
      "a"_a, "b"_a, "c"_a, "tol"_a = 1e-10,
      "Check a = b @ c @ b.T entrywise within tol.");

  m.def(
      "numerical_rank",
      [](const Matrix& a, double tol) {
        return numerical_rank(SymMatrix(a), tol);
      },
      "a"_a, "tol"_a = -1.0);

  m.def(
      "inertia",
      [](const Matrix& a, double tol) {
        const Inertia r = inertia(SymMatrix(a), tol);
        return py::make_tuple(r.pi_plus, r.pi_minus, r.pi_zero);
      },
      "a"_a, "tol"_a = -1.0, "Counts (positive, negative, zero) eigenvalues.");

  m.def(
      "fit",
      [](const Matrix& a, int k, int restarts, int max_iters, double tol,
         std::uint64_t seed) {
        const FitResult r = fit_trifactorization(
            SymMatrix(a), k, make_options(restarts, max_iters, tol, seed));
        return py::dict("b"_a = r.f.b(), "c"_a = r.f.c(),
                        "residual"_a = r.residual,
                        "converged"_a = r.converged,
                        "iterations"_a = r.iterations,
                        "run_index"_a = r.run_index);
      },
      "a"_a, "k"_a, "restarts"_a = 30, "max_iters"_a = 5000, "tol"_a = 1e-7,
      "seed"_a = 12345, "Projected-gradient fit of a width-k trifactor.");

  m.def(
      "bounds",
      [](const Matrix& a, int restarts, int max_iters, double tol,
         std::uint64_t seed) {
        const BoundReport r = bounds_report(
            SymMatrix(a), make_options(restarts, max_iters, tol, seed));
        py::list per_k;
        for (const auto& [k, res] : r.per_k) {
          per_k.append(py::make_tuple(k, res));
        }
        py::object bool_lb = py::none();
        if (r.bool_rank_available) bool_lb = py::int_(r.bool_rank_lower);
        return py::dict("lower"_a = r.lower, "upper"_a = r.upper,
                        "rank_lb"_a = r.rank_lower, "bool_rank_lb"_a = bool_lb,
                        "identity_fallback"_a = r.identity_fallback,
                        "per_k"_a = per_k, "notes"_a = r.notes);
      },
      "a"_a, "restarts"_a = 30, "max_iters"_a = 5000, "tol"_a = 1e-7,
      "seed"_a = 12345, "Width bounds: max(rank, boolean rank) vs best fit.");

  m.def(
      "boolean_rank",
      [](const Matrix& pattern) {
        const BooleanRankResult r = boolean_rank(support_pattern(pattern));
        return py::make_tuple(r.value, r.exact);
      },
      "pattern"_a, "Exact boolean rank of the support of pattern (n <= 8).");

  m.def("edm_matrix", &edm_matrix, "n"_a,
        "Distance matrix of the points 1..n on the line.");

  m.def(
      "edm_factor",
      [](int n) {
        const Trifactor f = edm_factor(n);
        return py::make_tuple(f.b(), f.c());
      },
      "n"_a, "Width n/2+2 trifactor of edm_matrix(n); n must be even.");

  m.def(
      "rank2_factor",
      [](const Matrix& a) {
        const Trifactor f = rank2_factor(SymMatrix(a));
        return py::make_tuple(f.b(), f.c());
      },
      "a"_a, "Width-2 trifactor of a nonnegative symmetric rank-2 matrix.");

  m.def(
      "perturb",
      [](const Matrix& a, const Matrix& s) {
        const PerturbResult r =
            perturb_factorization(SymMatrix(a), PerronSimilarity(s));
        return py::dict("alpha"_a = r.alpha, "beta"_a = r.beta,
                        "b"_a = r.f.b(), "c"_a = r.f.c(),
                        "perturbed"_a = r.a_perturbed.data());
      },
      "a"_a, "s"_a,
      "Minimal diagonal move A + alpha u u^T with a width-rank(A) factor.");

  m.def(
      "optimize_similarity",
      [](const Matrix& a, int budget, std::uint64_t seed) {
        const OptimizeResult r = optimize_similarity(SymMatrix(a), budget, seed);
        return py::dict("s"_a = r.s, "alpha"_a = r.alpha, "beta"_a = r.beta,
                        "evaluations"_a = r.evaluations);
      },
      "a"_a, "budget"_a = 2000, "seed"_a = 12345,
      "Randomized search for a similarity with small alpha.");

  m.def(
      "certify",
      [](const Matrix& b, const Matrix& c, double zero_tol) {
        const MovabilityReport r = check_movable(Trifactor(b, c), zero_tol);
        py::object cert = py::none();
        if (r.certificate.has_value()) {
          cert = py::dict("x"_a = r.certificate->x, "w"_a = r.certificate->w,
                          "max_residual"_a = r.certificate->max_residual);
        }
        return py::dict("movable"_a = r.movable, "reason"_a = r.reason,
                        "certificate"_a = cert);
      },
      "b"_a, "c"_a, "zero_tol"_a = 1e-9,
      "Zero-pattern certificate test for the factor pair (b, c).");

  m.def(
      "complete",
      [](const Matrix& a1, const Matrix& a2, int k, bool strict_x,
         int restarts, int max_iters, double tol, std::uint64_t seed) {
        const CompletionFit r =
            fit_completion(SymMatrix(a1), SymMatrix(a2), k, strict_x,
                           make_options(restarts, max_iters, tol, seed));
        return py::dict("b"_a = r.f.b(), "c"_a = r.f.c(), "x"_a = r.x,
                        "residual"_a = r.residual,
                        "min_cross"_a = r.min_cross,
                        "converged"_a = r.converged);
      },
      "a1"_a, "a2"_a, "k"_a, "strict_x"_a = false, "restarts"_a = 30,
      "max_iters"_a = 5000, "tol"_a = 1e-7, "seed"_a = 12345,
      "Width-k factor matching the diagonal blocks a1, a2.");

  m.def(
      "completion_lower_bound",
      [](const Matrix& a1, const Matrix& a2) {
        return completion_lower_bound(SymMatrix(a1), SymMatrix(a2));
      },
      "a1"_a, "a2"_a);

  m.def(
      "run_example",
      [](const std::string& id, std::uint64_t seed) {
        const ex::ExampleReport r = ex::run_example(id, seed);
        py::list checks;
        for (const auto& c : r.checks) {
          checks.append(py::dict("name"_a = c.name, "expected"_a = c.expected,
                                 "computed"_a = c.actual, "tol"_a = c.tol,
                                 "pass"_a = c.pass));
        }
        return py::dict("id"_a = r.id, "title"_a = r.title, "pass"_a = r.pass,
                        "checks"_a = checks);
      },
      "id"_a, "seed"_a = 12345, "Run one bundled worked example.");

  m.def("example_ids", &ex::example_ids);

  m.attr("__version__") = SNT_VERSION;
}
