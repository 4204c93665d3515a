#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "incentives/cli.hpp"
#include "incentives/contracts.hpp"
#include "incentives/error.hpp"
#include "incentives/implementability.hpp"
#include "incentives/io.hpp"
#include "incentives/oracle.hpp"
#include "incentives/orders.hpp"

namespace py = pybind11;
using namespace incentives;

namespace {

// JSON reports become plain Python containers; "inf" markers become floats.
py::object to_py(const io::Json& j) {
  switch (j.type()) {
    case io::Json::value_t::null: return py::none();
    case io::Json::value_t::boolean: return py::bool_(j.get<bool>());
    case io::Json::value_t::number_integer:
    case io::Json::value_t::number_unsigned: return py::int_(j.get<long long>());
    case io::Json::value_t::number_float: return py::float_(j.get<double>());
    case io::Json::value_t::string: {
      const std::string s = j.get<std::string>();
      if (s == "inf") return py::float_(INFINITY);
      if (s == "-inf") return py::float_(-INFINITY);
      return py::str(s);
    }
    case io::Json::value_t::array: {
      py::list l;
      for (const auto& x : j) l.append(to_py(x));
      return l;
    }
    case io::Json::value_t::object: {
      py::dict d;
      for (const auto& item : j.items()) d[py::str(item.key())] = to_py(item.value());
      return d;
    }
    default: return py::none();
  }
}

Tolerances make_tol(double rank, double lp, double residual) {
  Tolerances t;
  t.rank = rank;
  t.lp = lp;
  t.residual = residual;
  t.validate();
  return t;
}

PosteriorDistribution make_distribution(const std::vector<Vector>& posteriors, std::optional<Vector> weights,
                                        std::optional<Vector> prior) {
  std::vector<Belief> support;
  for (const Vector& p : posteriors) support.emplace_back(p);
  if (!weights) {
    if (!prior) throw InputError("give either weights or the prior they should average to");
    weights = bayes_weights(support, Belief(*prior));
  }
  return PosteriorDistribution(std::move(support), *weights);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Implementability, optimal contracts and information orders under noisy monitoring";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<AssumptionError>(m, "AssumptionError", base.ptr());
  py::register_exception<DegenerateExperimentError>(m, "DegenerateExperimentError", base.ptr());
  py::register_exception<NotImplementableError>(m, "NotImplementableError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  py::class_<Belief>(m, "Belief")
      .def(py::init<Vector>(), py::arg("probs"))
      .def_property_readonly("probs", &Belief::probs)
      .def("is_interior", &Belief::is_interior, py::arg("threshold") = kInteriorThreshold)
      .def("__repr__", [](const Belief& b) { return "Belief(" + io::to_json(b.probs()).dump() + ")"; });

  py::class_<Experiment>(m, "Experiment")
      .def(py::init<Matrix>(), py::arg("kernel"))
      .def(py::init<Matrix, std::vector<std::string>, std::vector<std::string>>(), py::arg("kernel"),
           py::arg("states"), py::arg("realizations"))
      .def_property_readonly("kernel", &Experiment::kernel)
      .def_property_readonly("states", &Experiment::states)
      .def_property_readonly("realizations", &Experiment::realizations);

  py::class_<PosteriorDistribution>(m, "PosteriorDistribution")
      .def(py::init(&make_distribution), py::arg("posteriors"), py::arg("weights") = std::nullopt,
           py::arg("prior") = std::nullopt)
      .def_property_readonly("posteriors", [](const PosteriorDistribution& d) { return d.matrix(); })
      .def_readonly("weights", &PosteriorDistribution::weights)
      .def_readonly("labels", &PosteriorDistribution::labels)
      .def_readonly("dropped", &PosteriorDistribution::dropped)
      .def("__len__", &PosteriorDistribution::size);

  py::class_<PosteriorCost>(m, "PosteriorCost")
      .def_property_readonly("kind", &PosteriorCost::kind)
      .def_property_readonly("prior", &PosteriorCost::prior)
      .def_property_readonly("strictly_convex", &PosteriorCost::strictly_convex)
      .def_property_readonly("infinite_boundary_slope", &PosteriorCost::infinite_boundary_slope)
      .def_property_readonly("finite_on_boundary", &PosteriorCost::finite_on_boundary)
      .def("value", py::overload_cast<const Vector&>(&PosteriorCost::value, py::const_))
      .def("marginal", py::overload_cast<const Vector&>(&PosteriorCost::marginal, py::const_));

  py::class_<Contract>(m, "Contract")
      .def(py::init([](Matrix payments, bool ll) {
             Contract c;
             c.payments = std::move(payments);
             c.limited_liability = ll;
             return c;
           }),
           py::arg("payments"), py::arg("limited_liability") = true)
      .def_readonly("payments", &Contract::payments)
      .def_readonly("limited_liability", &Contract::limited_liability)
      .def_readonly("realizations", &Contract::realizations)
      .def_readonly("reports", &Contract::reports);

  py::class_<PseudoInverse>(m, "PseudoInverse")
      .def_readonly("pinv", &PseudoInverse::pinv)
      .def_readonly("rank", &PseudoInverse::rank)
      .def_readonly("singular_values", &PseudoInverse::singular_values)
      .def_readonly("null_basis", &PseudoInverse::null_basis);

  py::class_<ContractFamily>(m, "ContractFamily")
      .def_readonly("base", &ContractFamily::base)
      .def_readonly("nabla", &ContractFamily::nabla)
      .def_readonly("lambda0", &ContractFamily::lambda0)
      .def_property_readonly("null_basis", &ContractFamily::null_basis)
      .def("member", &ContractFamily::member, py::arg("z"), py::arg("w"))
      .def("lambda_", &ContractFamily::lambda, py::arg("z"));

  const Tolerances d;

  m.def("pseudo_inverse", &pseudo_inverse, py::arg("a"), py::arg("rank_tol") = d.rank);
  m.def("numerical_rank", &numerical_rank, py::arg("a"), py::arg("rank_tol") = d.rank);
  m.def("column_space_residual", py::overload_cast<const Matrix&, const Vector&, double>(&column_space_residual),
        py::arg("a"), py::arg("v"), py::arg("rank_tol") = d.rank);

  m.def("posteriors", &posteriors, py::arg("experiment"), py::arg("prior"));
  m.def("is_bayes_plausible", &is_bayes_plausible, py::arg("dist"), py::arg("prior"),
        py::arg("tol") = kPlausibilityTolerance);
  m.def("experiment_from_posteriors", &experiment_from_posteriors, py::arg("dist"), py::arg("prior"));
  m.def("has_full_row_rank", &has_full_row_rank, py::arg("experiment"), py::arg("rank_tol") = d.rank);
  m.def("has_uniform_random_noise", &has_uniform_random_noise, py::arg("experiment"));

  m.def("entropy_cost", &entropy_cost, py::arg("prior"), py::arg("log_base") = std::exp(1.0));
  m.def("quadratic_cost", &quadratic_cost, py::arg("prior"), py::arg("scale") = 1.0);
  m.def("total_cost", &total_cost, py::arg("cost"), py::arg("dist"));
  m.def("marginal_cost_matrix",
        [](const PosteriorCost& c, const PosteriorDistribution& dist) { return marginal_cost_matrix(c, dist).nabla; },
        py::arg("cost"), py::arg("dist"));

  m.def(
      "check_implementable",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c, double rank, double lp,
         double residual) { return to_py(io::to_json(check_implementable(e, t, c, make_tol(rank, lp, residual)))); },
      py::arg("experiment"), py::arg("target"), py::arg("cost"), py::arg("tol_rank") = d.rank,
      py::arg("tol_lp") = d.lp, py::arg("tol_residual") = d.residual);
  m.def(
      "check_implementable_corner",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c) {
        return to_py(io::to_json(check_implementable_corner(e, t, c)));
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"));
  m.def(
      "check_unique_implementable",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c) {
        return check_unique_implementable(e, t, c);
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"));

  m.def(
      "synthesize_family",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c) {
        return synthesize_family(e, t, c);
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"));
  m.def(
      "optimal_contract",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c) {
        const CostReport r = optimal_contract(e, t, c);
        py::dict out = to_py(io::to_json(r));
        out["contract"] = r.contract ? py::cast(*r.contract) : py::none();
        return out;
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"));
  m.def(
      "first_best_contract",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c) {
        return first_best_contract(e, t, c);
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"));
  m.def("expected_payment", &expected_payment, py::arg("experiment"), py::arg("target"), py::arg("prior"),
        py::arg("contract"));
  m.def(
      "binary_rent_profile", [](const Experiment& e) { return to_py(io::to_json(binary_rent_profile(e))); },
      py::arg("experiment"));

  m.def(
      "blackwell_compare", [](const Experiment& e, const Experiment& f) { return to_py(io::to_json(blackwell_compare(e, f))); },
      py::arg("e"), py::arg("f"));
  m.def(
      "cone_compare", [](const Experiment& e, const Experiment& f) { return to_py(io::to_json(cone_compare(e, f))); },
      py::arg("e"), py::arg("f"));
  m.def(
      "colspace_compare",
      [](const Experiment& e, const Experiment& f) { return to_py(io::to_json(colspace_compare(e, f))); },
      py::arg("e"), py::arg("f"));
  m.def(
      "binary_k_compare",
      [](const Experiment& e, const Experiment& f) { return to_py(io::to_json(binary_k_compare(e, f))); },
      py::arg("e"), py::arg("f"));
  m.def(
      "k_dominance_sufficient", [](const Experiment& e, const Experiment& f) { return k_dominance_sufficient(e, f); },
      py::arg("e"), py::arg("f"));

  m.def(
      "agent_best_response",
      [](const Experiment& e, const Contract& t, const PosteriorCost& c, const Belief& prior, int resolution,
         const PosteriorDistribution* target) {
        GridSpec g;
        g.resolution = resolution;
        return to_py(io::to_json(agent_best_response(e, t, c, prior, g, target)));
      },
      py::arg("experiment"), py::arg("contract"), py::arg("cost"), py::arg("prior"), py::arg("resolution") = 0,
      py::arg("target") = nullptr);
  m.def(
      "verify_contract",
      [](const Experiment& e, const PosteriorDistribution& t, const PosteriorCost& c, const Contract& k, double tol,
         int resolution) {
        GridSpec g;
        g.resolution = resolution;
        return verify_contract(e, t, c, k, tol, g);
      },
      py::arg("experiment"), py::arg("target"), py::arg("cost"), py::arg("contract"),
      py::arg("tol") = kOracleTolerance, py::arg("resolution") = 0);

  m.def(
      "demo", [](const std::string& name) { return to_py(cli::demo_report(name)); }, py::arg("name"));
}
