#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relbelief/analysis.hpp"
#include "relbelief/belief.hpp"
#include "relbelief/conflict.hpp"
#include "relbelief/contamination.hpp"
#include "relbelief/models.hpp"
#include "relbelief/reproduce.hpp"

namespace py = pybind11;
using namespace relbelief;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

BeliefState make_state(std::vector<CellLabel> labels, std::vector<double> prior, std::vector<double> cond) {
    return BeliefState(ParamGrid(std::move(labels), std::move(prior)), std::move(cond));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Relative belief inference, epsilon-contamination robustness and prior-data conflict checks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<BeliefState>(m, "BeliefState")
        .def(py::init(&make_state), py::arg("labels"), py::arg("prior"), py::arg("cond_predictive"))
        .def_property_readonly("labels", [](const BeliefState& s) { return s.grid().labels(); })
        .def_property_readonly("prior", [](const BeliefState& s) { return to_vector(s.prior_mass()); })
        .def_property_readonly("cond_predictive", [](const BeliefState& s) { return to_vector(s.cond_predictive()); })
        .def_property_readonly("prior_predictive", &BeliefState::prior_predictive)
        .def_property_readonly("posterior", [](const BeliefState& s) { return to_vector(s.posterior_mass()); })
        .def_property_readonly("rb", [](const BeliefState& s) { return to_vector(s.rb()); })
        .def_property_readonly("max_rb", &BeliefState::max_rb)
        .def("__len__", &BeliefState::size);

    m.def("rb_estimate", &rb_estimate, py::arg("state"));

    py::class_<CredibleRegion>(m, "CredibleRegion")
        .def_readonly("cells", &CredibleRegion::cells)
        .def_readonly("cutoff", &CredibleRegion::cutoff)
        .def_readonly("content", &CredibleRegion::content);
    m.def("credible_region", &credible_region, py::arg("state"), py::arg("gamma"));

    py::class_<EvidenceReport>(m, "EvidenceReport")
        .def_readonly("psi0", &EvidenceReport::psi0)
        .def_readonly("rb0", &EvidenceReport::rb0)
        .def_readonly("strength", &EvidenceReport::strength)
        .def_readonly("lower_bound", &EvidenceReport::lower_bound)
        .def_readonly("upper_bound", &EvidenceReport::upper_bound);
    m.def("strength", py::overload_cast<const BeliefState&, std::size_t>(&strength), py::arg("state"), py::arg("psi0"));

    py::enum_<DirectionKind>(m, "DirectionKind")
        .value("marginal", DirectionKind::marginal)
        .value("conditional", DirectionKind::conditional)
        .value("full", DirectionKind::full);

    py::class_<Direction>(m, "Direction")
        .def_static("marginal", &Direction::marginal, py::arg("mass"))
        .def_static("conditional", &Direction::conditional, py::arg("cond_predictive_q"))
        .def_static("full", &Direction::full, py::arg("mass"), py::arg("cond_predictive_q"))
        .def_property_readonly("kind", &Direction::kind);

    py::class_<HuberBounds>(m, "HuberBounds")
        .def_readonly("content", &HuberBounds::content)
        .def_readonly("upper", &HuberBounds::upper)
        .def_readonly("lower", &HuberBounds::lower)
        .def_readonly("delta", &HuberBounds::delta)
        .def_readonly("r_A", &HuberBounds::r_A)
        .def_readonly("r_Ac", &HuberBounds::r_Ac);

    m.def("m_q_over_m", &m_q_over_m, py::arg("state"), py::arg("q"));
    m.def(
        "huber_bounds",
        [](const BeliefState& s, const std::vector<std::size_t>& cells, double eps) { return huber_bounds(s, cells, eps); },
        py::arg("state"), py::arg("cells"), py::arg("epsilon"));
    m.def("delta_credible", &delta_credible, py::arg("state"), py::arg("gamma"), py::arg("epsilon"));

    py::class_<OptimalityResult>(m, "OptimalityResult")
        .def_readonly("degenerate", &OptimalityResult::degenerate)
        .def_readonly("region_delta", &OptimalityResult::region_delta)
        .def_readonly("min_delta", &OptimalityResult::min_delta)
        .def_readonly("argmin", &OptimalityResult::argmin)
        .def_readonly("admissible", &OptimalityResult::admissible);
    m.def(
        "optimality_search",
        [](const BeliefState& s, double gamma, double eps, unsigned workers) {
            py::gil_scoped_release release;
            return optimality_search(s, gamma, eps, ContentConstraint::at_most_region, workers);
        },
        py::arg("state"), py::arg("gamma"), py::arg("epsilon"), py::arg("workers") = 1);

    m.def("contaminated_rb", &contaminated_rb, py::arg("state"), py::arg("psi"), py::arg("q"), py::arg("epsilon"));
    m.def("gateaux_rb", &gateaux_rb, py::arg("state"), py::arg("psi"), py::arg("q"));
    m.def("relative_sensitivity_rb", &relative_sensitivity_rb, py::arg("state"), py::arg("q"));
    m.def("gateaux_strength_marginal", &gateaux_strength_marginal, py::arg("state"), py::arg("psi0"), py::arg("q"));
    m.def("gateaux_map", &gateaux_map, py::arg("state"), py::arg("psi0"), py::arg("q"));
    m.def("relative_sensitivity_map", &relative_sensitivity_map, py::arg("state"), py::arg("psi0"), py::arg("q"));
    m.def("gateaux_strength_conditional", &gateaux_strength_conditional, py::arg("state"), py::arg("psi0"),
          py::arg("q"));
    m.def("worst_case_ratio", &worst_case_ratio, py::arg("state"));

    m.def(
        "location_normal_tail",
        [](int n, double xbar, double mu0, double sigma0_sq) {
            return tail_probability(predictive_curve(LocationNormalModel{n, xbar, mu0, sigma0_sq}));
        },
        py::arg("n"), py::arg("xbar"), py::arg("mu0"), py::arg("sigma0_sq"));
    m.def(
        "location_normal_sup_ratio",
        [](int n, double xbar, double mu0, double sigma0_sq) {
            return sup_ratio(LocationNormalModel{n, xbar, mu0, sigma0_sq});
        },
        py::arg("n"), py::arg("xbar"), py::arg("mu0"), py::arg("sigma0_sq"));
    m.def(
        "bernoulli_tail",
        [](int n, int t, double a0, double b0) { return tail_probability(predictive_curve(BernoulliBetaModel{n, t, a0, b0})); },
        py::arg("n"), py::arg("t"), py::arg("alpha0"), py::arg("beta0"));

    m.def("reproduce_ids", &reproduce::ids);
    m.def(
        "reproduce",
        [](const std::string& id, std::optional<int> digits) { return reproduce::render(id, digits).str(); },
        py::arg("id"), py::arg("digits") = py::none());
    m.def(
        "analyze",
        [](const std::string& config_json) { return analyze(parse_config(config_json)).str(); },
        py::arg("config_json"));
}
