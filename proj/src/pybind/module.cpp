// module.cpp -- python bindings for the simulator's main operations
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odrrsim/report.hpp"
#include "odrrsim/scenario_io.hpp"
#include "odrrsim/traffic.hpp"

namespace py = pybind11;
using namespace odrrsim;

namespace {

ValidatedScenario scenario_from_text(const std::string& text) {
    return validate_scenario(parse_scenario_json(text));
}

RunFlags flags_from(bool gating, bool zero_cost_failures, bool literal_delay_bound) {
    RunFlags flags;
    if (gating) flags.gating_override = GatingMode::Alternating;
    flags.zero_cost_failures = zero_cost_failures;
    flags.literal_delay_bound = literal_delay_bound;
    return flags;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "deficit-round-robin family scheduling simulator (DRR, ODRR, ODRREDC, ODRRSDC)";

    py::register_exception<ValidationError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<EngineError>(m, "EngineError", PyExc_RuntimeError);
    py::register_exception<MetricsError>(m, "MetricsError", PyExc_RuntimeError);

    m.def(
        "validate",
        [](const std::string& text) { return scenario_to_json(scenario_from_text(text)); },
        py::arg("scenario_json"),
        "Validate a scenario document and return its canonical serialized form.");

    m.def(
        "max_packet_size",
        [](const std::string& text) { return max_packet_size(scenario_from_text(text)); },
        py::arg("scenario_json"),
        "M: largest packet over the fully expanded scenario traces.");

    m.def(
        "expand_trace_csv",
        [](const std::string& text) {
            return trace_to_csv(expand_all_traces(scenario_from_text(text)));
        },
        py::arg("scenario_json"),
        "Expand all flows' arrivals and render them as CSV.");

    m.def(
        "penalty_factor",
        [](std::int64_t attempted, std::int64_t successful) {
            Ratio pf = penalty_factor(attempted, successful);
            return py::make_tuple(pf.num(), pf.den());
        },
        py::arg("attempted_bytes"), py::arg("successful_bytes"),
        "Exact successful/attempted byte ratio as a (numerator, denominator) pair.");

    m.def(
        "delay_bound",
        [](std::int64_t n_critical, std::int64_t s_bytes, std::int64_t max_quantum,
           std::int64_t output_rate_bps) {
            Ratio b = delay_bound(n_critical, s_bytes, max_quantum, output_rate_bps);
            return py::make_tuple(b.num(), b.den());
        },
        py::arg("n_critical"), py::arg("s_bytes"), py::arg("max_quantum_bytes"),
        py::arg("output_rate_bps"),
        "Latency-critical delay bound in seconds, exact (numerator, denominator).");

    m.def("delay_bound_literal", &delay_bound_literal, py::arg("n_critical"),
          py::arg("s_bytes"), py::arg("max_quantum_bytes"), py::arg("output_rate_bps"),
          "The bound with the literal (n*s) + Max/B parenthesization, for comparison.");

    m.def(
        "run",
        [](const std::string& text, const std::string& policy, std::uint64_t seed,
           bool gating, bool zero_cost_failures, bool literal_delay_bound) {
            ValidatedScenario scenario = scenario_from_text(text);
            RunArtifacts art = run_one(scenario, policy_from_name(policy), seed,
                                       flags_from(gating, zero_cost_failures,
                                                  literal_delay_bound));
            py::dict out;
            out["summary_json"] = art.summary_json;
            out["ledger_csv"] = art.ledger_csv;
            out["packets_csv"] = art.packets_csv;
            out["events"] = art.events;
            out["plot_utilization"] = art.plot_utilization;
            out["plot_latency"] = art.plot_latency;
            out["rounds"] = art.final_report.rounds;
            out["total_bytes_served"] = art.final_report.total_bytes_served;
            out["all_completed"] = art.final_report.all_completed;
            return out;
        },
        py::arg("scenario_json"), py::arg("policy") = "drr", py::arg("seed") = 1,
        py::arg("gating") = false, py::arg("zero_cost_failures") = false,
        py::arg("literal_delay_bound") = false,
        "Simulate one (policy, seed) pair over the scenario duration.");

    m.def(
        "oracle_simulate",
        [](const std::string& text, const std::string& policy) {
            return oracle_simulate(scenario_from_text(text), policy_from_name(policy));
        },
        py::arg("scenario_json"), py::arg("policy"),
        "Brute-force reference: flow id -> completion round, small scenarios only.");
}
