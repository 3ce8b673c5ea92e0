// scenario_io.hpp -- scenario file grammar (JSON, comments allowed)
#ifndef ODRRSIM_SCENARIO_IO_HPP
#define ODRRSIM_SCENARIO_IO_HPP

#include <string>

#include "odrrsim/model.hpp"

namespace odrrsim {

// Parses a scenario document. Exact values (times, rates, weights,
// probabilities) may be written as integers, "a/b" strings or decimal
// strings; plain JSON decimals are converted through their shortest decimal
// form, exactly.
ScenarioConfig parse_scenario_json(const std::string& text);

ScenarioConfig load_scenario_file(const std::string& path);

// Canonical serialized form of a validated scenario: fixed key order,
// defaults filled, rationals rendered as integers or "n/d". Feeding the
// output back through parse+validate reproduces it byte for byte.
std::string scenario_to_json(const ValidatedScenario& scenario);

} // namespace odrrsim

#endif
