// shared helpers for the test binaries
#ifndef ODRRSIM_TEST_UTIL_HPP
#define ODRRSIM_TEST_UTIL_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "odrrsim/model.hpp"
#include "odrrsim/scenario_io.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(ODRRSIM_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("missing test file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline odrrsim::ValidatedScenario load_scenario(const std::string& name) {
    return odrrsim::validate_scenario(
        odrrsim::parse_scenario_json(read_file(data_path(name))));
}

} // namespace testutil

#endif
