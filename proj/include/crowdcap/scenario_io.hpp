#pragma once

#include "crowdcap/model.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace crowdcap {

/// Malformed or schema-violating scenario document.
struct ScenarioParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& s, const std::string& path);

nlohmann::json distribution_to_json(const DistributionSpec& d);
DistributionSpec distribution_from_json(const nlohmann::json& doc);

} // namespace crowdcap
