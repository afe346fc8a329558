#pragma once

#include <string>

#include <json.hpp>

#include "essize/closed_forms.hpp"
#include "essize/economics.hpp"
#include "essize/simulator.hpp"
#include "essize/source_model.hpp"

namespace essize::io {

// Parse helpers that turn library/JSON faults into ParseError with context.
[[nodiscard]] nlohmann::json parse_file(const std::string& path);
[[nodiscard]] nlohmann::json parse_string(const std::string& text);

// {"classes":[{"lambda":..,"mu":..,"peak_demand":..},...],"counts":[..]}
[[nodiscard]] model::Population population_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json population_to_json(const model::Population& p);

// [{"capacity":..,"probability":..},...]
[[nodiscard]] closedform::CapacityDistribution capacity_distribution_from_json(
    const nlohmann::json& j);

// Partial override: entries present in the document replace the defaults.
[[nodiscard]] econ::TariffBook tariff_book_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json tariff_book_to_json(const econ::TariffBook& t);

// Scenario with every field optional (falling back to the documented
// defaults); "case" and "segment" are strings.
[[nodiscard]] econ::EconScenario econ_scenario_from_json(const nlohmann::json& j);

struct SimulateRequest {
    sim::SimConfig config;
    std::vector<double> levels;
};

[[nodiscard]] SimulateRequest simulate_request_from_json(const nlohmann::json& j);

}  // namespace essize::io
