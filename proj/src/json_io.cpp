#include "essize/json_io.hpp"

#include <fstream>

namespace essize::io {

namespace {

using nlohmann::json;

// Pull a required field, converting nlohmann's exceptions into ParseError
// that names the field.
template <typename T>
T require(const json& j, const char* field) {
    if (!j.contains(field))
        throw ParseError(std::string("missing required field '") + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + field + "': " + e.what());
    }
}

template <typename T>
T optional(const json& j, const char* field, T fallback) {
    if (!j.contains(field)) return fallback;
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + field + "': " + e.what());
    }
}

const std::array<const char*, 3> kSegmentKeys = {"residential", "small_ci", "large_ci"};

}  // namespace

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

json parse_string(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

model::Population population_from_json(const json& j) {
    if (!j.contains("classes") || !j["classes"].is_array())
        throw ParseError("population needs a 'classes' array");
    std::vector<model::ConsumerClass> classes;
    for (const auto& c : j["classes"])
        classes.emplace_back(require<double>(c, "lambda"), require<double>(c, "mu"),
                             require<double>(c, "peak_demand"));
    auto counts = require<std::vector<std::int64_t>>(j, "counts");
    try {
        return model::Population(std::move(classes), std::move(counts));
    } catch (const Error&) {
        throw;  // already carries a precise message
    }
}

json population_to_json(const model::Population& p) {
    json j;
    j["classes"] = json::array();
    for (const auto& c : p.classes)
        j["classes"].push_back(
            {{"lambda", c.lambda}, {"mu", c.mu}, {"peak_demand", c.peak_demand}});
    j["counts"] = p.counts;
    return j;
}

closedform::CapacityDistribution capacity_distribution_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("capacity distribution must be a JSON array");
    std::vector<closedform::CapacityPoint> points;
    for (const auto& pt : j)
        points.push_back({require<double>(pt, "capacity"), require<double>(pt, "probability")});
    return closedform::CapacityDistribution(std::move(points));
}

econ::TariffBook tariff_book_from_json(const json& j) {
    econ::TariffBook t = econ::TariffBook::defaults();
    for (std::size_t s = 0; s < kSegmentKeys.size(); ++s) {
        const char* key = kSegmentKeys[s];
        if (j.contains("power_quality_cost") && j["power_quality_cost"].contains(key)) {
            const auto& q = j["power_quality_cost"][key];
            t.power_quality_cost[s][0] = optional(q, "average", t.power_quality_cost[s][0]);
            t.power_quality_cost[s][1] = optional(q, "high", t.power_quality_cost[s][1]);
        }
        if (j.contains("outage_cost") && j["outage_cost"].contains(key)) {
            const auto& o = j["outage_cost"][key];
            t.outage_cost[s][0] = optional(o, "15min", t.outage_cost[s][0]);
            t.outage_cost[s][1] = optional(o, "30min", t.outage_cost[s][1]);
            t.outage_cost[s][2] = optional(o, "1h", t.outage_cost[s][2]);
            t.outage_cost[s][3] = optional(o, "2h", t.outage_cost[s][3]);
        }
        for (auto [table, name] : {std::pair{&t.tou_rates, "tou_rates"},
                                   std::pair{&t.demand_charges, "demand_charges"}}) {
            if (!j.contains(name) || !j[name].contains(key)) continue;
            const auto& seg = j[name][key];
            const std::array<const char*, 2> seasons = {"summer", "winter"};
            for (std::size_t season = 0; season < 2; ++season) {
                if (!seg.contains(seasons[season])) continue;
                const auto& row = seg[seasons[season]];
                (*table)[s][season][0] = optional(row, "peak", (*table)[s][season][0]);
                (*table)[s][season][1] = optional(row, "off_peak", (*table)[s][season][1]);
            }
        }
    }
    t.validate();
    return t;
}

json tariff_book_to_json(const econ::TariffBook& t) {
    json j;
    for (std::size_t s = 0; s < kSegmentKeys.size(); ++s) {
        const char* key = kSegmentKeys[s];
        j["power_quality_cost"][key] = {{"average", t.power_quality_cost[s][0]},
                                        {"high", t.power_quality_cost[s][1]}};
        j["outage_cost"][key] = {{"15min", t.outage_cost[s][0]},
                                 {"30min", t.outage_cost[s][1]},
                                 {"1h", t.outage_cost[s][2]},
                                 {"2h", t.outage_cost[s][3]}};
        for (auto [table, name] : {std::pair{&t.tou_rates, "tou_rates"},
                                   std::pair{&t.demand_charges, "demand_charges"}}) {
            j[name][key] = {{"summer",
                             {{"peak", (*table)[s][0][0]}, {"off_peak", (*table)[s][0][1]}}},
                            {"winter",
                             {{"peak", (*table)[s][1][0]}, {"off_peak", (*table)[s][1][1]}}}};
        }
    }
    return j;
}

econ::EconScenario econ_scenario_from_json(const json& j) {
    econ::EconScenario s;
    s.scenario_case = econ::case_from_name(optional<std::string>(j, "case", "grid_only"));
    s.segment = econ::segment_from_name(optional<std::string>(j, "segment", "residential"));
    s.appliances_per_user = optional(j, "appliances_per_user", s.appliances_per_user);
    s.peak_demand_per_appliance =
        optional(j, "peak_demand_per_appliance", s.peak_demand_per_appliance);
    s.peak_days_per_year = optional(j, "peak_days_per_year", s.peak_days_per_year);
    s.peak_hours = optional(j, "peak_hours", s.peak_hours);
    s.interruption_minutes_per_year =
        optional(j, "interruption_minutes_per_year", s.interruption_minutes_per_year);
    s.storage_annual_cost = optional(j, "storage_annual_cost", s.storage_annual_cost);
    s.project_years = optional(j, "project_years", s.project_years);
    s.discount_rate = optional(j, "discount_rate", s.discount_rate);
    s.lambda = optional(j, "lambda", s.lambda);
    s.n_users = optional(j, "n_users", s.n_users);
    s.grid_headroom = optional(j, "grid_headroom", s.grid_headroom);
    s.efficiency = optional(j, "efficiency", s.efficiency);
    s.epsilon = optional(j, "epsilon", s.epsilon);
    s.summer_fraction = optional(j, "summer_fraction", s.summer_fraction);
    s.quality_events_per_year =
        optional(j, "quality_events_per_year", s.quality_events_per_year);
    s.validate();
    return s;
}

SimulateRequest simulate_request_from_json(const json& j) {
    SimulateRequest r;
    r.config.population = population_from_json(require<json>(j, "population"));
    r.config.grid_power = require<double>(j, "grid_power");
    r.config.efficiency = optional(j, "efficiency", 1.0);
    const auto mode = optional<std::string>(j, "eta_mode", "symmetric");
    if (mode == "symmetric")
        r.config.eta_mode = sim::EtaMode::symmetric;
    else if (mode == "charge_only")
        r.config.eta_mode = sim::EtaMode::charge_only;
    else
        throw ParseError("eta_mode must be 'symmetric' or 'charge_only', got '" + mode + "'");
    r.config.horizon = require<double>(j, "horizon");
    r.config.warmup = optional(j, "warmup", -1.0);
    r.config.replications = optional(j, "replications", 1);
    r.config.seed = optional<std::uint64_t>(j, "seed", 0);
    r.levels = optional(j, "levels", std::vector<double>{});
    return r;
}

}  // namespace essize::io
