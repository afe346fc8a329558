#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "essize/effective_demand.hpp"
#include "essize/json_io.hpp"
#include "essize/sizing.hpp"

namespace {

using nlohmann::json;

// Fixed 10-significant-digit formatting keeps CSV output byte-stable.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw essize::ParseError("cannot open output file '" + path + "'");
    out << text;
}

struct CommonOpts {
    std::string input;
    std::string output = "-";
    std::string format = "csv";
    std::string engine = "spectral";
    std::string units = "normalized";
    double peak_kw = 1.0;
    double unit_hours = 1.0;

    [[nodiscard]] double energy_scale() const {
        return units == "physical" ? peak_kw * unit_hours : 1.0;
    }
    [[nodiscard]] double power_scale() const {
        return units == "physical" ? peak_kw : 1.0;
    }
};

std::string sizing_csv_header() { return "N, C, epsilon, B, engine, achieved\n"; }

std::string sizing_csv_row(std::int64_t n, double c, double eps, double b,
                           const std::string& engine, double achieved) {
    return fmt(static_cast<double>(n)) + ", " + fmt(c) + ", " + fmt(eps) + ", " + fmt(b) +
           ", " + engine + ", " + fmt(achieved) + "\n";
}

std::string run_size(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    const auto pop = essize::io::population_from_json(cfg.at("population"));
    const double grid_power = cfg.at("grid_power").get<double>();
    const double eps = cfg.at("epsilon").get<double>();
    const auto engine = essize::sizing::engine_from_name(o.engine);
    const auto res = essize::sizing::epsilon_outage_capacity(pop, grid_power, eps, engine);
    if (o.format == "json") {
        json out{{"n_users", pop.total_users()},
                 {"grid_power", grid_power * o.power_scale()},
                 {"epsilon", eps},
                 {"storage", res.storage * o.energy_scale()},
                 {"engine", essize::sizing::engine_name(res.engine)},
                 {"achieved", res.achieved},
                 {"iterations", res.iterations},
                 {"bracket", res.bracket},
                 {"converged", res.converged}};
        return out.dump(2) + "\n";
    }
    return sizing_csv_header() +
           sizing_csv_row(pop.total_users(), grid_power * o.power_scale(), eps,
                          res.storage * o.energy_scale(),
                          essize::sizing::engine_name(res.engine), res.achieved);
}

std::string run_capacity(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    const auto pop = essize::io::population_from_json(cfg.at("population"));
    const double storage = cfg.at("storage").get<double>();
    const double eps = cfg.at("epsilon").get<double>();
    const auto engine = essize::sizing::engine_from_name(o.engine);
    const auto res = essize::sizing::min_grid_power(pop, storage, eps, engine);
    if (o.format == "json") {
        json out{{"n_users", pop.total_users()},
                 {"grid_power", res.grid_power * o.power_scale()},
                 {"epsilon", eps},
                 {"storage", storage * o.energy_scale()},
                 {"engine", essize::sizing::engine_name(res.engine)},
                 {"achieved", res.achieved},
                 {"iterations", res.iterations},
                 {"bracket", res.bracket},
                 {"converged", res.converged}};
        return out.dump(2) + "\n";
    }
    return sizing_csv_header() +
           sizing_csv_row(pop.total_users(), res.grid_power * o.power_scale(), eps,
                          storage * o.energy_scale(),
                          essize::sizing::engine_name(res.engine), res.achieved);
}

std::string run_effdemand(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    std::vector<essize::model::ConsumerClass> classes;
    for (const auto& c : cfg.at("classes"))
        classes.emplace_back(c.at("lambda").get<double>(), c.at("mu").get<double>(),
                             c.at("peak_demand").get<double>());
    const double eps = cfg.at("epsilon").get<double>();
    const double storage = cfg.at("storage").get<double>();
    const auto d = essize::effdemand::DecayParameter::from_target(eps, storage);
    if (o.format == "json") {
        json rows = json::array();
        for (std::size_t k = 0; k < classes.size(); ++k)
            rows.push_back({{"class_index", k},
                            {"lambda", classes[k].lambda},
                            {"mu", classes[k].mu},
                            {"peak", classes[k].peak_demand},
                            {"omega", essize::effdemand::effective_demand(classes[k], d)}});
        return rows.dump(2) + "\n";
    }
    std::string out = "class_index, lambda, mu, peak, omega\n";
    for (std::size_t k = 0; k < classes.size(); ++k)
        out += std::to_string(k) + ", " + fmt(classes[k].lambda) + ", " + fmt(classes[k].mu) +
               ", " + fmt(classes[k].peak_demand) + ", " +
               fmt(essize::effdemand::effective_demand(classes[k], d)) + "\n";
    return out;
}

std::string run_admit(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    const auto pop = essize::io::population_from_json(cfg.at("population"));
    const auto decision = essize::effdemand::admissible(
        pop, cfg.at("grid_power").get<double>(), cfg.at("storage").get<double>(),
        cfg.at("epsilon").get<double>());
    if (o.format == "json") {
        json out{{"admit", decision.admit},
                 {"strict_admit", decision.strict_admit},
                 {"total_demand", decision.total_demand},
                 {"margin", decision.margin}};
        return out.dump(2) + "\n";
    }
    return std::string("admit, strict_admit, total_demand, margin\n") +
           (decision.admit ? "1" : "0") + ", " + (decision.strict_admit ? "1" : "0") + ", " +
           fmt(decision.total_demand) + ", " + fmt(decision.margin) + "\n";
}

std::string run_simulate(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    const auto request = essize::io::simulate_request_from_json(cfg);
    const auto summary = essize::sim::simulate(request.config, request.levels);
    json out;
    out["levels"] = json::array();
    out["estimates"] = json::array();
    out["std_errors"] = json::array();
    for (const auto& s : summary.survivors) {
        out["levels"].push_back(s.level);
        out["estimates"].push_back(s.estimate);
        out["std_errors"].push_back(s.std_error);
    }
    out["occupancy"] = json::array();
    for (Eigen::Index s = 0; s < summary.occupancy.size(); ++s)
        out["occupancy"].push_back(summary.occupancy[s]);
    out["stable"] = summary.stable;
    out["events"] = summary.events;
    return out.dump(2) + "\n";
}

essize::econ::TariffBook load_tariff_book(const json& cfg) {
    if (cfg.contains("tariff_book")) return essize::io::tariff_book_from_json(cfg["tariff_book"]);
    if (const char* path = std::getenv("ESSIZE_TARIFF_BOOK"))
        return essize::io::tariff_book_from_json(essize::io::parse_file(path));
    return essize::econ::TariffBook::defaults();
}

std::string run_economics(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    auto scenario = essize::io::econ_scenario_from_json(
        cfg.contains("scenario") ? cfg["scenario"] : json::object());
    const auto book = load_tariff_book(cfg);
    const auto engine = essize::sizing::engine_from_name(o.engine);
    const auto max_users = cfg.contains("max_users")
                               ? cfg["max_users"].get<std::int64_t>()
                               : scenario.n_users;

    auto grid = scenario;
    grid.scenario_case = essize::econ::ScenarioCase::grid_only;
    grid.n_users = 1;
    const auto grid_cost = essize::econ::scenario_cost(grid, book, engine);
    auto ess = scenario;
    ess.scenario_case = essize::econ::ScenarioCase::ess_only;
    ess.n_users = 1;
    const auto ess_cost = essize::econ::scenario_cost(ess, book, engine);

    json rows = json::array();
    std::string csv =
        "n, grid_only, ess_only, shared, grid_energy, grid_quality, grid_reliability, "
        "ess_energy, ess_capital, shared_energy_grid, shared_energy_storage, "
        "shared_capital\n";
    for (std::int64_t n = 1; n <= max_users; ++n) {
        auto shared = scenario;
        shared.scenario_case = essize::econ::ScenarioCase::shared;
        shared.n_users = n;
        const auto sc = essize::econ::scenario_cost(shared, book, engine);
        if (o.format == "json") {
            rows.push_back({{"n", n},
                            {"grid_only", grid_cost.total},
                            {"ess_only", ess_cost.total},
                            {"shared", sc.total},
                            {"shared_energy_grid", sc.energy_grid},
                            {"shared_energy_storage", sc.energy_storage},
                            {"shared_capital", sc.storage_capital}});
        } else {
            csv += fmt(static_cast<double>(n)) + ", " + fmt(grid_cost.total) + ", " +
                   fmt(ess_cost.total) + ", " + fmt(sc.total) + ", " + fmt(grid_cost.energy_grid) +
                   ", " + fmt(grid_cost.quality) + ", " + fmt(grid_cost.reliability) + ", " +
                   fmt(ess_cost.energy_storage) + ", " + fmt(ess_cost.storage_capital) + ", " +
                   fmt(sc.energy_grid) + ", " + fmt(sc.energy_storage) + ", " +
                   fmt(sc.storage_capital) + "\n";
        }
    }
    if (o.format == "json") return rows.dump(2) + "\n";
    return csv;
}

std::string run_sweep(const CommonOpts& o) {
    const json cfg = essize::io::parse_file(o.input);
    std::vector<essize::model::ConsumerClass> classes;
    for (const auto& c : cfg.at("classes"))
        classes.emplace_back(c.at("lambda").get<double>(), c.at("mu").get<double>(),
                             c.at("peak_demand").get<double>());
    const auto engine = essize::sizing::engine_from_name(o.engine);
    std::string out = sizing_csv_header();
    for (const auto& point : cfg.at("points")) {
        const auto counts = point.at("counts").get<std::vector<std::int64_t>>();
        const double grid_power = point.at("grid_power").get<double>();
        const double eps = point.at("epsilon").get<double>();
        const essize::model::Population pop(classes, counts);
        const auto res = essize::sizing::epsilon_outage_capacity(pop, grid_power, eps, engine);
        out += sizing_csv_row(pop.total_users(), grid_power * o.power_scale(), eps,
                              res.storage * o.energy_scale(),
                              essize::sizing::engine_name(res.engine), res.achieved);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared energy-storage sizing for stochastic On/Off consumers"};
    app.require_subcommand(1);

    CommonOpts opts;
    const auto add_common = [&](CLI::App* sub, bool with_engine, bool with_units) {
        sub->add_option("-i,--input", opts.input, "scenario JSON file")->required();
        sub->add_option("-o,--output", opts.output, "output path, '-' for stdout");
        sub->add_option("-f,--format", opts.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_engine)
            sub->add_option("-e,--engine", opts.engine, "sizing engine")
                ->check(CLI::IsMember({"spectral", "effective_demand", "closed_form"}));
        if (with_units) {
            sub->add_option("--units", opts.units, "report B and C normalized or physical")
                ->check(CLI::IsMember({"normalized", "physical"}));
            sub->add_option("--peak-kw", opts.peak_kw, "per-source peak power (physical units)");
            sub->add_option("--unit-hours", opts.unit_hours,
                            "physical hours in one normalized time unit");
        }
    };

    auto* size = app.add_subcommand("size", "smallest storage meeting the outage target");
    add_common(size, true, true);
    auto* capacity = app.add_subcommand("capacity", "smallest grid power for a given storage");
    add_common(capacity, true, true);
    auto* effdemand = app.add_subcommand("effdemand", "per-class effective demand table");
    add_common(effdemand, false, false);
    auto* admit = app.add_subcommand("admit", "admission decision for a population");
    add_common(admit, false, false);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo deficit estimates");
    add_common(simulate, false, false);
    auto* economics = app.add_subcommand("economics", "per-user monthly cost comparison");
    add_common(economics, true, false);
    auto* sweep = app.add_subcommand("sweep", "sizing over a declared point grid");
    add_common(sweep, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << std::flush;
        return 2;
    }

    try {
        std::string text;
        if (app.got_subcommand(size)) text = run_size(opts);
        else if (app.got_subcommand(capacity)) text = run_capacity(opts);
        else if (app.got_subcommand(effdemand)) text = run_effdemand(opts);
        else if (app.got_subcommand(admit)) text = run_admit(opts);
        else if (app.got_subcommand(simulate)) text = run_simulate(opts);
        else if (app.got_subcommand(economics)) text = run_economics(opts);
        else if (app.got_subcommand(sweep)) text = run_sweep(opts);
        emit(opts.output, text);
    } catch (const essize::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
