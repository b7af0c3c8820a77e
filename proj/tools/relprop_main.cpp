#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relprop/engine.hpp"

namespace {

relprop::RunConfig config_from_flags(const std::vector<std::string>& overrides) {
    relprop::RunConfig cfg;
    relprop::Engine staging(cfg);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw relprop::Error(relprop::ErrorCode::InvalidParameter,
                                 "--config expects key=value, got '" + kv + "'");
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            throw relprop::Error(relprop::ErrorCode::InvalidParameter,
                                 "malformed --config value in '" + kv + "'");
        }
        staging.apply(relprop::Configure{kv.substr(0, eq), value});
    }
    return staging.config();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reliability propagation scenario simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string trace_path;
    std::vector<std::string> config_overrides;
    double tau = 0.5;
    std::string entity;

    auto* run = app.add_subcommand("run", "run a scenario, optionally writing a trace");
    run->add_option("scenario", scenario_path, "scenario file (.rp)")->required();
    run->add_option("--trace", trace_path, "write the TSV trace to this path");
    run->add_option("--config", config_overrides, "override a config parameter (key=value)");

    auto* query = app.add_subcommand("query", "run a scenario and list accepted statements");
    query->add_option("scenario", scenario_path, "scenario file (.rp)")->required();
    auto* tau_opt = query->add_option("--tau", tau, "acceptance threshold");
    query->add_option("--config", config_overrides, "override a config parameter (key=value)");

    auto* explain = app.add_subcommand("explain", "run a scenario and explain one entity");
    explain->add_option("scenario", scenario_path, "scenario file (.rp)")->required();
    explain->add_option("--entity", entity, "agent or message id")->required();
    explain->add_option("--config", config_overrides, "override a config parameter (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        const relprop::RunConfig base = config_from_flags(config_overrides);
        const auto events = relprop::parse_scenario_file(scenario_path);
        const relprop::Engine engine = relprop::run_scenario(events, base);

        if (run->parsed()) {
            if (!trace_path.empty()) {
                std::ofstream out(trace_path, std::ios::binary);
                if (!out) {
                    std::cerr << "cannot write trace file " << trace_path << "\n";
                    return 1;
                }
                out << relprop::format_trace(engine.trace());
            } else {
                std::cout << relprop::format_trace(engine.trace());
            }
        } else if (query->parsed()) {
            std::cout << relprop::format_query(
                engine, tau_opt->count() > 0 ? tau : engine.config().tau);
        } else if (explain->parsed()) {
            std::cout << relprop::format_explain(engine, entity);
        }
        return 0;
    } catch (const relprop::ExpectFailed& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const relprop::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
