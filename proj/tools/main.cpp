// Batch front end: check | simulate | reduce | info.
// Exit status: 0 all properties pass, 1 a property fails, 2 input error.

#include <iostream>

#include <CLI11.hpp>

#include "bundlesym/scenario.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

void emit(const bundlesym::Json& j) { std::cout << j.dump(2) << '\n'; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Property checks and simulations for gauge automorphisms of principal bundles"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string suite;
    std::uint64_t seed = 0;
    std::string run_id;
    std::string out_dir;

    auto* check = app.add_subcommand("check", "Run a property suite and print a JSON report");
    check->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    check->add_option("--suite", suite, "Suite name or \"all\"")->required();
    auto* seed_opt = check->add_option("--seed", seed, "Override the scenario seed");

    auto* simulate = app.add_subcommand("simulate", "Integrate a run and write CSV plus JSON sidecar");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--run", run_id, "Run id")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();

    auto* reduce = app.add_subcommand("reduce", "Compare a run against its reduced system on T*M");
    reduce->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    reduce->add_option("--run", run_id, "Run id")->required();

    auto* info = app.add_subcommand("info", "Summarize a scenario");
    info->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    try {
        const bundlesym::Scenario scenario = bundlesym::Scenario::load(scenario_path);
        if (check->parsed()) {
            std::optional<std::uint64_t> override_seed;
            if (seed_opt->count() > 0) override_seed = seed;
            const bundlesym::CheckReport report = bundlesym::run_check(scenario, suite, override_seed);
            emit(report.to_json());
            return report.pass() ? kPass : kFail;
        }
        if (simulate->parsed()) {
            emit(bundlesym::run_simulate(scenario, run_id, out_dir));
            return kPass;
        }
        if (reduce->parsed()) {
            const bundlesym::Json report = bundlesym::run_reduce(scenario, run_id);
            emit(report);
            return report.at("pass").get<bool>() ? kPass : kFail;
        }
        emit(scenario.info());
        return kPass;
    } catch (const bundlesym::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}
