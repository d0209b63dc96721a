#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bundlesym/dynamics.hpp"

namespace bundlesym {

using Json = nlohmann::ordered_json;

struct ScenarioRun {
    std::string id;
    std::string connection;
    std::optional<std::string> automorphism;
    std::string hamiltonian;
    Vec x0;
    Vec pitilde0;
    /// Algebra coordinates; the initial group element is exp(g0).
    Vec g0;
    /// Momentum value chi = J0 of the initial point.
    Vec rho;
    double dt = 1e-3;
    int steps = 0;
};

struct NamedHamiltonian {
    HamiltonianSpec spec;
    Json description;
};

/**
 * Parsed scenario file. Schema (all keys except "group" and "chart" optional):
 *
 *   group         "SO2" | "SO3" | "SU2"
 *   chart         {"lower": [..], "upper": [..]} or {"dim": n, "half_width": r}
 *   seed          unsigned integer, default 0
 *   samples       positive integer, default 200
 *   tolerances    {"<suite>.<property>": positive number}
 *   connections   {id: field}  where field is one of
 *                   {"type": "constant", "value": [[..]]}
 *                   {"type": "linear", "constant": [[..]], "coefficients": [[[..]], ..]}
 *                   {"type": "magnetic2d", "strength": B, "generator": k}
 *                   {"type": "zero"} | {"type": "random", "strength": s}
 *   automorphisms {id: {"reference": id, "base_part": field, "shift_part": field}}
 *                 base_part also accepts {"type": "identity"}; {"random": s} draws both parts
 *   hamiltonians  {id: {"base": "zero" | "free" | "harmonic", "spring": k,
 *                       "casimir": "zero" | "quadratic" | "linear", "scale": c, "vector": [..]}}
 *   runs          [{"id", "connection", "automorphism"?, "hamiltonian",
 *                   "x0", "pitilde0", "g0"?, "rho"?, "dt", "steps"}]
 */
class Scenario {
public:
    static Scenario parse(const Json& doc);
    static Scenario parse_text(const std::string& text);
    static Scenario load(const std::filesystem::path& path);

    const GroupPtr& group() const { return group_; }
    const BaseChart& chart() const { return chart_; }
    std::uint64_t seed() const { return seed_; }
    int samples() const { return samples_; }

    const std::vector<std::pair<std::string, ConnectionForm>>& connections() const { return connections_; }
    const std::vector<std::pair<std::string, GaugeAutomorphism>>& automorphisms() const { return automorphisms_; }
    const std::vector<std::pair<std::string, NamedHamiltonian>>& hamiltonians() const { return hamiltonians_; }
    const std::vector<ScenarioRun>& runs() const { return runs_; }

    /// Throw UnresolvedReference on unknown ids.
    const ConnectionForm& connection(const std::string& id) const;
    const GaugeAutomorphism& automorphism(const std::string& id) const;
    const HamiltonianSpec& hamiltonian(const std::string& id) const;
    const ScenarioRun& run(const std::string& id) const;

    /// Scenario override for `name` if present, else `fallback`.
    double tolerance(const std::string& name, double fallback) const;

    Json info() const;

private:
    static Scenario parse_document(const Json& doc);
    Scenario(GroupPtr group, BaseChart chart) : group_(std::move(group)), chart_(std::move(chart)) {}

    GroupPtr group_;
    BaseChart chart_;
    std::uint64_t seed_ = 0;
    int samples_ = 200;
    std::map<std::string, double> tolerances_;
    std::vector<std::pair<std::string, ConnectionForm>> connections_;
    std::vector<std::pair<std::string, GaugeAutomorphism>> automorphisms_;
    std::vector<std::pair<std::string, NamedHamiltonian>> hamiltonians_;
    std::vector<ScenarioRun> runs_;
};

struct PropertyResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    /// false: residual must not exceed tolerance; true: residual must reach at least tolerance.
    bool lower_bound = false;
    int samples = 0;
    std::uint64_t seed = 0;
    Json extra;

    bool pass() const { return lower_bound ? residual >= tolerance : residual <= tolerance; }
};

struct CheckReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool pass() const;
    Json to_json() const;
};

const std::vector<std::string>& suite_names();

/// Runs one suite or "all". Throws UnknownSuite.
CheckReport run_check(const Scenario& scenario, const std::string& suite, std::optional<std::uint64_t> seed = {});

/// Initial phase point of a run: i_alpha_inv(x0, pitilde0, exp(g0), rho).
PhasePoint run_initial_point(const Scenario& scenario, const ScenarioRun& run);
Trajectory run_trajectory(const Scenario& scenario, const ScenarioRun& run);

/// Writes <out>/<id>.csv and <out>/<id>.json; returns the sidecar document.
Json run_simulate(const Scenario& scenario, const std::string& run_id, const std::filesystem::path& out_dir);
/// reduced_magnetic_check on the run; "pass" compares max_deviation with tolerance "reduce.max_deviation".
Json run_reduce(const Scenario& scenario, const std::string& run_id);

Json to_json(const ConservationReport& r);

} // namespace bundlesym
