#include "bundlesym/scenario.hpp"

#include <fstream>
#include <sstream>

namespace bundlesym {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Vec read_vec(const Json& j, const std::string& what) {
    if (!j.is_array()) parse_error(what + " must be an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) parse_error(what + " must be an array of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Vec read_vec_sized(const Json& obj, const char* key, int size, const std::string& what, bool required) {
    if (!obj.contains(key)) {
        if (required) parse_error(what + ": missing \"" + key + "\"");
        return Vec::Zero(size);
    }
    Vec v = read_vec(obj.at(key), what + "." + key);
    if (v.size() != size) parse_error(what + "." + key + " must have length " + std::to_string(size));
    return v;
}

Mat read_mat(const Json& j, int rows, int cols, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        parse_error(what + " must be a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Vec row = read_vec(j[static_cast<std::size_t>(r)], what);
        if (row.size() != cols)
            parse_error(what + " must be a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
        m.row(r) = row.transpose();
    }
    return m;
}

double read_number(const Json& obj, const char* key, double fallback, const std::string& what) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) parse_error(what + "." + key + " must be a number");
    return obj.at(key).get<double>();
}

MatrixField read_field(const Json& j, int rows, int cols, int n, CounterRng& rng, const std::string& what) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        parse_error(what + " must be an object with a string \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        if (!j.contains("value")) parse_error(what + ": missing \"value\"");
        return MatrixField::constant(read_mat(j.at("value"), rows, cols, what + ".value"));
    }
    if (type == "linear") {
        const Mat c = j.contains("constant") ? read_mat(j.at("constant"), rows, cols, what + ".constant")
                                             : Mat::Zero(rows, cols);
        std::vector<Mat> coeffs;
        if (j.contains("coefficients")) {
            const Json& cj = j.at("coefficients");
            if (!cj.is_array() || static_cast<int>(cj.size()) != n)
                parse_error(what + ".coefficients must hold one matrix per base coordinate");
            for (const Json& m : cj) coeffs.push_back(read_mat(m, rows, cols, what + ".coefficients"));
        } else {
            coeffs.assign(static_cast<std::size_t>(n), Mat::Zero(rows, cols));
        }
        return MatrixField::linear(c, std::move(coeffs));
    }
    if (type == "magnetic2d") {
        if (n != 2 || cols != 2) parse_error(what + ": magnetic2d needs a two-dimensional base");
        const int generator = static_cast<int>(read_number(j, "generator", 0.0, what));
        if (generator < 0 || generator >= rows) parse_error(what + ".generator out of range");
        return MatrixField::magnetic2d(read_number(j, "strength", 1.0, what), rows, generator);
    }
    if (type == "identity") {
        if (rows != cols) parse_error(what + ": identity needs a square field");
        return MatrixField::identity(rows);
    }
    if (type == "zero") return MatrixField::zero(rows, cols);
    if (type == "random") return random_linear_field(rng, rows, cols, n, read_number(j, "strength", 0.3, what));
    parse_error(what + ": unknown field type \"" + type + "\"");
}

template <class T>
const T& find_named(const std::vector<std::pair<std::string, T>>& items, const std::string& id, const char* kind) {
    for (const auto& [name, item] : items)
        if (name == id) return item;
    throw Error(ErrorCode::UnresolvedReference, std::string(kind) + " \"" + id + "\" is not defined");
}

NamedHamiltonian read_hamiltonian(const Json& j, const GroupPtr& group, const std::string& what) {
    if (!j.is_object()) parse_error(what + " must be an object");
    const std::string base = j.value("base", "zero");
    const std::string casimir = j.value("casimir", "zero");
    const double spring = read_number(j, "spring", base == "harmonic" ? 1.0 : 0.0, what);
    const double scale = read_number(j, "scale", 1.0, what);

    HamiltonianSpec spec = HamiltonianSpec::zero();
    if (base == "free") {
        spec.base = HamiltonianSpec::kinetic().base;
    } else if (base == "harmonic") {
        spec.base = HamiltonianSpec::kinetic(spring).base;
    } else if (base != "zero") {
        parse_error(what + ": unknown base Hamiltonian \"" + base + "\"");
    }
    if (casimir == "quadratic") {
        spec.casimir = HamiltonianSpec::kinetic(0.0, scale).casimir;
    } else if (casimir == "linear") {
        if (!group->is_abelian()) parse_error(what + ": a linear Casimir needs an abelian group");
        const Vec v = read_vec_sized(j, "vector", group->dim(), what, true);
        spec.casimir = [v](const CoalgebraElement& chi) { return v.dot(chi.coords); };
    } else if (casimir != "zero") {
        parse_error(what + ": unknown Casimir \"" + casimir + "\"");
    }
    return {std::move(spec), j};
}

} // namespace

Scenario Scenario::parse(const Json& doc) {
    try {
        return parse_document(doc);
    } catch (const nlohmann::json::exception& e) {
        parse_error(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnresolvedReference || e.code() == ErrorCode::ParseError) throw;
        parse_error(e.what());
    }
}

Scenario Scenario::parse_document(const Json& doc) {
    if (!doc.is_object()) parse_error("scenario must be a JSON object");
    if (!doc.contains("group") || !doc.at("group").is_string()) parse_error("scenario needs a string \"group\"");
    GroupPtr group;
    try {
        group = GroupDescriptor::from_name(doc.at("group").get<std::string>());
    } catch (const Error& e) {
        parse_error(e.what());
    }

    if (!doc.contains("chart") || !doc.at("chart").is_object()) parse_error("scenario needs a \"chart\" object");
    const Json& cj = doc.at("chart");
    Vec lower, upper;
    if (cj.contains("lower") || cj.contains("upper")) {
        if (!cj.contains("lower") || !cj.contains("upper")) parse_error("chart needs both \"lower\" and \"upper\"");
        lower = read_vec(cj.at("lower"), "chart.lower");
        upper = read_vec(cj.at("upper"), "chart.upper");
    } else {
        const int dim = static_cast<int>(read_number(cj, "dim", 0.0, "chart"));
        const double r = read_number(cj, "half_width", 1.0, "chart");
        lower = Vec::Constant(dim, -r);
        upper = Vec::Constant(dim, r);
    }
    if (lower.size() == 0 || lower.size() != upper.size() || (upper - lower).minCoeff() <= 0.0)
        parse_error("chart bounds must be nonempty with lower < upper");
    Scenario sc(group, BaseChart(lower, upper));
    const int n = sc.chart_.dim();
    const int m = group->dim();

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) parse_error("seed must be a nonnegative integer");
        sc.seed_ = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("samples")) {
        if (!doc.at("samples").is_number_integer() || doc.at("samples").get<int>() <= 0)
            parse_error("samples must be a positive integer");
        sc.samples_ = doc.at("samples").get<int>();
    }
    if (doc.contains("tolerances")) {
        if (!doc.at("tolerances").is_object()) parse_error("tolerances must be an object");
        for (const auto& [key, value] : doc.at("tolerances").items()) {
            if (!value.is_number() || value.get<double>() <= 0.0) parse_error("tolerance " + key + " must be positive");
            sc.tolerances_[key] = value.get<double>();
        }
    }

    if (doc.contains("connections")) {
        if (!doc.at("connections").is_object()) parse_error("connections must be an object");
        for (const auto& [id, spec] : doc.at("connections").items()) {
            CounterRng rng(sc.seed_, "connection:" + id);
            MatrixField potential = read_field(spec, m, n, n, rng, "connections." + id);
            sc.connections_.emplace_back(id, ConnectionForm(group, sc.chart_, std::move(potential), id));
        }
    }

    if (doc.contains("automorphisms")) {
        if (!doc.at("automorphisms").is_object()) parse_error("automorphisms must be an object");
        for (const auto& [id, spec] : doc.at("automorphisms").items()) {
            const std::string what = "automorphisms." + id;
            if (!spec.is_object() || !spec.contains("reference") || !spec.at("reference").is_string())
                parse_error(what + " needs a string \"reference\"");
            const ConnectionForm& ref = sc.connection(spec.at("reference").get<std::string>());
            CounterRng rng(sc.seed_, "automorphism:" + id);
            if (spec.contains("random")) {
                sc.automorphisms_.emplace_back(id, random_automorphism(rng, ref, read_number(spec, "random", 0.3, what)));
                continue;
            }
            MatrixField base = spec.contains("base_part")
                                   ? read_field(spec.at("base_part"), n, n, n, rng, what + ".base_part")
                                   : MatrixField::identity(n);
            MatrixField shift = spec.contains("shift_part")
                                    ? read_field(spec.at("shift_part"), m, n, n, rng, what + ".shift_part")
                                    : MatrixField::zero(m, n);
            sc.automorphisms_.emplace_back(id, GaugeAutomorphism(ref, std::move(base), std::move(shift)));
        }
    }

    if (doc.contains("hamiltonians")) {
        if (!doc.at("hamiltonians").is_object()) parse_error("hamiltonians must be an object");
        for (const auto& [id, spec] : doc.at("hamiltonians").items())
            sc.hamiltonians_.emplace_back(id, read_hamiltonian(spec, group, "hamiltonians." + id));
    }

    if (doc.contains("runs")) {
        if (!doc.at("runs").is_array()) parse_error("runs must be an array");
        for (const Json& rj : doc.at("runs")) {
            if (!rj.is_object() || !rj.contains("id") || !rj.at("id").is_string())
                parse_error("every run needs a string \"id\"");
            ScenarioRun run;
            run.id = rj.at("id").get<std::string>();
            const std::string what = "runs." + run.id;
            if (!rj.contains("connection") || !rj.at("connection").is_string())
                parse_error(what + " needs a string \"connection\"");
            run.connection = rj.at("connection").get<std::string>();
            sc.connection(run.connection);
            if (rj.contains("automorphism")) {
                run.automorphism = rj.at("automorphism").get<std::string>();
                sc.automorphism(*run.automorphism);
            }
            if (!rj.contains("hamiltonian") || !rj.at("hamiltonian").is_string())
                parse_error(what + " needs a string \"hamiltonian\"");
            run.hamiltonian = rj.at("hamiltonian").get<std::string>();
            sc.hamiltonian(run.hamiltonian);
            run.x0 = read_vec_sized(rj, "x0", n, what, true);
            run.pitilde0 = read_vec_sized(rj, "pitilde0", n, what, false);
            run.g0 = read_vec_sized(rj, "g0", m, what, false);
            run.rho = read_vec_sized(rj, "rho", m, what, false);
            run.dt = read_number(rj, "dt", 1e-3, what);
            if (!(run.dt > 0.0)) parse_error(what + ".dt must be positive");
            if (rj.contains("steps")) {
                if (!rj.at("steps").is_number_integer() || rj.at("steps").get<int>() < 0)
                    parse_error(what + ".steps must be a nonnegative integer");
                run.steps = rj.at("steps").get<int>();
            }
            if (!sc.chart_.contains(run.x0)) parse_error(what + ".x0 lies outside the chart");
            for (const ScenarioRun& other : sc.runs_)
                if (other.id == run.id) parse_error("duplicate run id \"" + run.id + "\"");
            sc.runs_.push_back(std::move(run));
        }
    }
    return sc;
}

Scenario Scenario::parse_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        parse_error(e.what());
    }
    return parse(doc);
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

const ConnectionForm& Scenario::connection(const std::string& id) const {
    return find_named(connections_, id, "connection");
}

const GaugeAutomorphism& Scenario::automorphism(const std::string& id) const {
    return find_named(automorphisms_, id, "automorphism");
}

const HamiltonianSpec& Scenario::hamiltonian(const std::string& id) const {
    return find_named(hamiltonians_, id, "hamiltonian").spec;
}

const ScenarioRun& Scenario::run(const std::string& id) const {
    for (const ScenarioRun& r : runs_)
        if (r.id == id) return r;
    throw Error(ErrorCode::UnresolvedReference, "run \"" + id + "\" is not defined");
}

double Scenario::tolerance(const std::string& name, double fallback) const {
    const auto it = tolerances_.find(name);
    return it == tolerances_.end() ? fallback : it->second;
}

Json Scenario::info() const {
    Json j;
    j["group"] = group_->name();
    j["group_dim"] = group_->dim();
    j["base_dim"] = chart_.dim();
    j["chart"] = {{"lower", std::vector<double>(chart_.lower.begin(), chart_.lower.end())},
                  {"upper", std::vector<double>(chart_.upper.begin(), chart_.upper.end())}};
    j["seed"] = seed_;
    j["samples"] = samples_;
    j["connections"] = Json::array();
    for (const auto& c : connections_) j["connections"].push_back(c.first);
    j["automorphisms"] = Json::array();
    for (const auto& [id, a] : automorphisms_) j["automorphisms"].push_back({{"id", id}, {"reference", a.reference().name()}});
    j["hamiltonians"] = Json::object();
    for (const auto& [id, h] : hamiltonians_) j["hamiltonians"][id] = h.description;
    j["runs"] = Json::array();
    for (const ScenarioRun& r : runs_) {
        Json rj = {{"id", r.id}, {"connection", r.connection}, {"hamiltonian", r.hamiltonian}, {"dt", r.dt},
                   {"steps", r.steps}};
        if (r.automorphism) rj["automorphism"] = *r.automorphism;
        j["runs"].push_back(std::move(rj));
    }
    j["suites"] = suite_names();
    return j;
}

bool CheckReport::pass() const {
    for (const PropertyResult& p : properties)
        if (!p.pass()) return false;
    return true;
}

Json CheckReport::to_json() const {
    Json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["properties"] = Json::array();
    for (const PropertyResult& p : properties) {
        Json pj;
        pj["name"] = p.name;
        pj[p.lower_bound ? "min_value" : "max_residual"] = p.residual;
        pj["tolerance"] = p.tolerance;
        pj["bound"] = p.lower_bound ? "lower" : "upper";
        pj["pass"] = p.pass();
        pj["samples"] = p.samples;
        pj["seed"] = p.seed;
        if (!p.extra.is_null()) pj["details"] = p.extra;
        j["properties"].push_back(std::move(pj));
    }
    j["pass"] = pass();
    return j;
}

PhasePoint run_initial_point(const Scenario& scenario, const ScenarioRun& run) {
    const ConnectionForm& alpha = scenario.connection(run.connection);
    const GroupElement g0 = exp(scenario.group(), {run.g0});
    return i_alpha_inv(alpha, PBPoint{run.x0, run.pitilde0, g0, {run.rho}});
}

namespace {

GaugeAutomorphism run_automorphism(const Scenario& scenario, const ScenarioRun& run) {
    if (run.automorphism) return scenario.automorphism(*run.automorphism);
    return GaugeAutomorphism::identity(scenario.connection(run.connection));
}

} // namespace

Trajectory run_trajectory(const Scenario& scenario, const ScenarioRun& run) {
    return integrate(run_automorphism(scenario, run), scenario.connection(run.connection),
                     scenario.hamiltonian(run.hamiltonian), run_initial_point(scenario, run), run.dt, run.steps);
}

Json to_json(const ConservationReport& r) {
    Json j;
    j["energy_drift"] = r.energy_drift;
    j["momentum_drift"] = std::vector<double>(r.momentum_drift.begin(), r.momentum_drift.end());
    j["max_momentum_drift"] = r.max_momentum_drift;
    j["casimir_drift"] = r.casimir_drift;
    j["points"] = r.points;
    return j;
}

Json run_simulate(const Scenario& scenario, const std::string& run_id, const std::filesystem::path& out_dir) {
    const ScenarioRun& run = scenario.run(run_id);
    const Trajectory t = run_trajectory(scenario, run);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path csv = out_dir / (run.id + ".csv");
    {
        std::ofstream out(csv);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + csv.string());
        out << trajectory_csv_header(scenario.group(), scenario.chart().dim()) << '\n';
        write_trajectory_csv(out, t);
    }

    Json j;
    j["run"] = run.id;
    j["csv"] = csv.filename().string();
    j["dt"] = run.dt;
    j["steps_requested"] = run.steps;
    j["points"] = t.points.size();
    j["left_chart"] = t.left_chart;
    j["conservation"] = t.empty() ? Json() : to_json(conservation_report(t));
    std::ofstream side(out_dir / (run.id + ".json"));
    side << j.dump(2) << '\n';
    return j;
}

Json run_reduce(const Scenario& scenario, const std::string& run_id) {
    const ScenarioRun& run = scenario.run(run_id);
    const ConnectionForm& alpha = scenario.connection(run.connection);
    const GaugeAutomorphism a = run_automorphism(scenario, run);
    const ReductionReport r =
        reduced_magnetic_check(a, alpha, {run.rho}, scenario.hamiltonian(run.hamiltonian), run.x0, run.pitilde0,
                               exp(scenario.group(), {run.g0}), run.dt, run.steps);
    const double tol = scenario.tolerance("reduce.max_deviation", 1e-5);
    Json j;
    j["run"] = run.id;
    j["rho"] = std::vector<double>(run.rho.begin(), run.rho.end());
    j["dt"] = run.dt;
    j["steps"] = run.steps;
    j["final_time"] = r.final_time;
    j["left_chart"] = r.left_chart;
    j["max_deviation"] = r.max_deviation;
    j["max_base_deviation"] = r.max_base_deviation;
    j["max_momentum_deviation"] = r.max_momentum_deviation;
    j["tolerance"] = tol;
    j["conservation"] = r.projected.empty() ? Json() : to_json(r.conservation);
    j["pass"] = r.max_deviation <= tol && !r.left_chart;
    return j;
}

} // namespace bundlesym
