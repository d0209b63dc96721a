#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bundlesym/scenario.hpp"

using namespace testing;

namespace {

const std::filesystem::path kScenarios = BUNDLESYM_SCENARIO_DIR;

ErrorCode parse_code(const std::string& text) {
    try {
        (void)Scenario::parse_text(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<double> split(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("bundlesym_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

const char* kFreeParticle = R"({
  "group": "SO2",
  "chart": {"dim": 2, "half_width": 5},
  "connections": {"flat": {"type": "zero"}},
  "hamiltonians": {"free": {"base": "free"}},
  "runs": [{"id": "line", "connection": "flat", "hamiltonian": "free",
            "x0": [0.5, -0.5], "pitilde0": [1.0, 0.5], "dt": 0.01, "steps": 100}]
})";

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("default scenario loads") {
    const Scenario s = Scenario::load(kScenarios / "so3_default.json");
    CHECK(s.group()->kind() == GroupKind::SO3);
    CHECK(s.samples() == 200);
    CHECK_FALSE(s.connections().empty());
    CHECK_FALSE(s.runs().empty());
    CHECK(s.info().contains("group"));
    CHECK(s.tolerance("no.such", 0.25) == 0.25);
    const ScenarioRun& r = s.run(s.runs().front().id);
    CHECK(s.connection(r.connection).group() == s.group());
}

TEST_CASE("unresolved references") {
    CHECK_THROWS_AS(Scenario::load(kScenarios / "broken_reference.json"), Error);
    try {
        (void)Scenario::load(kScenarios / "broken_reference.json");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnresolvedReference);
    }
    const Scenario s = Scenario::parse_text(kFreeParticle);
    CHECK_THROWS_AS(s.connection("nope"), Error);
    CHECK_THROWS_AS(s.run("nope"), Error);
    CHECK(parse_code(R"({"group":"SO2","chart":{"dim":2},"hamiltonians":{"h":{}},
        "runs":[{"id":"r","connection":"missing","hamiltonian":"h","x0":[0,0]}]})") == ErrorCode::UnresolvedReference);
}

TEST_CASE("malformed input is a parse error") {
    CHECK(parse_code("{not json") == ErrorCode::ParseError);
    CHECK(parse_code("[]") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"chart":{"dim":2}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SE3","chart":{"dim":2}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO3"})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO3","chart":{"dim":2},"tolerances":{"tg.inverse":-1}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO3","chart":{"dim":2},"samples":0})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO3","chart":{"dim":2},"connections":{"c":{"type":"spiral"}}})") ==
          ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO3","chart":{"dim":2},"hamiltonians":{"h":{"casimir":"linear","vector":[1,0,0]}}})") ==
          ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO2","chart":{"dim":2,"half_width":1},"connections":{"c":{"type":"zero"}},
        "hamiltonians":{"h":{}},"runs":[{"id":"r","connection":"c","hamiltonian":"h","x0":[3,0]}]})") ==
          ErrorCode::ParseError);
    CHECK(parse_code(R"({"group":"SO2","chart":{"dim":2},"connections":{"c":{"type":"zero"}},
        "hamiltonians":{"h":{}},"runs":[{"id":"r","connection":"c","hamiltonian":"h","x0":[0,0],"dt":0}]})") ==
          ErrorCode::ParseError);
    CHECK_THROWS_AS(Scenario::load(kScenarios / "does_not_exist.json"), Error);
}

TEST_CASE("unknown suite") {
    const Scenario s = Scenario::load(kScenarios / "so3_default.json");
    try {
        (void)run_check(s, "prop4");
        FAIL("expected UnknownSuite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownSuite);
    }
}

TEST_CASE("algebraic suite passes on the default scenario") {
    const Scenario s = Scenario::load(kScenarios / "so3_default.json");
    const CheckReport r = run_check(s, "prop2");
    CHECK(r.pass());
    REQUIRE_FALSE(r.properties.empty());
    for (const PropertyResult& p : r.properties) {
        CHECK_MESSAGE(p.pass(), p.name);
        CHECK(p.residual < 1e-10);
        CHECK(p.samples > 0);
    }
    const Json j = r.to_json();
    CHECK(j.at("suite") == "prop2");
    CHECK(j.at("pass") == true);
}

TEST_CASE("reports are deterministic and embed the seed") {
    const Scenario s = Scenario::load(kScenarios / "so3_default.json");
    const std::string a = run_check(s, "prop6").to_json().dump();
    const std::string b = run_check(s, "prop6").to_json().dump();
    CHECK(a == b);
    const CheckReport c = run_check(s, "prop6", 99);
    CHECK(c.seed == 99);
    CHECK(c.to_json().at("seed") == 99);
    CHECK(c.pass());
}

TEST_CASE("suite selector all covers every suite") {
    const Scenario s = Scenario::load(kScenarios / "su2_default.json");
    const CheckReport r = run_check(s, "all");
    CHECK(r.pass());
    for (const std::string& name : suite_names()) {
        if (name == "all") continue;
        bool found = false;
        for (const PropertyResult& p : r.properties) found |= p.name.rfind(name + ".", 0) == 0;
        CHECK_MESSAGE(found, name);
    }
}

TEST_CASE("free particle simulation is a straight line") {
    const Scenario s = Scenario::parse_text(kFreeParticle);
    const auto dir = scratch("line");
    const Json side = run_simulate(s, "line", dir);
    CHECK(side.at("points") == 101);
    const auto lines = read_lines(dir / "line.csv");
    REQUIRE(lines.size() == 102);
    CHECK(lines.front() == trajectory_csv_header(s.group(), 2));
    double worst = 0.0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto row = split(lines[k]);
        worst = std::max({worst, std::abs(row[1] - (0.5 + row[0])), std::abs(row[2] - (-0.5 + 0.5 * row[0]))});
    }
    CHECK(worst < 1e-8);
    CHECK(std::filesystem::exists(dir / "line.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("magnetic simulation keeps the momentum column constant") {
    const Scenario s = Scenario::load(kScenarios / "so2_magnetic.json");
    const auto dir = scratch("magnetic");
    const Json side = run_simulate(s, "cyclotron", dir);
    CHECK(side.at("conservation").at("max_momentum_drift").get<double>() < 1e-6);
    const auto lines = read_lines(dir / "cyclotron.csv");
    REQUIRE(lines.size() == 1002);
    const double j0 = split(lines[1]).back();
    double radius_spread = 0.0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto row = split(lines[k]);
        CHECK(row.back() == j0);
        radius_spread = std::max(radius_spread, std::abs(std::hypot(row[1], row[2] + 1.0) - 1.0));
    }
    CHECK(radius_spread < 1e-5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("zero-step run writes a header-only csv") {
    const Scenario s = Scenario::load(kScenarios / "so2_magnetic.json");
    const auto dir = scratch("empty");
    const Json side = run_simulate(s, "empty", dir);
    CHECK(side.at("points") == 0);
    CHECK(side.at("conservation").is_null());
    const auto lines = read_lines(dir / "empty.csv");
    REQUIRE(lines.size() == 1);
    CHECK(lines.front() == trajectory_csv_header(s.group(), 2));
    std::filesystem::remove_all(dir);
}

TEST_CASE("reduction reports") {
    const Scenario mag = Scenario::load(kScenarios / "so2_magnetic.json");
    const Json charged = run_reduce(mag, "cyclotron");
    CHECK(charged.at("pass") == true);
    CHECK(charged.at("max_deviation").get<double>() < 1e-5);
    CHECK(run_reduce(mag, "neutral").at("pass") == true);

    const Scenario so3 = Scenario::load(kScenarios / "so3_default.json");
    CHECK(run_reduce(so3, "neutral").at("pass") == true);
    try {
        (void)run_reduce(so3, "charged");
        FAIL("expected NotFixedPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFixedPoint);
    }
}

}
