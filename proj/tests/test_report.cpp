#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "packsim/report.hpp"

using namespace packsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("packsim_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
    std::string read(const std::string& name) const {
        std::ifstream in(path / name);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
};

const char* kScenario = R"({
  "name": "demo",
  "servers": 1,
  "capacity": 10,
  "policies": ["bf-js", "vqs"],
  "J": 2,
  "arrival": "poisson", "lambda": 0.02,
  "sizes": "discrete", "size_values": [4, 6], "size_probs": ["1/2", "1/2"],
  "service": "geometric", "mu": 0.01,
  "horizon": 20000, "seed": 3, "sample_every": 200,
  "replications": 2
})";

}  // namespace

TEST_CASE("scenario files parse with capacity normalization and fraction strings") {
    ScenarioFile f = parse_scenario_json(kScenario, ".");
    CHECK(f.base.name == "demo");
    CHECK(f.policies == std::vector<Policy>{Policy::bf_js, Policy::vqs});
    CHECK(f.replications == 2);
    REQUIRE(f.base.sizes.kind == SizeLawKind::discrete);
    CHECK(f.base.sizes.values[0] == Frac(2, 5));  // 4 of capacity 10
    CHECK(f.base.sizes.values[1] == Frac(3, 5));
    CHECK(f.base.sizes.probs[0] == Frac(1, 2));
    CHECK(f.base.j_levels == 2);
}

TEST_CASE("scenario parse failures name the problem") {
    CHECK_THROWS(parse_scenario_json("{ not json", "."));
    CHECK_THROWS(parse_scenario_json(R"({"policies":["bf-js"],"horizon":10})", "."));  // no lambda
    CHECK_THROWS(parse_scenario_json(
        R"({"policy":"warp","arrival":"poisson","lambda":1,"sizes":"uniform",
            "size_a":0.1,"size_b":0.9,"horizon":10})",
        "."));
    // a size above capacity is rejected up front
    CHECK_THROWS(parse_scenario_json(
        R"({"policy":"bf-js","capacity":10,"arrival":"poisson","lambda":0.1,
            "sizes":"discrete","size_values":[11],"size_probs":[1],"horizon":10})",
        "."));
}

TEST_CASE("run_scenario_file writes one csv per policy and replication") {
    TempDir tmp;
    std::string scenario = tmp.file("demo.json", kScenario);
    std::string out_dir = (tmp.path / "out").string();
    RunArtifacts arts = run_scenario_file(scenario, out_dir);
    CHECK(arts.csv_paths.size() == 4);  // 2 policies x 2 replications
    CHECK(arts.summary_paths.size() == 2);
    for (const std::string& p : arts.csv_paths) CHECK(fs::exists(p));
    // summaries carry verdicts
    std::ifstream in(arts.summary_paths[0]);
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str().find("\"verdict\"") != std::string::npos);
}

TEST_CASE("re-running a scenario reproduces identical csv bytes") {
    TempDir tmp;
    std::string scenario = tmp.file("demo.json", kScenario);
    run_scenario_file(scenario, (tmp.path / "a").string());
    run_scenario_file(scenario, (tmp.path / "b").string());
    CHECK(tmp.read("a/demo_bf-js_rep0.csv") == tmp.read("b/demo_bf-js_rep0.csv"));
    CHECK(tmp.read("a/demo_vqs_rep1.csv") == tmp.read("b/demo_vqs_rep1.csv"));
    CHECK(!tmp.read("a/demo_bf-js_rep0.csv").empty());
}

TEST_CASE("metrics csv layout") {
    RunMetrics m;
    m.vq_count = 2;
    MetricsSample s;
    s.slot = 0;
    s.queue_total = 3;
    s.busy_capacity = to_units(0.5);
    s.arrivals_cum = 5;
    s.departures_cum = 1;
    s.vq_sizes = {2, 1};
    m.samples.push_back(s);
    std::ostringstream os;
    metrics_to_csv(os, m);
    CHECK(os.str() ==
          "slot,q_total,busy_capacity,arrivals_cum,departures_cum,vq_0,vq_1\n"
          "0,3,0.5,5,1,2,1\n");
}

TEST_CASE("alpha sweeps set the arrival rate from the grid") {
    TempDir tmp;
    std::string sweep_doc = R"({
      "name": "mini",
      "servers": 5,
      "policies": ["bf-js"],
      "sizes": "uniform", "size_a": 0.1, "size_b": 0.9,
      "service": "geometric", "mu": 0.01,
      "horizon": 5000, "seed": 5, "sample_every": 100,
      "parameter": "alpha",
      "grid": [0.9],
      "replications": 2
    })";
    std::string path = tmp.file("mini.json", sweep_doc);
    SweepSpec spec = parse_sweep_file(path);
    std::vector<SweepCell> cells = sweep(spec);
    REQUIRE(cells.size() == 1);
    CHECK(!cells[0].failed);
    // lambda = alpha * mu * L / mean = 0.9 * 0.01 * 5 / 0.5 = 0.09; verify
    // through the spec round trip
    Scenario probe = spec.base;
    probe.arrival.lambda = 0.9 * probe.service.mu * 5 / mean_size(probe.sizes);
    CHECK(probe.arrival.lambda == doctest::Approx(0.09));

    SUBCASE("sweep csv is byte-stable") {
        std::ostringstream a, b;
        sweep_to_csv(a, cells);
        sweep_to_csv(b, sweep(spec));
        CHECK(a.str() == b.str());
        CHECK(a.str().find("0.9,bf-js,") != std::string::npos);
    }
}

TEST_CASE("sweep specs validate the grid") {
    TempDir tmp;
    std::string bad = R"({
      "policies": ["bf-js"],
      "sizes": "uniform", "size_a": 0.1, "size_b": 0.9,
      "service": "geometric", "mu": 0.01,
      "horizon": 1000,
      "parameter": "alpha",
      "grid": []
    })";
    CHECK_THROWS(parse_sweep_file(tmp.file("bad.json", bad)));
}

TEST_CASE("cell failures are marked and the sweep continues") {
    SweepSpec spec;
    spec.base.policy = Policy::bf_js;
    spec.base.arrival.kind = ArrivalSpec::Kind::poisson;
    spec.base.sizes = SizeLaw::uniform(parse_frac("0.1"), parse_frac("0.9"));
    spec.base.service.mu = 0.01;
    spec.base.horizon = 100;  // too few samples for a verdict: cell fails
    spec.base.sample_every = 50;
    spec.grid = {0.5};
    spec.policies = {Policy::bf_js};
    std::vector<SweepCell> cells = sweep(spec);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].failed);
    CHECK(!cells[0].error.empty());
    std::ostringstream os;
    sweep_to_csv(os, cells);
    CHECK(os.str().find("failed") != std::string::npos);
}
