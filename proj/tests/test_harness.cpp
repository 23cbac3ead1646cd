#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ttpqd/experiment.hpp"
#include "support/fixtures.hpp"

using namespace ttpqd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal well-formedness scan: every open tag matches its close tag, and
// exactly one root element.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    int roots = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        std::size_t end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag.rfind("!--", 0) == 0) continue;
        if (tag[0] == '/') {
            std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            if (stack.empty()) ++roots;
            continue;
        }
        if (tag.back() == '/') continue;  // self-closing
        std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        stack.push_back(name);
    }
    return stack.empty() && roots == 1;
}

int count_cells(const std::string& svg) {
    std::regex cell_re("<rect class=\"cell\"");
    return static_cast<int>(
        std::distance(std::sregex_iterator(svg.begin(), svg.end(), cell_re), {}));
}

ExperimentSpec tiny_experiment_spec(const std::string& out_dir) {
    ExperimentSpec spec;
    spec.instance_path =
        testing::corpus_path("eil51qd_n50_bounded-strongly-corr_01.ttp").string();
    spec.solver.iterations = 60;
    spec.solver.init_pop_size = 8;
    spec.solver.init_generation_budget = 30;
    spec.solver.seed = 5;
    spec.runs = 2;
    spec.out_dir = out_dir;
    spec.deterministic_artifacts = true;
    return spec;
}

}  // namespace

TEST_CASE("summarize_runs aggregates z and picks the best") {
    RunResult a, b, c;
    a.best.z = 1;
    b.best.z = 2;
    c.best.z = 3;
    a.elapsed_s = 1.0;
    b.elapsed_s = 2.0;
    c.elapsed_s = 3.0;
    SUBCASE("single run") {
        RunSummary s = summarize_runs({a});
        CHECK(s.avg_z == 1.0);
        CHECK(s.best_z == 1.0);
        CHECK(s.per_run_z == std::vector<double>{1.0});
    }
    SUBCASE("three runs") {
        RunSummary s = summarize_runs({a, b, c});
        CHECK(s.avg_z == 2.0);
        CHECK(s.best_z == 3.0);
        CHECK(s.mean_elapsed_s == 2.0);
        CHECK(s.per_run_z.size() == 3);
    }
}

TEST_CASE("aggregate of a single run mirrors that run") {
    GridSpec spec;
    spec.f_star = 100;
    spec.g_star = 100;
    spec.delta1 = 5;
    spec.delta2 = 5;
    spec.alpha1 = 0.5;
    spec.alpha2 = 0.5;
    MapGrid map(spec);
    Solution s;
    s.tour = Tour(std::vector<int>{1, 2, 3});
    s.packing = PackingList(0);
    s.f = 101;
    s.g = 90;
    s.z = 42;
    REQUIRE(map.try_insert(s) == MapGrid::InsertOutcome::Filled);

    AggregateMap agg = aggregate_maps({&map});
    int occupied = 0;
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j) {
            CHECK((agg.occupancy_at(i, j) == 0 || agg.occupancy_at(i, j) == 1));
            if (agg.occupancy_at(i, j)) {
                ++occupied;
                CHECK(agg.mean_at(i, j) == 42.0);
            }
        }
    CHECK(occupied == 1);
}

TEST_CASE("render_heatmap produces well-formed SVG with one rect per cell") {
    AggregateMap agg;
    agg.spec.f_star = 100;
    agg.spec.g_star = 100;
    agg.spec.alpha1 = 0.2;
    agg.spec.alpha2 = 0.2;
    agg.spec.delta1 = 6;
    agg.spec.delta2 = 4;
    agg.runs = 10;
    agg.mean_z.assign(24, std::numeric_limits<double>::quiet_NaN());
    agg.occupancy.assign(24, 0);

    SUBCASE("all-empty map: every cell neutral") {
        std::string svg = render_heatmap(agg, HeatmapMode::Quality);
        CHECK(xml_well_formed(svg));
        CHECK(count_cells(svg) == 24);
        CHECK(svg.find("#e0e0e0") != std::string::npos);
        std::string freq = render_heatmap(agg, HeatmapMode::Frequency);
        CHECK(xml_well_formed(freq));
        CHECK(count_cells(freq) == 24);
    }

    SUBCASE("single occupied cell gets the only warm color") {
        agg.occupancy_at(2, 3) = 10;
        agg.mean_at(2, 3) = 50.0;
        std::string svg = render_heatmap(agg, HeatmapMode::Quality);
        CHECK(xml_well_formed(svg));
        CHECK(count_cells(svg) == 24);
        // 23 neutral + 1 colored
        std::regex neutral_re("fill=\"#e0e0e0\"");
        int neutral = static_cast<int>(
            std::distance(std::sregex_iterator(svg.begin(), svg.end(), neutral_re), {}));
        CHECK(neutral == 23);
        // a full-occupancy cell renders at the hot end of the ramp
        std::string freq = render_heatmap(agg, HeatmapMode::Frequency);
        CHECK(freq.find("#bd0026") != std::string::npos);
    }

    SUBCASE("deterministic output") {
        agg.occupancy_at(1, 1) = 3;
        agg.mean_at(1, 1) = 1.0;
        CHECK(render_heatmap(agg, HeatmapMode::Quality) ==
              render_heatmap(agg, HeatmapMode::Quality));
    }
}

TEST_CASE("summary csv has the pinned column order") {
    CHECK(summary_csv_header() == "instance,tsp_op,kp_op,runs,avg_z,best_z,mean_cpu_s\n");
    ExperimentSpec spec;
    spec.instance_path = "/some/where/foo_n50_x_01.ttp";
    spec.runs = 3;
    spec.deterministic_artifacts = true;
    RunSummary s;
    s.avg_z = 2.5;
    s.best_z = 3.0;
    s.mean_elapsed_s = 99.0;
    CHECK(summary_csv_row(spec, s) == "foo_n50_x_01,eax,dp,3,2.5,3,0.000\n");
}

TEST_CASE("run_experiment writes a coherent artifact set") {
    fs::path dir = fs::temp_directory_path() / "ttpqd_exp_artifacts";
    fs::remove_all(dir);
    ExperimentSpec spec = tiny_experiment_spec(dir.string());
    Instance inst = load_instance(spec.instance_path);
    ExperimentResult res = run_experiment(inst, spec);

    REQUIRE(res.results.size() == 2);
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(fs::exists(dir / "run_0.jsonl"));
    CHECK(fs::exists(dir / "run_1.jsonl"));
    CHECK(fs::exists(dir / "map_0.json"));
    CHECK(fs::exists(dir / "map_1.csv"));
    CHECK(fs::exists(dir / "quality.svg"));
    CHECK(fs::exists(dir / "frequency.svg"));
    CHECK(fs::exists(dir / "manifest.json"));

    // snapshots revalidate on re-import
    for (int k = 0; k < 2; ++k) {
        std::ifstream in(dir / ("map_" + std::to_string(k) + ".json"));
        nlohmann::json j = nlohmann::json::parse(in);
        MapGrid back = map_from_json(j, inst);
        CHECK(back.occupied_count() == res.results[k].map->occupied_count());
    }

    // runs use consecutive seeds and share the grid
    CHECK(res.results[0].map->spec() == res.results[1].map->spec());

    std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("\"status\": \"complete\"") != std::string::npos);

    std::string svg = slurp(dir / "quality.svg");
    CHECK(xml_well_formed(svg));
    CHECK(count_cells(svg) ==
          res.results[0].map->spec().delta1 * res.results[0].map->spec().delta2);

    fs::remove_all(dir);
}

TEST_CASE("identical experiment specs produce byte-identical artifacts") {
    fs::path dir_a = fs::temp_directory_path() / "ttpqd_exp_a";
    fs::path dir_b = fs::temp_directory_path() / "ttpqd_exp_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    ExperimentSpec spec_a = tiny_experiment_spec(dir_a.string());
    ExperimentSpec spec_b = tiny_experiment_spec(dir_b.string());
    Instance inst = load_instance(spec_a.instance_path);
    run_experiment(inst, spec_a);
    run_experiment(inst, spec_b);
    CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
    CHECK(slurp(dir_a / "run_0.jsonl") == slurp(dir_b / "run_0.jsonl"));
    CHECK(slurp(dir_a / "run_1.jsonl") == slurp(dir_b / "run_1.jsonl"));
    CHECK(slurp(dir_a / "map_0.json") == slurp(dir_b / "map_0.json"));
    CHECK(slurp(dir_a / "quality.svg") == slurp(dir_b / "quality.svg"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("parallel runs match sequential runs") {
    fs::path dir = fs::temp_directory_path() / "ttpqd_exp_par";
    fs::remove_all(dir);
    ExperimentSpec seq = tiny_experiment_spec("");
    seq.runs = 3;
    ExperimentSpec par = seq;
    par.jobs = 3;
    Instance inst = load_instance(seq.instance_path);
    ExperimentResult a = run_experiment(inst, seq);
    ExperimentResult b = run_experiment(inst, par);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t k = 0; k < a.results.size(); ++k)
        CHECK(a.results[k].best.z == b.results[k].best.z);
    CHECK(a.summary.avg_z == b.summary.avg_z);
}

TEST_CASE("TTPQD_SEED overrides the configured seed") {
    ExperimentSpec spec = tiny_experiment_spec("");
    spec.runs = 1;
    spec.solver.iterations = 30;
    Instance inst = load_instance(spec.instance_path);
    ExperimentResult base = run_experiment(inst, spec);
    setenv("TTPQD_SEED", "123456", 1);
    ExperimentResult overridden = run_experiment(inst, spec);
    unsetenv("TTPQD_SEED");
    ExperimentResult pinned = run_experiment(inst, spec);
    spec.solver.seed = 123456;
    ExperimentResult direct = run_experiment(inst, spec);
    CHECK(base.summary.best_z == pinned.summary.best_z);
    CHECK(overridden.summary.best_z == direct.summary.best_z);
}

TEST_CASE("mu+1 experiments summarize without maps") {
    ExperimentSpec spec = tiny_experiment_spec("");
    spec.algo = Algo::MuPlusOne;
    spec.runs = 2;
    spec.solver.iterations = 40;
    Instance inst = load_instance(spec.instance_path);
    ExperimentResult res = run_experiment(inst, spec);
    CHECK(res.results.size() == 2);
    CHECK(!res.results[0].map);
    CHECK(res.summary.per_run_z.size() == 2);
}
