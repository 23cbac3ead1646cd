#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "ttpqd/experiment.hpp"
#include "ttpqd/kp_ops.hpp"
#include "ttpqd/oracle.hpp"
#include "ttpqd/tsp_ops.hpp"
#include "ttpqd/util.hpp"

namespace fs = std::filesystem;
using namespace ttpqd;

namespace {

void add_solver_options(CLI::App* cmd, ExperimentSpec& spec, std::string& tsp_op,
                        std::string& kp_op, std::string& grid_mode, std::string& algo,
                        double& fstar, std::string& tours_file) {
    cmd->add_option("--instance", spec.instance_path, "TTP instance file")->required();
    cmd->add_option("--algo", algo, "bmbea or mu+1")->check(CLI::IsMember({"bmbea", "mu+1"}));
    cmd->add_option("--tsp-op", tsp_op, "tour operator: eax or 2opt")
        ->check(CLI::IsMember({"eax", "2opt"}));
    cmd->add_option("--kp-op", kp_op, "packer: dp or ea")->check(CLI::IsMember({"dp", "ea"}));
    cmd->add_option("--iters", spec.solver.iterations, "outer iterations per run");
    cmd->add_option("--seed", spec.solver.seed, "base RNG seed (TTPQD_SEED overrides)");
    cmd->add_option("--alpha1", spec.solver.alpha1, "f span above f* (fraction)");
    cmd->add_option("--alpha2", spec.solver.alpha2, "g span below g* (fraction)");
    cmd->add_option("--delta1", spec.solver.delta1, "cells on the f axis");
    cmd->add_option("--delta2", spec.solver.delta2, "cells on the g axis");
    cmd->add_option("--grid-mode", grid_mode, "prefixed or relaxed")
        ->check(CLI::IsMember({"prefixed", "relaxed"}));
    cmd->add_option("--fstar", fstar, "reference tour length (skips deriving it)");
    cmd->add_option("--tours-file", tours_file, "seed tours, one comma-joined permutation per line");
    cmd->add_option("--time-limit", spec.solver.wallclock_limit_s, "per-run wallclock limit (s)");
    cmd->add_option("--init-pop", spec.solver.init_pop_size, "initial population size");
    cmd->add_option("--init-gens", spec.solver.init_generation_budget,
                    "generation budget for the tour initializer");
    cmd->add_option("--ea-iters", spec.solver.ea_packer_iters, "(1+1) EA iterations per offspring");
    cmd->add_option("--out-dir", spec.out_dir, "artifact directory");
}

void apply_solver_options(ExperimentSpec& spec, const std::string& tsp_op,
                          const std::string& kp_op, const std::string& grid_mode,
                          const std::string& algo, double fstar, const std::string& tours_file) {
    spec.solver.tsp_op = tsp_op == "2opt" ? TspOperator::TwoOpt : TspOperator::Eax;
    spec.solver.kp_op = kp_op == "ea" ? KpOperator::OnePlusOneEa : KpOperator::Dp;
    spec.solver.grid_mode = grid_mode == "relaxed" ? GridMode::Relaxed : GridMode::Prefixed;
    spec.algo = algo == "mu+1" ? Algo::MuPlusOne : Algo::Bmbea;
    if (fstar > 0) spec.solver.f_star = fstar;
    if (!tours_file.empty()) spec.solver.tours_file = tours_file;
}

int cmd_render(const std::string& in_dir, const std::string& out_dir) {
    std::vector<fs::path> snapshots;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("map_", 0) == 0 && entry.path().extension() == ".json")
            snapshots.push_back(entry.path());
    }
    if (snapshots.empty()) {
        std::cerr << "no map_*.json snapshots in " << in_dir << "\n";
        return 1;
    }
    std::sort(snapshots.begin(), snapshots.end());

    // Snapshots carry descriptors; rebuild the per-cell stats directly.
    AggregateMap agg;
    bool first = true;
    std::vector<double> sum;
    for (const fs::path& p : snapshots) {
        std::ifstream in(p);
        nlohmann::json j = nlohmann::json::parse(in);
        GridSpec spec = grid_spec_from_json(j.at("spec"));
        if (first) {
            agg.spec = spec;
            const std::size_t cells = static_cast<std::size_t>(spec.delta1) * spec.delta2;
            agg.mean_z.assign(cells, std::numeric_limits<double>::quiet_NaN());
            agg.occupancy.assign(cells, 0);
            sum.assign(cells, 0.0);
            first = false;
        } else if (!(spec == agg.spec)) {
            std::cerr << "snapshot " << p << " uses a different grid\n";
            return 1;
        }
        for (const auto& cell : j.at("cells")) {
            int i = cell.at("i").get<int>(), jj = cell.at("j").get<int>();
            sum[agg.index(i, jj)] += cell.at("z").get<double>();
            ++agg.occupancy_at(i, jj);
        }
        ++agg.runs;
    }
    for (std::size_t k = 0; k < sum.size(); ++k)
        if (agg.occupancy[k] > 0) agg.mean_z[k] = sum[k] / agg.occupancy[k];

    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "quality.svg") << render_heatmap(agg, HeatmapMode::Quality);
    std::ofstream(fs::path(out_dir) / "frequency.svg")
        << render_heatmap(agg, HeatmapMode::Frequency);
    std::cout << "rendered " << agg.runs << " snapshots to " << out_dir << "\n";
    return 0;
}

int cmd_oracle(const std::string& suite, int cases, std::uint64_t seed) {
    Rng rng(seed);
    int failures = 0;
    if (suite == "pwt" || suite == "all") {
        for (int c = 0; c < cases; ++c) {
            Instance inst = oracle::random_instance(rng);
            Tour t = oracle::random_tour(inst.n, rng);
            auto brute = oracle::brute_force_pwt(inst, t);
            auto dp = pwt_dp(inst, t);
            if (std::abs(dp.value - brute.best_z) > 1e-9) {
                ++failures;
                std::printf("pwt case %d: dp %.12f vs brute %.12f\n", c, dp.value, brute.best_z);
            }
        }
        std::printf("[%s] pwt: %d cases\n", failures ? "FAIL" : "PASS", cases);
    }
    if (suite == "kp" || suite == "all") {
        int kp_failures = 0;
        for (int c = 0; c < cases; ++c) {
            oracle::RandomInstanceParams params;
            params.max_m = 20;
            Instance inst = oracle::random_instance(rng, params);
            double brute = oracle::brute_force_kp(inst);
            if (std::abs(kp_optimal(inst).value - brute) > 1e-12) ++kp_failures;
        }
        failures += kp_failures;
        std::printf("[%s] kp: %d cases\n", kp_failures ? "FAIL" : "PASS", cases);
    }
    if (suite == "tsp" || suite == "all") {
        int tsp_failures = 0;
        for (int c = 0; c < cases; ++c) {
            oracle::RandomInstanceParams params;
            params.max_m = 0;
            params.min_n = 4;
            params.max_n = 7;
            Instance inst = oracle::random_instance(rng, params);
            InitTours best = evolve_initial_tours(inst, std::nullopt, 50, 8, rng);
            if (best.best_length > oracle::brute_force_tsp(inst) + 1e-9) ++tsp_failures;
        }
        failures += tsp_failures;
        std::printf("[%s] tsp: %d cases\n", tsp_failures ? "FAIL" : "PASS", cases);
    }
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quality-diversity solver suite for the travelling thief problem"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string tsp_op = "eax", kp_op = "dp", grid_mode = "prefixed", algo = "bmbea";
    std::string tours_file;
    double fstar = 0;
    std::string solution_out;

    CLI::App* solve = app.add_subcommand("solve", "one run, printed summary");
    add_solver_options(solve, spec, tsp_op, kp_op, grid_mode, algo, fstar, tours_file);
    solve->add_option("--solution-out", solution_out, "write the best solution (two-line format)");

    CLI::App* experiment = app.add_subcommand("experiment", "multi-run protocol with artifacts");
    add_solver_options(experiment, spec, tsp_op, kp_op, grid_mode, algo, fstar, tours_file);
    experiment->add_option("--runs", spec.runs, "independent runs (seeds seed, seed+1, ...)");
    experiment->add_option("--jobs", spec.jobs, "parallel runs");
    experiment->add_flag("--deterministic-artifacts", spec.deterministic_artifacts,
                         "zero out timing in summary.csv so identical specs diff clean");
    bool no_maps = false, no_logs = false, no_heatmaps = false;
    experiment->add_flag("--no-maps", no_maps, "skip map_<k>.json/.csv");
    experiment->add_flag("--no-logs", no_logs, "skip run_<k>.jsonl");
    experiment->add_flag("--no-heatmaps", no_heatmaps, "skip quality.svg/frequency.svg");

    std::string render_in, render_out = ".";
    CLI::App* render = app.add_subcommand("render", "rebuild SVGs from saved map snapshots");
    render->add_option("--in-dir", render_in, "directory holding map_<k>.json")->required();
    render->add_option("--out-dir", render_out, "where to put the SVGs");

    std::string oracle_suite = "all";
    int oracle_cases = 200;
    std::uint64_t oracle_seed = 1;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force verifiers for CI");
    oracle_cmd->add_option("--suite", oracle_suite, "pwt, kp, tsp or all")
        ->check(CLI::IsMember({"pwt", "kp", "tsp", "all"}));
    oracle_cmd->add_option("--cases", oracle_cases, "random cases per suite");
    oracle_cmd->add_option("--seed", oracle_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed()) return cmd_render(render_in, render_out);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_suite, oracle_cases, oracle_seed);

        apply_solver_options(spec, tsp_op, kp_op, grid_mode, algo, fstar, tours_file);
        Instance inst = load_instance(spec.instance_path);

        if (solve->parsed()) {
            spec.runs = 1;
            ExperimentResult res = run_experiment(inst, spec);
            const RunResult& r = res.results.front();
            std::printf("instance %s: n=%d m=%d W=%lld\n", inst.name.c_str(), inst.n,
                        inst.num_items(), static_cast<long long>(inst.capacity));
            if (r.map)
                std::printf("%s, f*=%s g*=%s, grid %dx%d (%s)\n", to_string(spec.algo),
                            fmt_double(r.f_star).c_str(), fmt_double(r.g_star).c_str(),
                            r.map->spec().delta1, r.map->spec().delta2,
                            to_string(spec.solver.grid_mode));
            else
                std::printf("%s, f*=%s g*=%s, population %zu\n", to_string(spec.algo),
                            fmt_double(r.f_star).c_str(), fmt_double(r.g_star).c_str(),
                            r.population.size());
            std::printf("best z=%s (f=%s g=%s) after %lld iterations, %.2fs\n",
                        fmt_double(r.best.z).c_str(), fmt_double(r.best.f).c_str(),
                        fmt_double(r.best.g).c_str(), r.iterations_done, r.elapsed_s);
            if (r.map)
                std::printf("archive: %d occupied cells (filled %lld, replaced %lld, rejected "
                            "%lld, discarded %lld)\n",
                            r.map->occupied_count(), r.counters.filled, r.counters.replaced,
                            r.counters.rejected, r.counters.discarded);
            if (!solution_out.empty()) {
                std::ofstream out(solution_out, std::ios::binary);
                out << write_solution_text(r.best);
            }
            return 0;
        }

        // experiment
        spec.export_map_json = spec.export_map_csv = !no_maps;
        spec.export_run_logs = !no_logs;
        spec.export_heatmaps = !no_heatmaps;
        ExperimentResult res = run_experiment(inst, spec);
        std::fputs(res.summary_csv.c_str(), stdout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
