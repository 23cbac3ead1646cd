#include "ttpqd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "ttpqd/kp_ops.hpp"
#include "ttpqd/tsp_ops.hpp"
#include "ttpqd/util.hpp"

namespace ttpqd {

namespace fs = std::filesystem;

void ExperimentSpec::validate() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    solver.validate();
}

AggregateMap aggregate_maps(const std::vector<const MapGrid*>& maps) {
    if (maps.empty()) throw std::invalid_argument("nothing to aggregate");
    AggregateMap agg;
    agg.spec = maps.front()->spec();
    for (const MapGrid* m : maps)
        if (!(m->spec() == agg.spec))
            throw std::invalid_argument("cannot aggregate maps with different grids");
    agg.runs = static_cast<int>(maps.size());
    const std::size_t cells = static_cast<std::size_t>(agg.spec.delta1) * agg.spec.delta2;
    agg.mean_z.assign(cells, std::numeric_limits<double>::quiet_NaN());
    agg.occupancy.assign(cells, 0);
    std::vector<double> sum(cells, 0.0);
    for (const MapGrid* m : maps)
        for (const auto& [idx, sol] : m->occupied()) {
            sum[agg.index(idx.i, idx.j)] += sol->z;
            ++agg.occupancy_at(idx.i, idx.j);
        }
    for (std::size_t k = 0; k < cells; ++k)
        if (agg.occupancy[k] > 0) agg.mean_z[k] = sum[k] / agg.occupancy[k];
    return agg;
}

AggregateMap aggregate_results(const std::vector<RunResult>& results) {
    std::vector<const MapGrid*> maps;
    for (const RunResult& r : results)
        if (r.map) maps.push_back(&*r.map);
    if (maps.empty()) throw std::invalid_argument("no archive runs to aggregate");
    return aggregate_maps(maps);
}

RunSummary summarize_runs(const std::vector<RunResult>& results) {
    if (results.empty()) throw std::invalid_argument("no runs to summarize");
    RunSummary s;
    s.best_z = results.front().best.z;
    for (const RunResult& r : results) {
        s.per_run_z.push_back(r.best.z);
        s.avg_z += r.best.z;
        s.best_z = std::max(s.best_z, r.best.z);
        s.mean_elapsed_s += r.elapsed_s;
    }
    s.avg_z /= results.size();
    s.mean_elapsed_s /= results.size();
    return s;
}

namespace {

struct Rgb {
    int r, g, b;
};

// Pale yellow through orange to deep red; hotter means higher.
Rgb warm(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [](int a, int b, double u) { return static_cast<int>(std::lround(a + (b - a) * u)); };
    const Rgb lo{255, 255, 178}, mid{253, 141, 60}, hi{189, 0, 38};
    if (t < 0.5) {
        double u = t * 2.0;
        return {lerp(lo.r, mid.r, u), lerp(lo.g, mid.g, u), lerp(lo.b, mid.b, u)};
    }
    double u = (t - 0.5) * 2.0;
    return {lerp(mid.r, hi.r, u), lerp(mid.g, hi.g, u), lerp(mid.b, hi.b, u)};
}

std::string hex_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string render_heatmap(const AggregateMap& agg, HeatmapMode mode) {
    const int d1 = agg.spec.delta1, d2 = agg.spec.delta2;
    const int cell = 22, margin_left = 70, margin_bottom = 58, margin_top = 34, margin_right = 20;
    const int plot_w = d1 * cell, plot_h = d2 * cell;
    const int width = margin_left + plot_w + margin_right;
    const int height = margin_top + plot_h + margin_bottom;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    if (mode == HeatmapMode::Quality) {
        for (std::size_t k = 0; k < agg.mean_z.size(); ++k)
            if (agg.occupancy[k] > 0) {
                lo = std::min(lo, agg.mean_z[k]);
                hi = std::max(hi, agg.mean_z[k]);
            }
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    const std::string title =
        mode == HeatmapMode::Quality
            ? "mean z per cell over " + std::to_string(agg.runs) + " runs"
            : "cell occupancy over " + std::to_string(agg.runs) + " runs";
    svg << "  <title>" << escape_xml(title) << "</title>\n";
    svg << "  <!-- normalization: "
        << (mode == HeatmapMode::Quality
                ? (std::isfinite(lo) ? "min=" + fmt_double(lo) + " max=" + fmt_double(hi)
                                     : std::string("empty"))
                : "count/" + std::to_string(agg.runs))
        << " -->\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << margin_left << "\" y=\"20\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << escape_xml(title) << "</text>\n";

    for (int i = 1; i <= d1; ++i) {
        for (int j = 1; j <= d2; ++j) {
            const int x = margin_left + (i - 1) * cell;
            const int y = margin_top + (d2 - j) * cell;  // j grows upward
            std::string fill = "#e0e0e0";
            if (mode == HeatmapMode::Quality) {
                if (agg.occupancy_at(i, j) > 0) {
                    double t = hi > lo ? (agg.mean_at(i, j) - lo) / (hi - lo) : 1.0;
                    fill = hex_color(warm(t));
                }
            } else {
                if (agg.occupancy_at(i, j) > 0)
                    fill = hex_color(warm(static_cast<double>(agg.occupancy_at(i, j)) /
                                          std::max(1, agg.runs)));
            }
            svg << "  <rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << fill
                << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
        }
    }

    const int axis_y = margin_top + plot_h;
    svg << "  <text x=\"" << margin_left << "\" y=\"" << (axis_y + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\">f: " << fmt_double(agg.spec.f_lo())
        << "</text>\n";
    svg << "  <text x=\"" << (margin_left + plot_w) << "\" y=\"" << (axis_y + 18)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_double(agg.spec.f_hi()) << "</text>\n";
    svg << "  <text x=\"" << (margin_left + plot_w / 2) << "\" y=\"" << (axis_y + 36)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">tour length "
           "(i)</text>\n";
    svg << "  <text x=\"" << (margin_left - 6) << "\" y=\"" << (margin_top + plot_h)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">g: "
        << fmt_double(agg.spec.g_lo()) << "</text>\n";
    svg << "  <text x=\"" << (margin_left - 6) << "\" y=\"" << (margin_top + 10)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_double(agg.spec.g_hi()) << "</text>\n";
    svg << "  <text x=\"16\" y=\"" << (margin_top + plot_h / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
        << (margin_top + plot_h / 2) << ")\" text-anchor=\"middle\">packing profit (j)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string summary_csv_header() { return "instance,tsp_op,kp_op,runs,avg_z,best_z,mean_cpu_s\n"; }

std::string summary_csv_row(const ExperimentSpec& spec, const RunSummary& summary) {
    std::ostringstream row;
    std::string stem = fs::path(spec.instance_path).stem().string();
    char cpu[32];
    std::snprintf(cpu, sizeof(cpu), "%.3f",
                  spec.deterministic_artifacts ? 0.0 : summary.mean_elapsed_s);
    row << stem << ',' << to_string(spec.solver.tsp_op) << ',' << to_string(spec.solver.kp_op)
        << ',' << spec.runs << ',' << fmt_double(summary.avg_z) << ','
        << fmt_double(summary.best_z) << ',' << cpu << '\n';
    return row.str();
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

nlohmann::json spec_echo(const ExperimentSpec& spec, std::uint64_t base_seed) {
    const SolverConfig& s = spec.solver;
    nlohmann::json solver = {
        {"tsp_op", to_string(s.tsp_op)},
        {"kp_op", to_string(s.kp_op)},
        {"iterations", s.iterations},
        {"wallclock_limit_s", s.wallclock_limit_s},
        {"grid_mode", to_string(s.grid_mode)},
        {"alpha1", s.alpha1},
        {"alpha2", s.alpha2},
        {"delta1", s.delta1},
        {"delta2", s.delta2},
        {"init_pop_size", s.init_pop_size},
        {"init_generation_budget", s.init_generation_budget},
        {"ea_packer_iters", s.ea_packer_iters},
        {"seed", base_seed},
    };
    if (s.f_star) solver["f_star"] = *s.f_star;
    if (s.tours_file) solver["tours_file"] = *s.tours_file;
    return {{"instance", spec.instance_path},
            {"algo", to_string(spec.algo)},
            {"runs", spec.runs},
            {"jobs", spec.jobs},
            {"solver", solver}};
}

}  // namespace

ExperimentResult run_experiment(const Instance& inst, const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    spec.validate();

    if (const char* env = std::getenv("TTPQD_SEED")) {
        spec.solver.seed = std::strtoull(env, nullptr, 10);
    }
    const std::uint64_t base_seed = spec.solver.seed;

    // All runs must share the grid anchors. g* is instance-determined; f*
    // is settled once here when not supplied, from a seed-pinned
    // initializer pass, and handed to every run.
    if (!spec.solver.f_star && !spec.solver.tours_file) {
        Rng rng(base_seed);
        InitTours warmup = evolve_initial_tours(inst, std::nullopt,
                                                spec.solver.init_generation_budget,
                                                spec.solver.init_pop_size, rng);
        spec.solver.f_star = warmup.best_length;
    }

    ExperimentResult out;
    out.results.resize(spec.runs, RunResult{});
    std::vector<std::exception_ptr> errors(spec.runs);

    auto one_run = [&](int k) {
        try {
            SolverConfig cfg = spec.solver;
            cfg.seed = base_seed + static_cast<std::uint64_t>(k);
            Rng rng(cfg.seed);
            out.results[k] = spec.algo == Algo::Bmbea ? bmbea_run(inst, cfg, rng)
                                                      : mu_plus_one_run(inst, cfg, rng);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    if (spec.jobs <= 1 || spec.runs == 1) {
        for (int k = 0; k < spec.runs; ++k) one_run(k);
    } else {
        std::vector<std::thread> workers;
        std::atomic<int> next{0};
        int nworkers = std::min(spec.jobs, spec.runs);
        for (int w = 0; w < nworkers; ++w)
            workers.emplace_back([&] {
                for (int k = next.fetch_add(1); k < spec.runs; k = next.fetch_add(1)) one_run(k);
            });
        for (auto& t : workers) t.join();
    }

    const bool writing = !spec.out_dir.empty();
    fs::path dir(spec.out_dir);
    if (writing) fs::create_directories(dir);

    auto write_manifest = [&](const std::string& status, const std::string& error) {
        nlohmann::json runs_info = nlohmann::json::array();
        for (int k = 0; k < spec.runs; ++k) {
            nlohmann::json r = {{"run", k}, {"seed", base_seed + (std::uint64_t)k}};
            if (errors[k]) {
                r["status"] = "failed";
            } else {
                r["status"] = "ok";
                r["elapsed_s"] = out.results[k].elapsed_s;
                r["best_z"] = out.results[k].best.z;
                r["f_star"] = out.results[k].f_star;
                r["g_star"] = out.results[k].g_star;
                r["iterations_done"] = out.results[k].iterations_done;
            }
            runs_info.push_back(std::move(r));
        }
        nlohmann::json manifest = {
            {"spec", spec_echo(spec, base_seed)},
            {"status", status},
            {"runs", std::move(runs_info)},
            {"version", "ttpqd 1.0"},
            {"notes",
             "elapsed_s is wallclock, reported where tables say CPU time; "
             "mean_cpu_s is zeroed when deterministic artifacts are requested"},
        };
        if (!error.empty()) manifest["error"] = error;
        if (writing) write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    };

    for (int k = 0; k < spec.runs; ++k) {
        if (errors[k]) {
            write_manifest("partial", "run " + std::to_string(k) + " failed");
            std::rethrow_exception(errors[k]);
        }
    }

    out.summary = summarize_runs(out.results);
    out.summary_csv = summary_csv_header() + summary_csv_row(spec, out.summary);

    if (writing) {
        if (spec.export_summary) write_file(dir / "summary.csv", out.summary_csv);
        if (spec.export_run_logs) {
            for (int k = 0; k < spec.runs; ++k) {
                std::ofstream log(dir / ("run_" + std::to_string(k) + ".jsonl"),
                                  std::ios::binary);
                write_run_log(log, out.results[k]);
            }
        }
        if (spec.algo == Algo::Bmbea) {
            for (int k = 0; k < spec.runs; ++k) {
                const MapGrid& map = *out.results[k].map;
                if (spec.export_map_json)
                    write_file(dir / ("map_" + std::to_string(k) + ".json"),
                               map_to_json(map).dump(2) + "\n");
                if (spec.export_map_csv)
                    write_file(dir / ("map_" + std::to_string(k) + ".csv"), map_to_csv(map));
            }
            bool same_grid = true;
            for (int k = 1; k < spec.runs; ++k)
                if (!(out.results[k].map->spec() == out.results[0].map->spec()))
                    same_grid = false;
            if (spec.export_heatmaps && same_grid) {
                AggregateMap agg = aggregate_results(out.results);
                write_file(dir / "quality.svg", render_heatmap(agg, HeatmapMode::Quality));
                write_file(dir / "frequency.svg", render_heatmap(agg, HeatmapMode::Frequency));
            }
        }
        write_manifest("complete", "");
    }
    return out;
}

}  // namespace ttpqd
