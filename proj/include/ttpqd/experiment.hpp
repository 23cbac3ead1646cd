#pragma once

#include <string>
#include <vector>

#include "ttpqd/solver.hpp"

namespace ttpqd {

struct ExperimentSpec {
    std::string instance_path;
    SolverConfig solver;
    Algo algo = Algo::Bmbea;
    int runs = 1;
    int jobs = 1;
    std::string out_dir;  // empty: nothing is written
    bool export_map_json = true;
    bool export_map_csv = true;
    bool export_run_logs = true;
    bool export_heatmaps = true;
    bool export_summary = true;
    bool deterministic_artifacts = false;  // report timing as 0 for diffable outputs

    void validate() const;
};

/// Per-cell statistics across runs: mean z where occupied, and how many of
/// the runs occupied each cell.
struct AggregateMap {
    GridSpec spec;
    int runs = 0;
    std::vector<double> mean_z;   // delta1*delta2, row-major by i then j; NaN when empty
    std::vector<int> occupancy;   // same layout, values in [0, runs]

    double& mean_at(int i, int j) { return mean_z[index(i, j)]; }
    int& occupancy_at(int i, int j) { return occupancy[index(i, j)]; }
    double mean_at(int i, int j) const { return mean_z[index(i, j)]; }
    int occupancy_at(int i, int j) const { return occupancy[index(i, j)]; }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * spec.delta2 + (j - 1);
    }
};

AggregateMap aggregate_maps(const std::vector<const MapGrid*>& maps);
AggregateMap aggregate_results(const std::vector<RunResult>& results);

struct RunSummary {
    double avg_z = 0.0;
    double best_z = 0.0;
    double mean_elapsed_s = 0.0;
    std::vector<double> per_run_z;  // raw scores for external statistics
};

RunSummary summarize_runs(const std::vector<RunResult>& results);

enum class HeatmapMode { Quality, Frequency };

/// Standalone SVG with one rect per cell (delta1*delta2 of them, class
/// "cell"), warm colors min-max normalized per figure, neutral empties,
/// and the threshold ranges on the axes.
std::string render_heatmap(const AggregateMap& agg, HeatmapMode mode);

struct ExperimentResult {
    std::vector<RunResult> results;
    RunSummary summary;
    std::string summary_csv;
};

/// Runs `runs` independent runs seeded seed, seed+1, ... (TTPQD_SEED
/// overrides the base seed), optionally in parallel, then aggregates and
/// writes the artifact set into out_dir. When the solver config carries no
/// f*, a shared reference tour length is settled once up front so that all
/// runs use the same grid.
ExperimentResult run_experiment(const Instance& inst, const ExperimentSpec& spec);

std::string summary_csv_header();
std::string summary_csv_row(const ExperimentSpec& spec, const RunSummary& summary);

}  // namespace ttpqd
