#pragma once

#include <iosfwd>
#include <optional>

#include "ttpqd/archive.hpp"
#include "ttpqd/core.hpp"
#include "ttpqd/rng.hpp"

namespace ttpqd {

enum class TspOperator { Eax, TwoOpt };
enum class KpOperator { Dp, OnePlusOneEa };
enum class GridMode { Prefixed, Relaxed };
enum class Algo { Bmbea, MuPlusOne };

const char* to_string(TspOperator op);
const char* to_string(KpOperator op);
const char* to_string(GridMode m);
const char* to_string(Algo a);

struct SolverConfig {
    TspOperator tsp_op = TspOperator::Eax;
    KpOperator kp_op = KpOperator::Dp;
    long long iterations = 10000;
    double wallclock_limit_s = 3600.0;  // desk-scale default; raise for long runs
    GridMode grid_mode = GridMode::Prefixed;
    double alpha1 = 0.05;
    double alpha2 = 0.20;
    int delta1 = 20;
    int delta2 = 20;
    int init_pop_size = 50;
    int init_generation_budget = 5000;
    long long ea_packer_iters = 2000;
    double relaxed_epsilon = 0.01;  // span used when the population extremes degenerate
    std::optional<double> f_star;   // externally supplied reference optimum
    std::optional<std::string> tours_file;
    std::uint64_t seed = 1;

    void validate() const;
};

struct GridUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitPopulation {
    std::vector<Solution> solutions;
    double f_star = 0.0;
    double g_star = 0.0;
    bool reached_tsp_target = true;
};

/// Builds the initial solutions: tours from the configured source (file or
/// the EAX initializer), each packed by the configured KP operator. With
/// the (1+1) EA packer, the seed packing is the capacity-optimal knapsack
/// selection repaired to feasibility. Also settles f* (supplied value,
/// else best tour seen) and g* (exact knapsack optimum).
InitPopulation initialize_population(const Instance& inst, const SolverConfig& cfg, Rng& rng);

struct RunEvent {
    long long iter = 0;  // 0 marks initialization inserts
    MapGrid::InsertOutcome outcome = MapGrid::InsertOutcome::Filled;
    int i = 0, j = 0;
    double f = 0.0, g = 0.0, z = 0.0;
};

struct RunResult {
    Algo algo = Algo::Bmbea;
    double f_star = 0.0;
    double g_star = 0.0;
    std::optional<MapGrid> map;        // BMBEA archive
    std::vector<Solution> population;  // (mu+1) final population
    Solution best;
    std::vector<double> best_trace;   // best z after init, then after each iteration
    std::vector<double> worst_trace;  // (mu+1) only: population min z per iteration
    long long iterations_done = 0;
    double elapsed_s = 0.0;
    MapGrid::Counters counters;
    std::vector<RunEvent> events;  // archive-changing events only
    long long forced_same_parent = 0;
    bool reached_tsp_target = true;

    /// Distinct behaviours in the final set: occupied cells for the
    /// archive, distinct (f, g) pairs for a plain population.
    int descriptor_count() const;
};

RunResult bmbea_run(const Instance& inst, const SolverConfig& cfg, Rng& rng);
RunResult mu_plus_one_run(const Instance& inst, const SolverConfig& cfg, Rng& rng);

/// One JSON line per archive-changing event: {iter, outcome, i, j, f, g, z}.
void write_run_log(std::ostream& out, const RunResult& result);

}  // namespace ttpqd
