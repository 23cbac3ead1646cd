#pragma once

#include <iosfwd>
#include <optional>

#include "ttpqd/core.hpp"
#include "ttpqd/rng.hpp"

namespace ttpqd {

struct AbEdge {
    int u = 0;
    int v = 0;
    bool from_a = false;
};

/// Closed cycle alternating edges of parent A and parent B. Edge k ends
/// where edge k+1 starts; the last edge closes back to the first. Even
/// length >= 4; A-edges and B-edges are disjoint as undirected edges.
struct AbCycle {
    std::vector<AbEdge> edges;
};

/// Walks the symmetric difference of the two parents' edge sets,
/// alternating parent-A and parent-B edges from a random start until the
/// walk closes; the enclosed cycle is extracted. Returns nullopt when the
/// parents share every edge.
std::optional<AbCycle> build_ab_cycle(const Tour& parent_a, const Tour& parent_b, Rng& rng);

struct EaxStats {
    int ab_cycle_len = 0;
    int subtours = 0;           // sub-tours in the intermediate solution
    int merge_edges_added = 0;  // reconnection edges introduced in step 3
    bool fallback = false;      // parents shared every edge; offspring copies A
    std::vector<std::pair<int, int>> merge_edges;  // the added edges, endpoints sorted
};

/// Edge assembly crossover, single-AB-cycle variant. Copies parent A's
/// edges, swaps the AB-cycle's A-edges for its B-edges, then repeatedly
/// reconnects sub-tours: pick the sub-tour r with the fewest edges and the
/// 4-tuple minimizing -d(e1)-d(e2)+d(e3)+d(e4) over e1 in E(r), e2 in the
/// rest, with both reconnection orientations considered.
Tour eax_1ab(const Instance& inst, const Tour& parent_a, const Tour& parent_b, Rng& rng,
             EaxStats* stats = nullptr);

/// Reverses the segment between positions i..j (1-based, both in 2..n).
Tour two_opt_move_at(const Tour& t, int i, int j);

/// Draws the two positions uniformly from 2..n; equal positions leave the
/// tour unchanged.
Tour two_opt_move(const Tour& t, Rng& rng);

/// First-improvement 2-opt descent to local optimality.
Tour two_opt_descent(const Instance& inst, Tour t);

enum class InitStatus { ReachedTarget, BudgetExhaustedBelowTarget };

struct InitTours {
    std::vector<Tour> tours;  // distinct, sorted by length
    InitStatus status = InitStatus::ReachedTarget;
    int generations = 0;
    double best_length = 0.0;
};

/// Generational EAX GA over random 2-opt-descended seeds; stops when the
/// best length reaches target_f (when given) or the generation budget runs
/// out. The population is always returned.
InitTours evolve_initial_tours(const Instance& inst, std::optional<double> target_f,
                               int generation_budget, int pop_size, Rng& rng);

/// One tour per line, comma-joined city indices.
std::vector<Tour> read_tours(std::istream& in, int n);
std::vector<Tour> load_tours_file(const std::string& path, int n);

}  // namespace ttpqd
