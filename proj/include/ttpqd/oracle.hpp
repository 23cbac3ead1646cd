#pragma once

#include "ttpqd/core.hpp"
#include "ttpqd/rng.hpp"

namespace ttpqd {
namespace oracle {

/// Exhaustive maximum of z over all 2^m packings of a fixed tour,
/// evaluated through ttp_objective. Refuses m > 24.
struct PwtBrute {
    double best_z = 0.0;
    PackingList best_packing;
};
PwtBrute brute_force_pwt(const Instance& inst, const Tour& t);

/// Exhaustive 0/1 knapsack maximum over all subsets. Refuses m > 24.
double brute_force_kp(const Instance& inst);

/// Exhaustive shortest tour by permutation enumeration. Refuses n > 10.
double brute_force_tsp(const Instance& inst);

struct RandomInstanceParams {
    int min_n = 2, max_n = 8;
    int min_m = 0, max_m = 14;
    std::int64_t max_weight = 30;
    std::int64_t max_capacity = 100;
    double max_profit = 100.0;
    double coord_span = 60.0;
};

/// Small random instance with integer weights and profits, CEIL_2D metric.
Instance random_instance(Rng& rng, const RandomInstanceParams& params = {});

Tour random_tour(int n, Rng& rng);

}  // namespace oracle
}  // namespace ttpqd
