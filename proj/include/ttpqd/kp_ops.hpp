#pragma once

#include "ttpqd/core.hpp"
#include "ttpqd/rng.hpp"

namespace ttpqd {

struct PackerResult {
    double value = 0.0;
    PackingList packing;
};

/// Exact 0/1 knapsack: maximizes total profit subject to the capacity,
/// ignoring travel. Returns g* and an optimal selection.
PackerResult kp_optimal(const Instance& inst);

/// Exact packing for a fixed tour. Processes items in tour order (ties by
/// item index) over a profit table indexed by exact knapsack weight; each
/// entry extends the predecessor row either without the item or with it,
/// charging the slowdown of the item's weight over the tour legs from its
/// city to the end of the tour. Returns the optimal z and packing.
PackerResult pwt_dp(const Instance& inst, const Tour& t);

/// Removes picked items uniformly at random, one by one, until the packing
/// fits the capacity. Feasible input comes back unchanged.
PackingList repair_packing(const Instance& inst, PackingList y, Rng& rng);

/// (1+1) EA on the packing for a fixed tour: per iteration, flip each bit
/// independently with rate 1/m, repair, accept iff strictly better z.
PackingList ea_packer(const Instance& inst, const Tour& t, const PackingList& seed,
                      long long iters, Rng& rng);

}  // namespace ttpqd
