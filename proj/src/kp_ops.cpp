#include "ttpqd/kp_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ttpqd {

namespace {

// One traceback bit per DP cell, packed.
class ChoiceBits {
public:
    ChoiceBits(int rows, std::int64_t cols)
        : words_per_row_((cols + 63) / 64), bits_(static_cast<std::size_t>(rows) * words_per_row_, 0) {}

    void set(int row, std::int64_t col) {
        bits_[static_cast<std::size_t>(row) * words_per_row_ + (col >> 6)] |= 1ull << (col & 63);
    }
    bool get(int row, std::int64_t col) const {
        return (bits_[static_cast<std::size_t>(row) * words_per_row_ + (col >> 6)] >>
                (col & 63)) & 1ull;
    }

private:
    std::int64_t words_per_row_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace

PackerResult kp_optimal(const Instance& inst) {
    const int m = inst.num_items();
    const std::int64_t cap = inst.capacity;
    PackingList packing(m);
    if (m == 0) return {0.0, std::move(packing)};

    std::vector<double> dp(cap + 1, 0.0);
    ChoiceBits take(m, cap + 1);
    for (int i = 0; i < m; ++i) {
        const std::int64_t w = inst.items[i].weight;
        const double p = inst.items[i].profit;
        for (std::int64_t j = cap; j >= w; --j) {
            double cand = dp[j - w] + p;
            if (cand > dp[j]) {
                dp[j] = cand;
                take.set(i, j);
            }
        }
    }

    std::int64_t j = cap;
    for (int i = m - 1; i >= 0; --i) {
        if (take.get(i, j)) {
            packing.set(inst, i, true);
            j -= inst.items[i].weight;
        }
    }
    return {dp[cap], std::move(packing)};
}

PackerResult pwt_dp(const Instance& inst, const Tour& t) {
    const int m = inst.num_items();
    const int n = t.n();
    const double rent = inst.renting_ratio;
    const double vmax = inst.max_speed;
    const double nu = inst.nu();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // Suffix of leg distances: suffix[p] = legs departing tour positions
    // p..n (1-based), including the return leg.
    std::vector<double> suffix(n + 2, 0.0);
    for (int p = n; p >= 1; --p)
        suffix[p] = suffix[p + 1] + inst.distance(t.at(p - 1), t.at(p % n));
    const double empty_profit = -rent * suffix[1] / vmax;

    PackingList packing(m);
    if (m == 0) return {empty_profit, std::move(packing)};

    std::vector<int> pos_of_city(n + 1, 0);
    for (int p = 1; p <= n; ++p) pos_of_city[t.at(p - 1)] = p;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pos_of_city[inst.items[a].city] < pos_of_city[inst.items[b].city];
    });

    const std::int64_t cap = inst.capacity;
    std::vector<double> prev(cap + 1, kNegInf), cur(cap + 1, kNegInf);
    prev[0] = empty_profit;
    ChoiceBits take(m, cap + 1);

    for (int r = 0; r < m; ++r) {
        const Item& it = inst.items[order[r]];
        const std::int64_t w = it.weight;
        const double d_suffix = suffix[pos_of_city[it.city]];
        for (std::int64_t j = 0; j <= cap; ++j) {
            double best = prev[j];
            if (j >= w && prev[j - w] != kNegInf) {
                double extended = prev[j - w] + it.profit -
                                  rent * d_suffix *
                                      (1.0 / (vmax - nu * static_cast<double>(j)) -
                                       1.0 / (vmax - nu * static_cast<double>(j - w)));
                if (extended > best) {
                    best = extended;
                    take.set(r, j);
                }
            }
            cur[j] = best;
        }
        std::swap(prev, cur);
    }

    std::int64_t best_j = 0;
    for (std::int64_t j = 1; j <= cap; ++j)
        if (prev[j] > prev[best_j]) best_j = j;
    const double best_value = prev[best_j];

    std::int64_t j = best_j;
    for (int r = m - 1; r >= 0; --r) {
        if (take.get(r, j)) {
            packing.set(inst, order[r], true);
            j -= inst.items[order[r]].weight;
        }
    }
    return {best_value, std::move(packing)};
}

PackingList repair_packing(const Instance& inst, PackingList y, Rng& rng) {
    if (is_feasible(inst, y)) return y;
    std::vector<int> picked = y.picked_indices();
    while (y.total_weight() > inst.capacity) {
        std::size_t k = uniform_index(rng, picked.size());
        y.set(inst, picked[k], false);
        picked[k] = picked.back();
        picked.pop_back();
    }
    return y;
}

PackingList ea_packer(const Instance& inst, const Tour& t, const PackingList& seed,
                      long long iters, Rng& rng) {
    const int m = inst.num_items();
    if (m < 1) throw std::invalid_argument("ea_packer needs at least one item");
    if (!is_feasible(inst, seed)) throw InfeasiblePacking("ea_packer seed is infeasible");

    PackingList best = seed;
    double best_z = ttp_objective(inst, t, best);
    const double rate = 1.0 / m;
    for (long long it = 0; it < iters; ++it) {
        PackingList cand = best;
        for (int j = 0; j < m; ++j)
            if (uniform_real(rng) < rate) cand.set(inst, j, !cand.picked(j));
        cand = repair_packing(inst, std::move(cand), rng);
        double z = ttp_objective(inst, t, cand);
        if (z > best_z) {
            best_z = z;
            best = std::move(cand);
        }
    }
    return best;
}

}  // namespace ttpqd
