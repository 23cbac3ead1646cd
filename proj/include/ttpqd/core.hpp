#pragma once

#include <cassert>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttpqd/instance.hpp"

namespace ttpqd {

struct InfeasiblePacking : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Permutation of cities 1..n, canonicalized so that city 1 leads.
/// Direction is not canonicalized; the objective is direction-dependent.
class Tour {
public:
    Tour() = default;  // empty placeholder; real tours come from the validating ctor
    explicit Tour(std::vector<int> order);
    static Tour identity(int n);

    int n() const { return static_cast<int>(order_.size()); }
    const std::vector<int>& order() const { return order_; }
    int at(int pos) const { return order_[pos]; }  // 0-based position

    friend bool operator==(const Tour& a, const Tour& b) { return a.order_ == b.order_; }

private:
    std::vector<int> order_;
};

/// Item selection with cached total weight and profit. Feasibility
/// (total_weight <= W) is a predicate checked separately, not a
/// construction invariant: mutation may create transiently infeasible
/// lists that repair fixes.
class PackingList {
public:
    PackingList() = default;
    explicit PackingList(int m) : picks_(m, 0) {}

    int size() const { return static_cast<int>(picks_.size()); }
    bool picked(int j) const { return picks_[j] != 0; }
    std::int64_t total_weight() const { return total_weight_; }
    double total_profit() const { return total_profit_; }
    int picked_count() const { return picked_count_; }

    void set(const Instance& inst, int j, bool value) {
        assert(j >= 0 && j < size());
        if (picked(j) == value) return;
        picks_[j] = value ? 1 : 0;
        const Item& it = inst.items[j];
        if (value) {
            total_weight_ += it.weight;
            total_profit_ += it.profit;
            ++picked_count_;
        } else {
            total_weight_ -= it.weight;
            total_profit_ -= it.profit;
            --picked_count_;
        }
#ifndef NDEBUG
        std::int64_t w = 0;
        for (int k = 0; k < size(); ++k)
            if (picks_[k]) w += inst.items[k].weight;
        assert(w == total_weight_);
#endif
    }

    std::vector<int> picked_indices() const;

    friend bool operator==(const PackingList& a, const PackingList& b) {
        return a.picks_ == b.picks_;
    }

private:
    std::vector<std::uint8_t> picks_;
    std::int64_t total_weight_ = 0;
    double total_profit_ = 0.0;
    int picked_count_ = 0;
};

/// A complete candidate: tour + packing + the cached behaviour descriptor
/// (f, g) and objective z. Build through make_solution to get coherent
/// caches and a feasibility check.
struct Solution {
    Tour tour;
    PackingList packing;
    double f = 0.0;  // tour length
    double g = 0.0;  // packing profit
    double z = 0.0;  // net objective
};

double tour_length(const Instance& inst, const Tour& t);
double kp_value(const Instance& inst, const PackingList& y);
bool is_feasible(const Instance& inst, const PackingList& y);

/// z = g(y) - R * sum of leg times, where the leg departing city x_i runs at
/// speed v_max - nu * (cumulative picked weight up to and including x_i).
/// Throws InfeasiblePacking when total weight exceeds W.
double ttp_objective(const Instance& inst, const Tour& t, const PackingList& y);

Solution make_solution(const Instance& inst, Tour t, PackingList y);

/// Two-line solution-exchange format: tour as comma-separated city indices,
/// then picked item indices (1-based) comma-separated.
std::string write_solution_text(const Solution& s);
Solution parse_solution_text(const Instance& inst, const std::string& text);

}  // namespace ttpqd
