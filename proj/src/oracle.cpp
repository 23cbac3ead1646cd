#include "ttpqd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttpqd {
namespace oracle {

namespace {

void enumerate_packings(const Instance& inst, const Tour& t, int item, PackingList& picks,
                        PwtBrute& best) {
    if (item == inst.num_items()) {
        if (!is_feasible(inst, picks)) return;
        double z = ttp_objective(inst, t, picks);
        if (z > best.best_z) {
            best.best_z = z;
            best.best_packing = picks;
        }
        return;
    }
    enumerate_packings(inst, t, item + 1, picks, best);
    picks.set(inst, item, true);
    if (picks.total_weight() <= inst.capacity)
        enumerate_packings(inst, t, item + 1, picks, best);
    picks.set(inst, item, false);
}

}  // namespace

PwtBrute brute_force_pwt(const Instance& inst, const Tour& t) {
    const int m = inst.num_items();
    if (m > 24) throw std::invalid_argument("brute_force_pwt: too many items");
    PackingList picks(m);
    PwtBrute best{ttp_objective(inst, t, picks), picks};
    enumerate_packings(inst, t, 0, picks, best);
    return best;
}

double brute_force_kp(const Instance& inst) {
    const int m = inst.num_items();
    if (m > 24) throw std::invalid_argument("brute_force_kp: too many items");
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        std::int64_t w = 0;
        double p = 0.0;
        for (int j = 0; j < m; ++j)
            if (mask & (1ull << j)) {
                w += inst.items[j].weight;
                p += inst.items[j].profit;
            }
        if (w <= inst.capacity && p > best) best = p;
    }
    return best;
}

double brute_force_tsp(const Instance& inst) {
    if (inst.n > 10) throw std::invalid_argument("brute_force_tsp: too many cities");
    std::vector<int> rest(inst.n - 1);
    std::iota(rest.begin(), rest.end(), 2);
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = inst.distance(1, rest.front()) + inst.distance(rest.back(), 1);
        for (std::size_t k = 0; k + 1 < rest.size(); ++k)
            len += inst.distance(rest[k], rest[k + 1]);
        best = std::min(best, len);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

Instance random_instance(Rng& rng, const RandomInstanceParams& params) {
    Instance inst;
    inst.name = "random";
    inst.knapsack_data_type = "uncorrelated";
    inst.n = uniform_int(rng, params.min_n, params.max_n);
    inst.min_speed = 0.1;
    inst.max_speed = 1.0;
    inst.renting_ratio = uniform_int(rng, 0, 40) / 10.0;
    inst.edge_weight_type = EdgeWeightType::Ceil2D;
    for (int i = 0; i < inst.n; ++i)
        inst.coords.push_back({static_cast<double>(uniform_int(rng, 0, (int)params.coord_span)),
                               static_cast<double>(uniform_int(rng, 0, (int)params.coord_span))});
    int m = uniform_int(rng, params.min_m, params.max_m);
    if (m > 0) {
        inst.capacity = uniform_int(rng, 1, static_cast<int>(params.max_capacity));
        for (int j = 0; j < m; ++j) {
            Item it;
            it.weight = uniform_int(rng, 1, static_cast<int>(params.max_weight));
            it.profit = uniform_int(rng, 0, static_cast<int>(params.max_profit));
            it.city = uniform_int(rng, 2, inst.n);
            inst.items.push_back(it);
        }
    } else {
        inst.capacity = uniform_int(rng, 0, static_cast<int>(params.max_capacity));
    }
    inst.finalize();
    return inst;
}

Tour random_tour(int n, Rng& rng) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    return Tour(std::move(order));
}

}  // namespace oracle
}  // namespace ttpqd
