// Regenerates the synthetic instance corpus under data/instances/. The
// files follow the benchmark layout and item-profile conventions
// (uncorrelated, uncorrelated similar weights, bounded strongly correlated;
// capacity class c gives W = floor(c/11 * sum of weights)) on the classic
// 51-city coordinate set, with a seeded RNG so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "ttpqd/instance.hpp"
#include "ttpqd/kp_ops.hpp"
#include "ttpqd/rng.hpp"
#include "ttpqd/tsp_ops.hpp"

using namespace ttpqd;

namespace {

const std::vector<Point> kEil51Coords = {
    {37, 52}, {49, 49}, {52, 64}, {20, 26}, {40, 30}, {21, 47}, {17, 63}, {31, 62}, {52, 33},
    {51, 21}, {42, 41}, {31, 32}, {5, 25},  {12, 42}, {36, 16}, {52, 41}, {27, 23}, {17, 33},
    {13, 13}, {57, 58}, {62, 42}, {42, 57}, {16, 57}, {8, 52},  {7, 38},  {27, 68}, {30, 48},
    {43, 67}, {58, 48}, {58, 27}, {37, 69}, {38, 46}, {46, 10}, {61, 33}, {62, 63}, {63, 69},
    {32, 22}, {45, 35}, {59, 15}, {5, 6},   {10, 17}, {21, 10}, {5, 64},  {30, 15}, {39, 10},
    {32, 39}, {25, 32}, {25, 55}, {48, 28}, {56, 37}, {30, 40},
};

enum class ItemType { Uncorr, UncorrSimilarWeights, BoundedStronglyCorr };

const char* type_tag(ItemType t) {
    switch (t) {
        case ItemType::Uncorr: return "uncorr";
        case ItemType::UncorrSimilarWeights: return "uncorr-similar-weights";
        case ItemType::BoundedStronglyCorr: return "bounded-strongly-corr";
    }
    return "?";
}

const char* type_name(ItemType t) {
    switch (t) {
        case ItemType::Uncorr: return "uncorrelated";
        case ItemType::UncorrSimilarWeights: return "uncorrelated, similar weights";
        case ItemType::BoundedStronglyCorr: return "bounded strongly corr";
    }
    return "?";
}

Instance make(ItemType type, int items_per_city, int capacity_class, std::uint64_t seed) {
    Instance inst;
    inst.name = "eil51qd-TTP";
    inst.knapsack_data_type = type_name(type);
    inst.n = static_cast<int>(kEil51Coords.size());
    inst.coords = kEil51Coords;
    inst.min_speed = 0.1;
    inst.max_speed = 1.0;
    inst.edge_weight_type = EdgeWeightType::Ceil2D;

    Rng rng(seed);
    const int m = (inst.n - 1) * items_per_city;
    std::int64_t weight_sum = 0;
    for (int j = 0; j < m; ++j) {
        Item it;
        switch (type) {
            case ItemType::Uncorr:
                it.profit = uniform_int(rng, 1, 1000);
                it.weight = uniform_int(rng, 1, 1000);
                break;
            case ItemType::UncorrSimilarWeights:
                it.profit = uniform_int(rng, 1, 1000);
                it.weight = uniform_int(rng, 1000, 1010);
                break;
            case ItemType::BoundedStronglyCorr:
                it.weight = uniform_int(rng, 1, 1000);
                it.profit = static_cast<double>(it.weight + 100);
                break;
        }
        it.city = 2 + j % (inst.n - 1);
        weight_sum += it.weight;
        inst.items.push_back(it);
    }
    inst.capacity = weight_sum * capacity_class / 11;
    inst.renting_ratio = 1.0;  // placeholder until the reference scores exist
    inst.finalize();

    // Rent chosen so that travel costs bite without drowning the profits:
    // roughly a third of the knapsack optimum is spent riding a fast tour.
    double g_star = kp_optimal(inst).value;
    Rng tour_rng(seed ^ 0x9e3779b97f4a7c15ull);
    InitTours quick = evolve_initial_tours(inst, std::nullopt, 30, 8, tour_rng);
    inst.renting_ratio = std::round(100.0 * g_star / (3.0 * quick.best_length)) / 100.0;
    inst.finalize();
    return inst;
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "data/instances";
    std::filesystem::create_directories(dir);

    struct Job {
        ItemType type;
        int per_city;
        std::uint64_t seed;
    };
    const Job jobs[] = {
        {ItemType::BoundedStronglyCorr, 1, 101},
        {ItemType::UncorrSimilarWeights, 1, 102},
        {ItemType::Uncorr, 1, 103},
        {ItemType::BoundedStronglyCorr, 3, 104},
    };
    for (const Job& job : jobs) {
        Instance inst = make(job.type, job.per_city, 1, job.seed);
        char fname[128];
        std::snprintf(fname, sizeof(fname), "eil51qd_n%d_%s_01.ttp", inst.num_items(),
                      type_tag(job.type));
        std::ofstream out(dir / fname, std::ios::binary);
        out << serialize_instance(inst);
        std::printf("%s: n=%d m=%d W=%lld R=%g\n", fname, inst.n, inst.num_items(),
                    static_cast<long long>(inst.capacity), inst.renting_ratio);
    }
    return 0;
}
