#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "ttpqd/instance.hpp"
#include "ttpqd/core.hpp"

namespace ttpqd::testing {

/// Three cities pairwise 10 apart, W=10, speeds 0.1/1, R=1, one item
/// (p=100, w=10) at city 2. Picking nothing costs the fast round trip
/// (z=-30); picking the item drags the two remaining legs to minimum speed
/// (z=-110).
inline Instance triangle_instance() {
    Instance inst;
    inst.name = "triangle";
    inst.knapsack_data_type = "hand";
    inst.n = 3;
    inst.coords = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 8.66}};
    inst.capacity = 10;
    inst.min_speed = 0.1;
    inst.max_speed = 1.0;
    inst.renting_ratio = 1.0;
    inst.edge_weight_type = EdgeWeightType::Ceil2D;
    inst.items = {{100.0, 10, 2}};
    inst.finalize();
    return inst;
}

/// Smallest legal instance: two cities, no items.
inline Instance minimal_instance() {
    Instance inst;
    inst.name = "minimal";
    inst.knapsack_data_type = "none";
    inst.n = 2;
    inst.coords = {{0.0, 0.0}, {7.0, 0.0}};
    inst.capacity = 0;
    inst.min_speed = 0.1;
    inst.max_speed = 1.0;
    inst.renting_ratio = 1.0;
    inst.edge_weight_type = EdgeWeightType::Ceil2D;
    inst.finalize();
    return inst;
}

inline std::filesystem::path repo_root() {
    if (const char* env = std::getenv("TTPQD_ROOT")) return env;
    return ".";
}

inline std::filesystem::path corpus_path(const std::string& name) {
    return repo_root() / "data" / "instances" / name;
}

inline Instance load_corpus(const std::string& name) {
    return load_instance(corpus_path(name).string());
}

}  // namespace ttpqd::testing
