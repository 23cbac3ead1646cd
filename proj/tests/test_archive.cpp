#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ttpqd/archive.hpp"
#include "ttpqd/oracle.hpp"
#include "support/fixtures.hpp"

using namespace ttpqd;

namespace {

GridSpec demo_spec() {
    GridSpec spec;
    spec.f_star = 400.0;
    spec.g_star = 1000.0;
    spec.alpha1 = 0.05;
    spec.alpha2 = 0.20;
    spec.delta1 = 20;
    spec.delta2 = 20;
    return spec;
}

// Synthetic solutions: the archive only reads (f, g, z), so a placeholder
// tour and packing keep the fuzz cheap.
Solution synthetic(double f, double g, double z) {
    Solution s;
    s.tour = Tour(std::vector<int>{1, 2, 3});
    s.packing = PackingList(0);
    s.f = f;
    s.g = g;
    s.z = z;
    return s;
}

}  // namespace

TEST_CASE("cell_index maps the descriptor space") {
    GridSpec spec = demo_spec();
    SUBCASE("both optima land in cell (1, delta2)") {
        auto idx = cell_index(spec, spec.f_star, spec.g_star);
        REQUIRE(idx);
        CHECK(idx->i == 1);
        CHECK(idx->j == 20);
    }
    SUBCASE("exact far boundaries clamp into the last cells") {
        auto idx = cell_index(spec, spec.f_hi(), spec.g_lo());
        REQUIRE(idx);
        CHECK(idx->i == 20);
        CHECK(idx->j == 1);
    }
    SUBCASE("better-than-reference descriptors fall outside") {
        CHECK_FALSE(cell_index(spec, spec.f_star - 0.001, spec.g_star));
        CHECK_FALSE(cell_index(spec, spec.f_star, spec.g_star + 0.001));
        CHECK_FALSE(cell_index(spec, spec.f_hi() + 0.001, spec.g_star));
        CHECK_FALSE(cell_index(spec, spec.f_star, spec.g_lo() - 0.001));
    }
    SUBCASE("interior formula") {
        // f = f* + 2.5 cells worth of span, g = g_lo + 7.5 cells
        double f = spec.f_star + 2.5 * spec.alpha1 * spec.f_star / spec.delta1;
        double g = spec.g_lo() + 7.5 * spec.alpha2 * spec.g_star / spec.delta2;
        auto idx = cell_index(spec, f, g);
        REQUIRE(idx);
        CHECK(idx->i == 3);
        CHECK(idx->j == 8);
    }
    SUBCASE("stored solutions always map back to their own cell") {
        Rng rng(51);
        MapGrid map(spec);
        for (int s = 0; s < 10000; ++s) {
            double f = 380 + 50 * uniform_real(rng);
            double g = 750 + 300 * uniform_real(rng);
            map.try_insert(synthetic(f, g, uniform_real(rng) * 100));
        }
        for (const auto& [idx, sol] : map.occupied()) {
            auto back = cell_index(spec, sol->f, sol->g);
            REQUIRE(back);
            CHECK(back->i == idx.i);
            CHECK(back->j == idx.j);
        }
    }
}

TEST_CASE("try_insert outcomes") {
    MapGrid map(demo_spec());
    SUBCASE("outside the thresholds: discarded, map unchanged") {
        CHECK(map.try_insert(synthetic(300, 900, 5)) == MapGrid::InsertOutcome::Discarded);
        CHECK(map.occupied_count() == 0);
    }
    SUBCASE("fill, reject ties, replace better") {
        Solution s = synthetic(401, 900, 10);
        CHECK(map.try_insert(s) == MapGrid::InsertOutcome::Filled);
        CHECK(map.try_insert(s) == MapGrid::InsertOutcome::Rejected);  // tie keeps incumbent
        CHECK(map.try_insert(synthetic(401, 900, 11)) == MapGrid::InsertOutcome::Replaced);
        CHECK(map.try_insert(synthetic(401, 900, 10.5)) == MapGrid::InsertOutcome::Rejected);
        CHECK(map.occupied_count() == 1);
        CHECK(map.best()->z == 11);
        CHECK(map.counters().offered == 4);
    }
}

TEST_CASE("per-cell z never decreases and replay rebuilds the same map") {
    GridSpec spec = demo_spec();
    Rng rng(52);
    MapGrid map(spec);
    std::vector<Solution> log;
    std::vector<double> best_z(static_cast<std::size_t>(spec.delta1) * spec.delta2,
                               -std::numeric_limits<double>::infinity());
    for (int s = 0; s < 20000; ++s) {
        Solution sol = synthetic(380 + 50 * uniform_real(rng), 750 + 300 * uniform_real(rng),
                                 uniform_real(rng) * 100);
        log.push_back(sol);
        map.try_insert(sol);
        auto idx = cell_index(spec, sol.f, sol.g);
        if (idx) {
            auto& cur = best_z[static_cast<std::size_t>(idx->i - 1) * spec.delta2 + (idx->j - 1)];
            cur = std::max(cur, sol.z);
            REQUIRE(map.cell(idx->i, idx->j));
            REQUIRE(map.cell(idx->i, idx->j)->z == cur);
        }
    }
    MapGrid replayed(spec);
    for (const Solution& sol : log) replayed.try_insert(sol);
    REQUIRE(replayed.occupied_count() == map.occupied_count());
    for (int i = 1; i <= spec.delta1; ++i)
        for (int j = 1; j <= spec.delta2; ++j) {
            const auto& a = map.cell(i, j);
            const auto& b = replayed.cell(i, j);
            REQUIRE(a.has_value() == b.has_value());
            if (a) {
                CHECK(a->f == b->f);
                CHECK(a->g == b->g);
                CHECK(a->z == b->z);
            }
        }
}

TEST_CASE("relaxed thresholds derive from the population extremes") {
    SUBCASE("direct formula") {
        std::vector<Solution> p0{synthetic(420, 800, 0)};  // f = 1.05 f*, g = 0.8 g*
        GridSpec spec = relaxed_thresholds(p0, 400, 1000, 20, 20, 0.01);
        CHECK(spec.alpha1 == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(spec.alpha2 == doctest::Approx(0.20).epsilon(1e-12));
        CHECK(spec.f_star == 400);  // anchors stay put
        CHECK(spec.g_star == 1000);
    }
    SUBCASE("boundaries equal the extremes") {
        std::vector<Solution> p0{synthetic(431.25, 912.5, 0), synthetic(404, 987, 1),
                                 synthetic(428, 930, 2)};
        GridSpec spec = relaxed_thresholds(p0, 400, 1000, 20, 20, 0.01);
        CHECK(spec.f_hi() == doctest::Approx(431.25).epsilon(1e-12));
        CHECK(spec.g_lo() == doctest::Approx(912.5).epsilon(1e-12));
    }
    SUBCASE("degenerate spans widen to epsilon") {
        std::vector<Solution> p0{synthetic(400, 1000, 0)};  // both at the optima
        GridSpec spec = relaxed_thresholds(p0, 400, 1000, 20, 20, 0.01);
        CHECK(spec.alpha1 == 0.01);
        CHECK(spec.alpha2 == 0.01);
    }
    SUBCASE("empty population throws") {
        CHECK_THROWS_AS(relaxed_thresholds({}, 400, 1000, 20, 20, 0.01), EmptyPopulation);
    }
}

TEST_CASE("grid spec validation") {
    GridSpec spec = demo_spec();
    spec.alpha1 = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = demo_spec();
    spec.g_star = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = demo_spec();
    spec.delta2 = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("snapshots round-trip and revalidate") {
    Instance inst = testing::triangle_instance();
    GridSpec spec;
    spec.f_star = 30.0;
    spec.g_star = 100.0;
    spec.alpha1 = 0.5;
    spec.alpha2 = 0.99;
    spec.delta1 = 4;
    spec.delta2 = 4;
    MapGrid map(spec);

    map.try_insert(make_solution(inst, Tour::identity(3), PackingList(1)));
    PackingList picked(1);
    picked.set(inst, 0, true);
    map.try_insert(make_solution(inst, Tour::identity(3), picked));
    REQUIRE(map.occupied_count() >= 1);

    nlohmann::json j = map_to_json(map);
    MapGrid back = map_from_json(j, inst);
    CHECK(back.spec() == map.spec());
    CHECK(back.occupied_count() == map.occupied_count());
    for (const auto& [idx, sol] : map.occupied()) {
        const auto& other = back.cell(idx.i, idx.j);
        REQUIRE(other);
        CHECK(other->z == sol->z);
        CHECK(other->tour == sol->tour);
        CHECK(other->packing == sol->packing);
    }

    std::string csv = map_to_csv(map);
    CHECK(csv.rfind("i,j,f,g,z\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + map.occupied_count());
}
