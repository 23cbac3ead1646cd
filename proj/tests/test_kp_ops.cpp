#include "doctest.h"

#include <cmath>

#include "ttpqd/kp_ops.hpp"
#include "ttpqd/oracle.hpp"
#include "support/fixtures.hpp"

using namespace ttpqd;

TEST_CASE("kp_optimal basics") {
    SUBCASE("no items") {
        Instance inst = testing::minimal_instance();
        auto res = kp_optimal(inst);
        CHECK(res.value == 0.0);
        CHECK(res.packing.picked_count() == 0);
    }
    SUBCASE("classic three-item case") {
        Instance inst = testing::triangle_instance();
        inst.items = {{60.0, 10, 2}, {100.0, 20, 3}, {120.0, 30, 2}};
        inst.capacity = 50;
        inst.finalize();
        auto res = kp_optimal(inst);
        CHECK(res.value == 220.0);  // matches enumerating all 8 subsets
        CHECK_FALSE(res.packing.picked(0));
        CHECK(res.packing.picked(1));
        CHECK(res.packing.picked(2));
    }
}

TEST_CASE("kp_optimal equals exhaustive search on 200 random cases") {
    Rng rng(21);
    oracle::RandomInstanceParams params;
    params.max_m = 20;
    params.max_capacity = 120;
    for (int c = 0; c < 200; ++c) {
        Instance inst = oracle::random_instance(rng, params);
        auto res = kp_optimal(inst);
        CHECK(res.value == oracle::brute_force_kp(inst));
        CHECK(is_feasible(inst, res.packing));
        CHECK(kp_value(inst, res.packing) == res.value);
    }
}

TEST_CASE("pwt_dp basics") {
    SUBCASE("no items means riding fast and paying rent") {
        Instance inst = testing::minimal_instance();
        Tour t = Tour::identity(2);
        auto res = pwt_dp(inst, t);
        double expect = -inst.renting_ratio * tour_length(inst, t) / inst.max_speed;
        CHECK(res.value == doctest::Approx(expect).epsilon(1e-12));
        CHECK(res.packing.picked_count() == 0);
    }
    SUBCASE("triangle: leaving the heavy item is optimal") {
        Instance inst = testing::triangle_instance();
        auto res = pwt_dp(inst, Tour::identity(3));
        CHECK(res.value == doctest::Approx(-30.0).epsilon(1e-12));
        CHECK(res.packing.picked_count() == 0);
    }
}

TEST_CASE("pwt_dp equals the brute-force maximum on random cases") {
    Rng rng(22);
    for (int c = 0; c < 200; ++c) {
        Instance inst = oracle::random_instance(rng);
        Tour t = oracle::random_tour(inst.n, rng);
        auto brute = oracle::brute_force_pwt(inst, t);
        auto dp = pwt_dp(inst, t);
        REQUIRE(std::abs(dp.value - brute.best_z) <= 1e-9);
        // the reported packing really evaluates to the reported value
        CHECK(ttp_objective(inst, t, dp.packing) == doctest::Approx(dp.value).epsilon(1e-12));
    }
}

TEST_CASE("pwt_dp dominates sampled feasible packings") {
    Rng rng(23);
    for (int c = 0; c < 20; ++c) {
        Instance inst = oracle::random_instance(rng);
        Tour t = oracle::random_tour(inst.n, rng);
        double z_star = pwt_dp(inst, t).value;
        for (int s = 0; s < 1000; ++s) {
            PackingList y(inst.num_items());
            for (int j = 0; j < inst.num_items(); ++j)
                if (uniform_real(rng) < 0.4) y.set(inst, j, true);
            y = repair_packing(inst, std::move(y), rng);
            CHECK(ttp_objective(inst, t, y) <= z_star + 1e-9);
        }
    }
}

TEST_CASE("repair_packing") {
    SUBCASE("feasible input is untouched") {
        Instance inst = testing::triangle_instance();
        PackingList y(1);
        y.set(inst, 0, true);
        Rng rng(24);
        PackingList out = repair_packing(inst, y, rng);
        CHECK(out == y);
    }
    SUBCASE("two full-capacity items: one survives, either with equal chance") {
        Instance inst = testing::triangle_instance();
        inst.items = {{10.0, 10, 2}, {20.0, 10, 3}};
        inst.finalize();
        Rng rng(25);
        int first_survives = 0;
        const int trials = 10000;
        for (int s = 0; s < trials; ++s) {
            PackingList y(2);
            y.set(inst, 0, true);
            y.set(inst, 1, true);
            PackingList out = repair_packing(inst, std::move(y), rng);
            REQUIRE(out.picked_count() == 1);
            if (out.picked(0)) ++first_survives;
        }
        double freq = static_cast<double>(first_survives) / trials;
        CHECK(freq == doctest::Approx(0.5).epsilon(0.1));  // 0.5 +- 0.05
    }
    SUBCASE("all-picked inputs come back feasible subsets") {
        Rng rng(26);
        for (int c = 0; c < 200; ++c) {
            Instance inst = oracle::random_instance(rng);
            PackingList y(inst.num_items());
            for (int j = 0; j < inst.num_items(); ++j) y.set(inst, j, true);
            PackingList before = y;
            PackingList out = repair_packing(inst, std::move(y), rng);
            CHECK(is_feasible(inst, out));
            CHECK(out.total_weight() <= before.total_weight());
            for (int j = 0; j < inst.num_items(); ++j)
                if (out.picked(j)) CHECK(before.picked(j));  // subset of the input
        }
    }
}

TEST_CASE("ea_packer") {
    SUBCASE("zero iterations returns the seed") {
        Instance inst = testing::triangle_instance();
        PackingList seed(1);
        Rng rng(27);
        CHECK(ea_packer(inst, Tour::identity(3), seed, 0, rng) == seed);
    }
    SUBCASE("single improving item gets found") {
        Instance inst = testing::triangle_instance();
        inst.items = {{1000.0, 1, 2}};  // light and valuable: picking always helps
        inst.finalize();
        Tour t = Tour::identity(3);
        double z_empty = ttp_objective(inst, t, PackingList(1));
        PackingList best(1);
        best.set(inst, 0, true);
        double z_best = ttp_objective(inst, t, best);
        REQUIRE(z_best > z_empty);

        Rng rng(28);
        int optimal = 0;
        for (int s = 0; s < 100; ++s) {
            PackingList out = ea_packer(inst, t, PackingList(1), 50, rng);
            double z = ttp_objective(inst, t, out);
            CHECK(z >= z_empty);
            if (z == z_best) ++optimal;
        }
        CHECK(optimal >= 90);
    }
    SUBCASE("reaches within 1% of the DP optimum on random cases") {
        Rng rng(29);
        oracle::RandomInstanceParams params;
        params.min_m = 1;
        params.max_m = 12;
        int close = 0;
        const int cases = 100;
        for (int c = 0; c < cases; ++c) {
            Instance inst = oracle::random_instance(rng, params);
            Tour t = oracle::random_tour(inst.n, rng);
            double z_star = pwt_dp(inst, t).value;
            PackingList seed = repair_packing(inst, kp_optimal(inst).packing, rng);
            PackingList out = ea_packer(inst, t, seed, 5000, rng);
            double z = ttp_objective(inst, t, out);
            CHECK(z <= z_star + 1e-9);
            if (std::abs(z_star - z) <= 0.01 * std::max(1.0, std::abs(z_star))) ++close;
        }
        CHECK(close >= 95);
    }
    SUBCASE("never returns worse than the seed") {
        Rng rng(30);
        for (int c = 0; c < 50; ++c) {
            Instance inst = oracle::random_instance(rng);
            if (inst.num_items() == 0) continue;
            Tour t = oracle::random_tour(inst.n, rng);
            PackingList seed = repair_packing(inst, kp_optimal(inst).packing, rng);
            double z_seed = ttp_objective(inst, t, seed);
            PackingList out = ea_packer(inst, t, seed, 200, rng);
            CHECK(ttp_objective(inst, t, out) >= z_seed);
        }
    }
}
