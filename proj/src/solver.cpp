#include "ttpqd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>

#include "ttpqd/kp_ops.hpp"
#include "ttpqd/tsp_ops.hpp"
#include "ttpqd/util.hpp"

namespace ttpqd {

const char* to_string(TspOperator op) { return op == TspOperator::Eax ? "eax" : "2opt"; }
const char* to_string(KpOperator op) { return op == KpOperator::Dp ? "dp" : "ea"; }
const char* to_string(GridMode m) { return m == GridMode::Prefixed ? "prefixed" : "relaxed"; }
const char* to_string(Algo a) { return a == Algo::Bmbea ? "bmbea" : "mu+1"; }

void SolverConfig::validate() const {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (init_pop_size < 2) throw std::invalid_argument("init_pop_size must be >= 2");
    if (!(wallclock_limit_s > 0)) throw std::invalid_argument("time limit must be positive");
    if (delta1 < 1 || delta2 < 1) throw std::invalid_argument("grid needs at least one cell");
    if (!(alpha1 > 0) || !(alpha2 > 0)) throw std::invalid_argument("alpha spans must be positive");
    if (ea_packer_iters < 0) throw std::invalid_argument("ea_packer_iters must be >= 0");
}

namespace {

PackingList pack_tour(const Instance& inst, const Tour& t, const SolverConfig& cfg,
                      const PackingList& ea_seed, Rng& rng) {
    if (inst.num_items() == 0) return PackingList(0);
    if (cfg.kp_op == KpOperator::Dp) return pwt_dp(inst, t).packing;
    return ea_packer(inst, t, ea_seed, cfg.ea_packer_iters, rng);
}

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

InitPopulation initialize_population(const Instance& inst, const SolverConfig& cfg, Rng& rng) {
    cfg.validate();
    InitPopulation out;

    std::vector<Tour> tours;
    bool reached = true;
    if (cfg.tours_file) {
        tours = load_tours_file(*cfg.tours_file, inst.n);
        if (tours.empty()) throw std::runtime_error("tours file holds no tours");
    } else {
        InitTours evolved = evolve_initial_tours(inst, cfg.f_star, cfg.init_generation_budget,
                                                 cfg.init_pop_size, rng);
        tours = std::move(evolved.tours);
        reached = evolved.status == InitStatus::ReachedTarget;
    }
    out.reached_tsp_target = reached;

    double best_len = tour_length(inst, tours.front());
    for (const Tour& t : tours) best_len = std::min(best_len, tour_length(inst, t));
    out.f_star = cfg.f_star ? *cfg.f_star : best_len;

    PackerResult kp = kp_optimal(inst);
    out.g_star = kp.value;
    PackingList ea_seed = repair_packing(inst, kp.packing, rng);

    out.solutions.reserve(tours.size());
    for (Tour& t : tours) {
        PackingList packing = pack_tour(inst, t, cfg, ea_seed, rng);
        out.solutions.push_back(make_solution(inst, std::move(t), std::move(packing)));
    }
    return out;
}

int RunResult::descriptor_count() const {
    if (map) return map->occupied_count();
    std::set<std::pair<double, double>> distinct;
    for (const Solution& s : population) distinct.insert({s.f, s.g});
    return static_cast<int>(distinct.size());
}

namespace {

GridSpec make_grid_spec(const SolverConfig& cfg, const InitPopulation& init) {
    if (cfg.grid_mode == GridMode::Relaxed)
        return relaxed_thresholds(init.solutions, init.f_star, init.g_star, cfg.delta1,
                                  cfg.delta2, cfg.relaxed_epsilon);
    GridSpec spec;
    spec.f_star = init.f_star;
    spec.g_star = init.g_star;
    spec.alpha1 = cfg.alpha1;
    spec.alpha2 = cfg.alpha2;
    spec.delta1 = cfg.delta1;
    spec.delta2 = cfg.delta2;
    spec.validate();
    return spec;
}

void record_event(RunResult& result, long long iter, MapGrid::InsertOutcome outcome,
                  const GridSpec& spec, const Solution& s) {
    if (outcome != MapGrid::InsertOutcome::Filled &&
        outcome != MapGrid::InsertOutcome::Replaced)
        return;
    auto idx = cell_index(spec, s.f, s.g);
    result.events.push_back({iter, outcome, idx->i, idx->j, s.f, s.g, s.z});
}

}  // namespace

RunResult bmbea_run(const Instance& inst, const SolverConfig& cfg, Rng& rng) {
    Clock clock;
    InitPopulation init = initialize_population(inst, cfg, rng);

    RunResult result;
    result.algo = Algo::Bmbea;
    result.f_star = init.f_star;
    result.g_star = init.g_star;
    result.reached_tsp_target = init.reached_tsp_target;

    GridSpec spec = make_grid_spec(cfg, init);
    MapGrid map(spec);
    for (const Solution& s : init.solutions) {
        auto outcome = map.try_insert(s);
        record_event(result, 0, outcome, spec, s);
    }
    if (map.occupied_count() == 0)
        throw GridUnreachable("no initial solution lands inside the grid");

    double best_z = map.best()->z;
    result.best_trace.push_back(best_z);

    for (long long iter = 1; iter <= cfg.iterations; ++iter) {
        if (clock.seconds() > cfg.wallclock_limit_s) break;
        auto occupied = map.occupied();

        // Parent A also donates the packing list that seeds the (1+1) EA.
        std::size_t parent_a = uniform_index(rng, occupied.size());
        Tour child = [&] {
            if (cfg.tsp_op == TspOperator::Eax) {
                std::size_t parent_b = parent_a;
                if (occupied.size() > 1) {
                    parent_b = uniform_index(rng, occupied.size() - 1);
                    if (parent_b >= parent_a) ++parent_b;
                } else {
                    ++result.forced_same_parent;
                }
                return eax_1ab(inst, occupied[parent_a].second->tour,
                               occupied[parent_b].second->tour, rng);
            }
            return two_opt_move(occupied[parent_a].second->tour, rng);
        }();

        PackingList packing =
            pack_tour(inst, child, cfg, occupied[parent_a].second->packing, rng);
        Solution offspring = make_solution(inst, std::move(child), std::move(packing));

        auto outcome = map.try_insert(offspring);
        record_event(result, iter, outcome, spec, offspring);
        best_z = std::max(best_z, offspring.z);
        result.best_trace.push_back(best_z);
        result.iterations_done = iter;
    }

    result.best = *map.best();
    result.counters = map.counters();
    result.map.emplace(std::move(map));
    result.elapsed_s = clock.seconds();
    return result;
}

RunResult mu_plus_one_run(const Instance& inst, const SolverConfig& cfg, Rng& rng) {
    Clock clock;
    InitPopulation init = initialize_population(inst, cfg, rng);
    if (init.solutions.size() < 2)
        throw std::runtime_error("(mu+1) needs an initial population of at least 2");

    RunResult result;
    result.algo = Algo::MuPlusOne;
    result.f_star = init.f_star;
    result.g_star = init.g_star;
    result.reached_tsp_target = init.reached_tsp_target;

    [[maybe_unused]] const std::size_t mu = init.solutions.size();
    std::vector<Solution> pop = std::move(init.solutions);
    std::vector<long long> born(pop.size(), 0);

    auto best_of = [&] {
        std::size_t b = 0;
        for (std::size_t k = 1; k < pop.size(); ++k)
            if (pop[k].z > pop[b].z) b = k;
        return b;
    };
    auto worst_z = [&] {
        double w = pop[0].z;
        for (const Solution& s : pop) w = std::min(w, s.z);
        return w;
    };
    double best_z = pop[best_of()].z;
    result.best_trace.push_back(best_z);
    result.worst_trace.push_back(worst_z());

    for (long long iter = 1; iter <= cfg.iterations; ++iter) {
        if (clock.seconds() > cfg.wallclock_limit_s) break;

        std::size_t parent_a = uniform_index(rng, pop.size());
        Tour child = [&] {
            if (cfg.tsp_op == TspOperator::Eax) {
                std::size_t parent_b = uniform_index(rng, pop.size() - 1);
                if (parent_b >= parent_a) ++parent_b;
                return eax_1ab(inst, pop[parent_a].tour, pop[parent_b].tour, rng);
            }
            return two_opt_move(pop[parent_a].tour, rng);
        }();

        PackingList packing = pack_tour(inst, child, cfg, pop[parent_a].packing, rng);
        pop.push_back(make_solution(inst, std::move(child), std::move(packing)));
        born.push_back(iter);

        // Drop the worst z; ties evict the oldest.
        std::size_t worst = 0;
        for (std::size_t k = 1; k < pop.size(); ++k) {
            if (pop[k].z < pop[worst].z ||
                (pop[k].z == pop[worst].z && born[k] < born[worst]))
                worst = k;
        }
        pop.erase(pop.begin() + worst);
        born.erase(born.begin() + worst);
        assert(pop.size() == mu);

        best_z = std::max(best_z, pop[best_of()].z);
        result.best_trace.push_back(best_z);
        result.worst_trace.push_back(worst_z());
        result.iterations_done = iter;
    }

    result.best = pop[best_of()];
    result.population = std::move(pop);
    result.elapsed_s = clock.seconds();
    return result;
}

void write_run_log(std::ostream& out, const RunResult& result) {
    for (const RunEvent& e : result.events) {
        out << "{\"iter\":" << e.iter << ",\"outcome\":\"" << to_string(e.outcome)
            << "\",\"i\":" << e.i << ",\"j\":" << e.j << ",\"f\":" << fmt_double(e.f)
            << ",\"g\":" << fmt_double(e.g) << ",\"z\":" << fmt_double(e.z) << "}\n";
    }
}

}  // namespace ttpqd
