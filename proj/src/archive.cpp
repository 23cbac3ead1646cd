#include "ttpqd/archive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ttpqd/util.hpp"

namespace ttpqd {

void GridSpec::validate() const {
    if (!(f_star > 0.0) || !(g_star > 0.0))
        throw std::invalid_argument("grid requires positive f* and g*");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw std::invalid_argument("grid requires positive alpha spans");
    if (delta1 < 1 || delta2 < 1) throw std::invalid_argument("grid needs at least one cell");
}

std::optional<CellIndex> cell_index(const GridSpec& spec, double f, double g) {
    if (f < spec.f_lo() || f > spec.f_hi()) return std::nullopt;
    if (g < spec.g_lo() || g > spec.g_hi()) return std::nullopt;
    int i = 1 + static_cast<int>(std::floor((f - spec.f_star) * spec.delta1 /
                                            (spec.alpha1 * spec.f_star)));
    int j = 1 + static_cast<int>(std::floor((g - spec.g_lo()) * spec.delta2 /
                                            (spec.alpha2 * spec.g_star)));
    i = std::clamp(i, 1, spec.delta1);  // exact upper boundaries land here
    j = std::clamp(j, 1, spec.delta2);
    return CellIndex{i, j};
}

MapGrid::MapGrid(GridSpec spec) : spec_(spec) {
    spec_.validate();
    cells_.resize(static_cast<std::size_t>(spec_.delta1) * spec_.delta2);
}

MapGrid::InsertOutcome MapGrid::try_insert(const Solution& s) {
    ++counters_.offered;
    auto idx = cell_index(spec_, s.f, s.g);
    if (!idx) {
        ++counters_.discarded;
        return InsertOutcome::Discarded;
    }
    auto& slot = cells_[static_cast<std::size_t>(idx->i - 1) * spec_.delta2 + (idx->j - 1)];
    if (!slot) {
        slot = s;
        ++occupied_;
        ++counters_.filled;
        return InsertOutcome::Filled;
    }
    if (s.z > slot->z) {
        slot = s;
        ++counters_.replaced;
        return InsertOutcome::Replaced;
    }
    ++counters_.rejected;
    return InsertOutcome::Rejected;
}

const Solution* MapGrid::best() const {
    const Solution* best = nullptr;
    for (const auto& slot : cells_)
        if (slot && (!best || slot->z > best->z)) best = &*slot;
    return best;
}

std::vector<std::pair<CellIndex, const Solution*>> MapGrid::occupied() const {
    std::vector<std::pair<CellIndex, const Solution*>> out;
    out.reserve(occupied_);
    for (int i = 1; i <= spec_.delta1; ++i)
        for (int j = 1; j <= spec_.delta2; ++j) {
            const auto& slot = cell(i, j);
            if (slot) out.emplace_back(CellIndex{i, j}, &*slot);
        }
    return out;
}

const char* to_string(MapGrid::InsertOutcome o) {
    switch (o) {
        case MapGrid::InsertOutcome::Discarded: return "discarded";
        case MapGrid::InsertOutcome::Filled: return "filled";
        case MapGrid::InsertOutcome::Replaced: return "replaced";
        case MapGrid::InsertOutcome::Rejected: return "rejected";
    }
    return "?";
}

GridSpec relaxed_thresholds(const std::vector<Solution>& p0, double f_star, double g_star,
                            int delta1, int delta2, double epsilon) {
    if (p0.empty()) throw EmptyPopulation("relaxed thresholds need a non-empty population");
    double max_f = p0[0].f, min_g = p0[0].g;
    for (const Solution& s : p0) {
        max_f = std::max(max_f, s.f);
        min_g = std::min(min_g, s.g);
    }
    GridSpec spec;
    spec.f_star = f_star;
    spec.g_star = g_star;
    spec.delta1 = delta1;
    spec.delta2 = delta2;
    spec.alpha1 = (max_f - f_star) / f_star;
    spec.alpha2 = (g_star - min_g) / g_star;
    if (!(spec.alpha1 > 0.0)) spec.alpha1 = epsilon;
    if (!(spec.alpha2 > 0.0)) spec.alpha2 = epsilon;
    spec.validate();
    return spec;
}

nlohmann::json grid_spec_to_json(const GridSpec& spec) {
    return {{"f_star", spec.f_star}, {"g_star", spec.g_star}, {"alpha1", spec.alpha1},
            {"alpha2", spec.alpha2}, {"delta1", spec.delta1}, {"delta2", spec.delta2}};
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
    GridSpec spec;
    spec.f_star = j.at("f_star").get<double>();
    spec.g_star = j.at("g_star").get<double>();
    spec.alpha1 = j.at("alpha1").get<double>();
    spec.alpha2 = j.at("alpha2").get<double>();
    spec.delta1 = j.at("delta1").get<int>();
    spec.delta2 = j.at("delta2").get<int>();
    return spec;
}

nlohmann::json map_to_json(const MapGrid& map) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [idx, sol] : map.occupied()) {
        nlohmann::json tour = nlohmann::json::array();
        for (int p = 0; p < sol->tour.n(); ++p) tour.push_back(sol->tour.at(p));
        nlohmann::json picks = nlohmann::json::array();
        for (int j : sol->packing.picked_indices()) picks.push_back(j + 1);
        cells.push_back({{"i", idx.i},
                         {"j", idx.j},
                         {"f", sol->f},
                         {"g", sol->g},
                         {"z", sol->z},
                         {"tour", std::move(tour)},
                         {"picks", std::move(picks)}});
    }
    return {{"spec", grid_spec_to_json(map.spec())}, {"cells", std::move(cells)}};
}

MapGrid map_from_json(const nlohmann::json& j, const Instance& inst) {
    MapGrid map(grid_spec_from_json(j.at("spec")));
    for (const auto& cell : j.at("cells")) {
        std::vector<int> order;
        for (const auto& c : cell.at("tour")) order.push_back(c.get<int>());
        PackingList packing(inst.num_items());
        for (const auto& p : cell.at("picks")) packing.set(inst, p.get<int>() - 1, true);
        Solution s = make_solution(inst, Tour(std::move(order)), std::move(packing));
        auto outcome = map.try_insert(s);
        if (outcome != MapGrid::InsertOutcome::Filled)
            throw std::runtime_error("map snapshot has conflicting or out-of-grid cells");
        auto idx = cell_index(map.spec(), s.f, s.g);
        if (!idx || idx->i != cell.at("i").get<int>() || idx->j != cell.at("j").get<int>())
            throw std::runtime_error("map snapshot cell does not match its descriptor");
    }
    return map;
}

std::string map_to_csv(const MapGrid& map) {
    std::ostringstream out;
    out << "i,j,f,g,z\n";
    for (const auto& [idx, sol] : map.occupied())
        out << idx.i << ',' << idx.j << ',' << fmt_double(sol->f) << ',' << fmt_double(sol->g)
            << ',' << fmt_double(sol->z) << '\n';
    return out.str();
}

}  // namespace ttpqd
