#include "ttpqd/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ttpqd/util.hpp"

namespace ttpqd {

Tour::Tour(std::vector<int> order) : order_(std::move(order)) {
    const int n = static_cast<int>(order_.size());
    if (n < 1) throw std::invalid_argument("empty tour");
    std::vector<std::uint8_t> seen(n + 1, 0);
    int pos1 = -1;
    for (int i = 0; i < n; ++i) {
        int c = order_[i];
        if (c < 1 || c > n || seen[c]) throw std::invalid_argument("tour is not a permutation");
        seen[c] = 1;
        if (c == 1) pos1 = i;
    }
    if (pos1 > 0) std::rotate(order_.begin(), order_.begin() + pos1, order_.end());
}

Tour Tour::identity(int n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    return Tour(std::move(order));
}

std::vector<int> PackingList::picked_indices() const {
    std::vector<int> out;
    out.reserve(picked_count_);
    for (int j = 0; j < size(); ++j)
        if (picks_[j]) out.push_back(j);
    return out;
}

double tour_length(const Instance& inst, const Tour& t) {
    const int n = t.n();
    double len = 0.0;
    for (int i = 0; i < n; ++i) len += inst.distance(t.at(i), t.at((i + 1) % n));
    return len;
}

double kp_value(const Instance& inst, const PackingList& y) {
    (void)inst;
#ifndef NDEBUG
    double fresh = 0.0;
    for (int j = 0; j < y.size(); ++j)
        if (y.picked(j)) fresh += inst.items[j].profit;
    assert(std::abs(fresh - y.total_profit()) <= 1e-9 * std::max(1.0, std::abs(fresh)));
#endif
    return y.total_profit();
}

bool is_feasible(const Instance& inst, const PackingList& y) {
    return y.total_weight() <= inst.capacity;
}

double ttp_objective(const Instance& inst, const Tour& t, const PackingList& y) {
    if (!is_feasible(inst, y))
        throw InfeasiblePacking("packing weight " + std::to_string(y.total_weight()) +
                                " exceeds capacity " + std::to_string(inst.capacity));
    const int n = t.n();
    std::vector<std::int64_t> city_weight(n + 1, 0);
    for (int j = 0; j < y.size(); ++j)
        if (y.picked(j)) city_weight[inst.items[j].city] += inst.items[j].weight;

    const double nu = inst.nu();
    double time = 0.0;
    std::int64_t cum = 0;
    for (int i = 0; i < n; ++i) {
        const int u = t.at(i);
        cum += city_weight[u];
        time += inst.distance(u, t.at((i + 1) % n)) / (inst.max_speed - nu * cum);
    }
    return kp_value(inst, y) - inst.renting_ratio * time;
}

Solution make_solution(const Instance& inst, Tour t, PackingList y) {
    Solution s{std::move(t), std::move(y)};
    s.f = tour_length(inst, s.tour);
    s.g = kp_value(inst, s.packing);
    s.z = ttp_objective(inst, s.tour, s.packing);
    return s;
}

std::string write_solution_text(const Solution& s) {
    std::ostringstream out;
    for (int i = 0; i < s.tour.n(); ++i) {
        if (i) out << ',';
        out << s.tour.at(i);
    }
    out << '\n';
    bool first = true;
    for (int j : s.packing.picked_indices()) {
        if (!first) out << ',';
        out << (j + 1);
        first = false;
    }
    out << '\n';
    return out.str();
}

Solution parse_solution_text(const Instance& inst, const std::string& text) {
    std::istringstream in(text);
    std::string tour_line, picks_line;
    if (!std::getline(in, tour_line)) throw std::runtime_error("solution text: missing tour line");
    std::getline(in, picks_line);

    std::vector<int> order;
    for (auto tok : split(trim(tour_line), ',')) {
        auto tv = trim(tok);
        if (tv.empty()) continue;
        order.push_back(std::stoi(std::string(tv)));
    }
    PackingList packing(inst.num_items());
    for (auto tok : split(trim(picks_line), ',')) {
        auto tv = trim(tok);
        if (tv.empty()) continue;
        int idx = std::stoi(std::string(tv));
        if (idx < 1 || idx > inst.num_items())
            throw std::runtime_error("solution text: item index out of range");
        packing.set(inst, idx - 1, true);
    }
    return make_solution(inst, Tour(std::move(order)), std::move(packing));
}

}  // namespace ttpqd
