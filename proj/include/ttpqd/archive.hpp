#pragma once

#include <optional>

#include "ttpqd/core.hpp"

#include "json.hpp"

namespace ttpqd {

struct EmptyPopulation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Geometry of the behaviour-space grid: delta1 x delta2 cells spanning
/// tour lengths [f*, (1+alpha1) f*] and profits [(1-alpha2) g*, g*].
struct GridSpec {
    double f_star = 0.0;
    double g_star = 0.0;
    double alpha1 = 0.05;
    double alpha2 = 0.20;
    int delta1 = 20;
    int delta2 = 20;

    void validate() const;
    double f_lo() const { return f_star; }
    double f_hi() const { return (1.0 + alpha1) * f_star; }
    double g_lo() const { return (1.0 - alpha2) * g_star; }
    double g_hi() const { return g_star; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CellIndex {
    int i = 0;  // 1..delta1, grows with f
    int j = 0;  // 1..delta2, grows with g; cell (1, delta2) sits next to both optima

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Maps a descriptor to its cell. Exact upper boundaries clamp into the
/// last cell on each axis; descriptors outside the closed ranges (including
/// better-than-reference scores) get no cell.
std::optional<CellIndex> cell_index(const GridSpec& spec, double f, double g);

/// Elitist archive: at most one solution per cell, each occupant carrying
/// the best z ever offered to that cell (ties keep the incumbent).
class MapGrid {
public:
    enum class InsertOutcome { Discarded, Filled, Replaced, Rejected };

    struct Counters {
        long long offered = 0;
        long long discarded = 0;
        long long filled = 0;
        long long replaced = 0;
        long long rejected = 0;
    };

    explicit MapGrid(GridSpec spec);

    InsertOutcome try_insert(const Solution& s);

    const GridSpec& spec() const { return spec_; }
    const Counters& counters() const { return counters_; }
    const std::optional<Solution>& cell(int i, int j) const {
        return cells_[static_cast<std::size_t>(i - 1) * spec_.delta2 + (j - 1)];
    }
    int occupied_count() const { return occupied_; }
    const Solution* best() const;

    std::vector<std::pair<CellIndex, const Solution*>> occupied() const;

private:
    GridSpec spec_;
    std::vector<std::optional<Solution>> cells_;
    Counters counters_;
    int occupied_ = 0;
};

const char* to_string(MapGrid::InsertOutcome o);

/// Derives the spans from the initial population extremes: the far f
/// boundary moves to max f(P0) and the low g boundary to min g(P0), while
/// f* and g* stay the anchors. Degenerate zero spans widen to epsilon.
GridSpec relaxed_thresholds(const std::vector<Solution>& p0, double f_star, double g_star,
                            int delta1, int delta2, double epsilon);

nlohmann::json grid_spec_to_json(const GridSpec& spec);
GridSpec grid_spec_from_json(const nlohmann::json& j);

/// Snapshot of the whole archive, including tours and packings, so a map
/// can be re-imported and revalidated.
nlohmann::json map_to_json(const MapGrid& map);
MapGrid map_from_json(const nlohmann::json& j, const Instance& inst);

/// Flat CSV: header i,j,f,g,z then one row per occupied cell.
std::string map_to_csv(const MapGrid& map);

}  // namespace ttpqd
