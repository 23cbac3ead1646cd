#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttpqd {

enum class EdgeWeightType { Ceil2D, Euc2D };

const char* to_string(EdgeWeightType t);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Item {
    double profit = 0.0;
    std::int64_t weight = 0;
    int city = 0;  // 2..n; city 1 holds no items
};

struct ParseError : std::runtime_error {
    enum class Kind {
        MalformedHeader,
        CountMismatch,
        InvalidItemCity,
        NonIntegerWeight,
        BadValue,
    };
    Kind kind;
    ParseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// A travelling-thief instance: cities on a plane, items scattered on cities
/// 2..n, a knapsack capacity, a speed range and a rent per time unit.
/// Immutable after finalize(); safe to share across threads.
class Instance {
public:
    std::string name;
    std::string knapsack_data_type;  // stored verbatim
    int n = 0;                       // number of cities
    std::int64_t capacity = 0;       // W
    double min_speed = 0.0;          // v_min
    double max_speed = 0.0;          // v_max
    double renting_ratio = 0.0;      // R (0 is legal)
    EdgeWeightType edge_weight_type = EdgeWeightType::Ceil2D;
    std::vector<Point> coords;  // size n, city i at coords[i-1]
    std::vector<Item> items;    // size m

    int num_items() const { return static_cast<int>(items.size()); }

    /// Weight-to-speed slope (v_max - v_min) / W; zero when W == 0.
    double nu() const {
        return capacity > 0 ? (max_speed - min_speed) / static_cast<double>(capacity) : 0.0;
    }

    /// Distance between cities u and v (1-based). Symmetric, zero on the
    /// diagonal; rounding per edge_weight_type (CEIL_2D: ceiling, EUC_2D:
    /// nearest integer).
    double distance(int u, int v) const {
        if (u < 1 || u > n || v < 1 || v > n)
            throw std::out_of_range("city index out of range");
        if (has_matrix_) return dist_[static_cast<std::size_t>(u - 1) * n + (v - 1)];
        return raw_distance(u, v);
    }

    /// Validates invariants and precomputes the distance matrix when
    /// n <= matrix_threshold. Must be called once after the fields are set;
    /// parse_instance does this for you.
    void finalize(int matrix_threshold = kDefaultMatrixThreshold);

    static constexpr int kDefaultMatrixThreshold = 3000;

private:
    double raw_distance(int u, int v) const;
    std::vector<double> dist_;
    bool has_matrix_ = false;
};

/// Parses the benchmark text layout: header key/value lines, then
/// NODE_COORD_SECTION and ITEMS SECTION. Header keys are matched
/// case-insensitively with flexible whitespace around ':'.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Writes an instance back out in the benchmark layout; re-parsing the
/// result yields a field-equal instance.
std::string serialize_instance(const Instance& inst);

bool field_equal(const Instance& a, const Instance& b);

}  // namespace ttpqd
