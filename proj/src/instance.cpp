#include "ttpqd/instance.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ttpqd/util.hpp"

namespace ttpqd {

const char* to_string(EdgeWeightType t) {
    return t == EdgeWeightType::Ceil2D ? "CEIL_2D" : "EUC_2D";
}

double Instance::raw_distance(int u, int v) const {
    const Point& a = coords[u - 1];
    const Point& b = coords[v - 1];
    double d = std::hypot(a.x - b.x, a.y - b.y);
    if (edge_weight_type == EdgeWeightType::Ceil2D) return std::ceil(d);
    return std::floor(d + 0.5);  // TSPLIB nearest-integer rounding
}

void Instance::finalize(int matrix_threshold) {
    if (n < 2) throw ParseError(ParseError::Kind::BadValue, "instance needs at least 2 cities");
    if (static_cast<int>(coords.size()) != n)
        throw ParseError(ParseError::Kind::CountMismatch, "coords size != DIMENSION");
    if (!(max_speed > min_speed) || !(min_speed > 0.0))
        throw ParseError(ParseError::Kind::BadValue, "speeds must satisfy v_max > v_min > 0");
    if (capacity < 0) throw ParseError(ParseError::Kind::BadValue, "negative capacity");
    if (!items.empty() && capacity == 0)
        throw ParseError(ParseError::Kind::BadValue, "W must be positive when items exist");
    for (const Item& it : items) {
        if (it.city < 2 || it.city > n)
            throw ParseError(ParseError::Kind::InvalidItemCity,
                             "item assigned to city " + std::to_string(it.city));
        if (it.weight < 0) throw ParseError(ParseError::Kind::BadValue, "negative item weight");
        if (it.profit < 0) throw ParseError(ParseError::Kind::BadValue, "negative item profit");
    }
    has_matrix_ = n <= matrix_threshold;
    if (has_matrix_) {
        dist_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int u = 1; u <= n; ++u)
            for (int v = u + 1; v <= n; ++v) {
                double d = raw_distance(u, v);
                dist_[static_cast<std::size_t>(u - 1) * n + (v - 1)] = d;
                dist_[static_cast<std::size_t>(v - 1) * n + (u - 1)] = d;
            }
    }
}

namespace {

double parse_number(std::string_view tok, const char* what) {
    std::string s(trim(tok));
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(ParseError::Kind::BadValue,
                         std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

std::int64_t parse_integer(std::string_view tok, const char* what, ParseError::Kind kind) {
    std::string s(trim(tok));
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(kind, std::string(what) + " is not an integer: '" + s + "'");
    return v;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace

Instance parse_instance(std::istream& in) {
    Instance inst;
    std::map<std::string, std::string> header;
    int declared_m = -1;

    enum class Section { Header, Coords, Items } section = Section::Header;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        std::string upper = to_upper(sv);

        if (upper.rfind("NODE_COORD_SECTION", 0) == 0) {
            section = Section::Coords;
            continue;
        }
        if (upper.rfind("ITEMS SECTION", 0) == 0) {
            section = Section::Items;
            continue;
        }
        if (upper.rfind("EOF", 0) == 0) break;

        switch (section) {
            case Section::Header: {
                std::size_t colon = sv.find(':');
                if (colon == std::string_view::npos)
                    throw ParseError(ParseError::Kind::MalformedHeader,
                                     "header line without ':': '" + std::string(sv) + "'");
                std::string key = to_upper(trim(sv.substr(0, colon)));
                std::string value(trim(sv.substr(colon + 1)));
                if (header.count(key))
                    throw ParseError(ParseError::Kind::MalformedHeader, "duplicate key " + key);
                header[key] = value;
                break;
            }
            case Section::Coords: {
                auto tok = tokens(sv);
                if (tok.size() != 3)
                    throw ParseError(ParseError::Kind::BadValue,
                                     "coordinate line needs 3 fields: '" + std::string(sv) + "'");
                Point p{parse_number(tok[1], "x"), parse_number(tok[2], "y")};
                inst.coords.push_back(p);
                break;
            }
            case Section::Items: {
                auto tok = tokens(sv);
                if (tok.size() != 4)
                    throw ParseError(ParseError::Kind::BadValue,
                                     "item line needs 4 fields: '" + std::string(sv) + "'");
                Item it;
                it.profit = parse_number(tok[1], "profit");
                it.weight =
                    parse_integer(tok[2], "item weight", ParseError::Kind::NonIntegerWeight);
                if (it.weight < 1)
                    throw ParseError(ParseError::Kind::BadValue, "item weight must be positive");
                it.city = static_cast<int>(
                    parse_integer(tok[3], "item city", ParseError::Kind::BadValue));
                inst.items.push_back(it);
                break;
            }
        }
    }

    auto require = [&](const char* key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end())
            throw ParseError(ParseError::Kind::MalformedHeader,
                             std::string("missing header key ") + key);
        return it->second;
    };

    inst.name = require("PROBLEM NAME");
    inst.knapsack_data_type = require("KNAPSACK DATA TYPE");
    inst.n = static_cast<int>(parse_integer(require("DIMENSION"), "DIMENSION",
                                            ParseError::Kind::BadValue));
    declared_m = static_cast<int>(parse_integer(require("NUMBER OF ITEMS"), "NUMBER OF ITEMS",
                                                ParseError::Kind::BadValue));
    inst.capacity = parse_integer(require("CAPACITY OF KNAPSACK"), "CAPACITY OF KNAPSACK",
                                  ParseError::Kind::BadValue);
    inst.min_speed = parse_number(require("MIN SPEED"), "MIN SPEED");
    inst.max_speed = parse_number(require("MAX SPEED"), "MAX SPEED");
    inst.renting_ratio = parse_number(require("RENTING RATIO"), "RENTING RATIO");

    std::string ewt = to_upper(trim(require("EDGE_WEIGHT_TYPE")));
    if (ewt == "CEIL_2D")
        inst.edge_weight_type = EdgeWeightType::Ceil2D;
    else if (ewt == "EUC_2D")
        inst.edge_weight_type = EdgeWeightType::Euc2D;
    else
        throw ParseError(ParseError::Kind::MalformedHeader,
                         "unsupported EDGE_WEIGHT_TYPE '" + ewt + "'");

    if (static_cast<int>(inst.coords.size()) != inst.n)
        throw ParseError(ParseError::Kind::CountMismatch,
                         "DIMENSION=" + std::to_string(inst.n) + " but " +
                             std::to_string(inst.coords.size()) + " coordinate lines");
    if (static_cast<int>(inst.items.size()) != declared_m)
        throw ParseError(ParseError::Kind::CountMismatch,
                         "NUMBER OF ITEMS=" + std::to_string(declared_m) + " but " +
                             std::to_string(inst.items.size()) + " item lines");

    inst.finalize();
    return inst;
}

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "PROBLEM NAME:\t" << inst.name << "\n";
    out << "KNAPSACK DATA TYPE:\t" << inst.knapsack_data_type << "\n";
    out << "DIMENSION:\t" << inst.n << "\n";
    out << "NUMBER OF ITEMS:\t" << inst.num_items() << "\n";
    out << "CAPACITY OF KNAPSACK:\t" << inst.capacity << "\n";
    out << "MIN SPEED:\t" << fmt_double(inst.min_speed) << "\n";
    out << "MAX SPEED:\t" << fmt_double(inst.max_speed) << "\n";
    out << "RENTING RATIO:\t" << fmt_double(inst.renting_ratio) << "\n";
    out << "EDGE_WEIGHT_TYPE:\t" << to_string(inst.edge_weight_type) << "\n";
    out << "NODE_COORD_SECTION\t(INDEX, X, Y):\n";
    for (int i = 1; i <= inst.n; ++i)
        out << i << "\t" << fmt_double(inst.coords[i - 1].x) << "\t"
            << fmt_double(inst.coords[i - 1].y) << "\n";
    out << "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):\n";
    for (int j = 0; j < inst.num_items(); ++j) {
        const Item& it = inst.items[j];
        out << (j + 1) << "\t" << fmt_double(it.profit) << "\t" << it.weight << "\t" << it.city
            << "\n";
    }
    return out.str();
}

bool field_equal(const Instance& a, const Instance& b) {
    if (a.name != b.name || a.knapsack_data_type != b.knapsack_data_type || a.n != b.n ||
        a.capacity != b.capacity || a.min_speed != b.min_speed || a.max_speed != b.max_speed ||
        a.renting_ratio != b.renting_ratio || a.edge_weight_type != b.edge_weight_type)
        return false;
    if (a.coords.size() != b.coords.size() || a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        if (a.coords[i].x != b.coords[i].x || a.coords[i].y != b.coords[i].y) return false;
    for (std::size_t j = 0; j < a.items.size(); ++j)
        if (a.items[j].profit != b.items[j].profit || a.items[j].weight != b.items[j].weight ||
            a.items[j].city != b.items[j].city)
            return false;
    return true;
}

}  // namespace ttpqd
