#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "perc/error.hpp"

namespace perc {

enum class Family { Zd, Triangular, Hexagonal, BondTranslated };

/// Immutable lattice descriptor.
///
/// Triangular and Hexagonal are fixed to two dimensions. BondTranslated(d) is
/// the graph whose vertices are the edges of Z^d; its up-step orientation is
/// pinned to one axis of Z^d (the prime axis, 1-based).
class LatticeSpec {
public:
    LatticeSpec() : LatticeSpec(Family::Zd, 1, 0) {}

    static LatticeSpec zd(int dimension) { return LatticeSpec(Family::Zd, dimension, 0); }
    static LatticeSpec triangular() { return LatticeSpec(Family::Triangular, 2, 0); }
    static LatticeSpec hexagonal() { return LatticeSpec(Family::Hexagonal, 2, 0); }
    static LatticeSpec bond_translated(int dimension, int prime_axis = 1) {
        if (prime_axis < 1 || prime_axis > dimension) {
            throw InvalidSpec("prime_axis " + std::to_string(prime_axis) +
                              " outside [1, " + std::to_string(dimension) + "]");
        }
        return LatticeSpec(Family::BondTranslated, dimension, prime_axis);
    }

    Family family() const { return family_; }
    int dimension() const { return dimension_; }
    /// 1-based; 0 for families without a prime axis.
    int prime_axis() const { return prime_axis_; }
    int ambient_dimension() const { return dimension_; }

    /// D = 2d - 2, the number of corner steps out of an on-prime bond vertex.
    int corner_branching() const { return 2 * dimension_ - 2; }

    /// Largest number of up-step neighbors any vertex has.
    int max_up_degree() const {
        switch (family_) {
        case Family::Zd: return dimension_;
        case Family::Triangular: return 3;
        case Family::Hexagonal: return 2;
        case Family::BondTranslated: return 2 * dimension_ - 1;
        }
        return 0;
    }

    /// Canonical name in the "family[:dimension]" grammar ("zd:2", "tri",
    /// "hex", "bond:3"). A non-default prime axis is appended ("bond:3:2").
    std::string name() const {
        switch (family_) {
        case Family::Zd: return "zd:" + std::to_string(dimension_);
        case Family::Triangular: return "tri";
        case Family::Hexagonal: return "hex";
        case Family::BondTranslated: {
            std::string out = "bond:" + std::to_string(dimension_);
            if (prime_axis_ != 1) out += ":" + std::to_string(prime_axis_);
            return out;
        }
        }
        return "?";
    }

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

private:
    LatticeSpec(Family family, int dimension, int prime_axis)
        : family_(family), dimension_(dimension), prime_axis_(prime_axis) {
        if (dimension < 1) {
            throw InvalidSpec("lattice dimension must be >= 1, got " + std::to_string(dimension));
        }
    }

    Family family_;
    int dimension_;
    int prime_axis_;
};

inline std::ostream& operator<<(std::ostream& os, const LatticeSpec& spec) {
    return os << spec.name();
}

inline constexpr std::string_view kLatticeGrammar =
    "valid lattice forms: zd:<d> (d>=1), tri, hex, bond:<d> or bond:<d>:<prime_axis>";

namespace detail {

inline int parse_positive(std::string_view text, std::string_view whole) {
    if (text.empty() || text.size() > 6) {
        throw InvalidSpec("bad lattice '" + std::string(whole) + "'; " + std::string(kLatticeGrammar));
    }
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw InvalidSpec("bad lattice '" + std::string(whole) + "'; " + std::string(kLatticeGrammar));
        }
        value = value * 10 + (c - '0');
    }
    if (value < 1) {
        throw InvalidSpec("bad lattice '" + std::string(whole) + "'; " + std::string(kLatticeGrammar));
    }
    return value;
}

} // namespace detail

/// Parses the CLI lattice mini-grammar. Throws InvalidSpec listing the valid
/// forms on any error.
inline LatticeSpec parse_lattice(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const auto bad = [&] {
        return InvalidSpec("bad lattice '" + std::string(text) + "'; " + std::string(kLatticeGrammar));
    };
    const std::string_view family = parts[0];
    if ((family == "tri" || family == "triangular") && parts.size() == 1) return LatticeSpec::triangular();
    if ((family == "hex" || family == "hexagonal") && parts.size() == 1) return LatticeSpec::hexagonal();
    if (family == "zd" && parts.size() == 2) return LatticeSpec::zd(detail::parse_positive(parts[1], text));
    if (family == "bond" && (parts.size() == 2 || parts.size() == 3)) {
        const int d = detail::parse_positive(parts[1], text);
        const int axis = parts.size() == 3 ? detail::parse_positive(parts[2], text) : 1;
        if (axis > d) throw bad();
        return LatticeSpec::bond_translated(d, axis);
    }
    throw bad();
}

/// Integer coordinate vector. For BondTranslated lattices the coordinates are
/// the doubled midpoint 2u + e_i of the Z^d edge (u, u + e_i), so exactly one
/// component is odd and its axis is the edge direction.
struct Vertex {
    std::vector<int> coords;

    Vertex() = default;
    explicit Vertex(std::vector<int> c) : coords(std::move(c)) {}
    Vertex(std::initializer_list<int> c) : coords(c) {}

    std::size_t size() const { return coords.size(); }
    int operator[](std::size_t i) const { return coords[i]; }
    int& operator[](std::size_t i) { return coords[i]; }

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Vertex& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os;
}

/// Text encoding "a1,a2,...,ad" used by the CLI.
inline std::string format_vertex(const Vertex& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

inline Vertex parse_vertex(std::string_view text) {
    Vertex v;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string part(text.substr(start, comma - start));
        if (part.empty()) throw InvalidSpec("bad vertex '" + std::string(text) + "'");
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(part, &used);
        } catch (const std::exception&) {
            throw InvalidSpec("bad vertex '" + std::string(text) + "'");
        }
        if (used != part.size()) throw InvalidSpec("bad vertex '" + std::string(text) + "'");
        v.coords.push_back(value);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return v;
}

struct VertexHash {
    std::size_t operator()(const Vertex& v) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int c : v.coords) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

inline Vertex origin(const LatticeSpec& spec) {
    Vertex v(std::vector<int>(static_cast<std::size_t>(spec.ambient_dimension()), 0));
    // the origin bond is the Z^d edge from 0 along the prime axis
    if (spec.family() == Family::BondTranslated) v[static_cast<std::size_t>(spec.prime_axis() - 1)] = 1;
    return v;
}

namespace detail {

inline void check_dimension(const Vertex& v, const LatticeSpec& spec) {
    if (v.size() != static_cast<std::size_t>(spec.ambient_dimension())) {
        throw DimensionMismatch("vertex has " + std::to_string(v.size()) + " coordinates, lattice " +
                                spec.name() + " needs " + std::to_string(spec.ambient_dimension()));
    }
}

inline int l1(const Vertex& v) {
    int s = 0;
    for (int c : v.coords) s += std::abs(c);
    return s;
}

/// Edge direction (0-based) of a bond vertex; -1 unless exactly one coordinate is odd.
inline int bond_direction(const Vertex& v) {
    int dir = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] % 2 != 0) {
            if (dir >= 0) return -1;
            dir = static_cast<int>(i);
        }
    }
    return dir;
}

inline void check_bond_vertex(const Vertex& v, const LatticeSpec& spec) {
    if (bond_direction(v) < 0) {
        throw InvalidSpec("vertex " + format_vertex(v) + " is not a bond of Z^" +
                          std::to_string(spec.dimension()) + " (needs exactly one odd coordinate)");
    }
}

inline void check_quadrant(const Vertex& v, const LatticeSpec& spec) {
    if (spec.family() == Family::BondTranslated) {
        check_bond_vertex(v, spec);
        if (v[static_cast<std::size_t>(spec.prime_axis() - 1)] < 1) {
            throw OutOfQuadrant("bond vertex " + format_vertex(v) + " lies below the prime-axis arc origin");
        }
        return;
    }
    for (int c : v.coords) {
        if (c < 0) throw OutOfQuadrant("vertex " + format_vertex(v) + " has a negative coordinate");
    }
}

inline Vertex shifted(const Vertex& v, std::size_t axis, int delta) {
    Vertex w = v;
    w[axis] += delta;
    return w;
}

} // namespace detail

/// Arc index of v. L1 norm for Zd, Triangular and Hexagonal; for
/// BondTranslated the embedded-arc index coords[prime_axis] - 1, defined on
/// the up-quadrant only.
inline int norm(const Vertex& v, const LatticeSpec& spec) {
    detail::check_dimension(v, spec);
    if (spec.family() != Family::BondTranslated) return detail::l1(v);
    detail::check_quadrant(v, spec);
    return v[static_cast<std::size_t>(spec.prime_axis() - 1)] - 1;
}

/// Up-step neighbors of a vertex in the up-quadrant, in a fixed order.
inline std::vector<Vertex> up_neighbors(const Vertex& v, const LatticeSpec& spec) {
    detail::check_dimension(v, spec);
    detail::check_quadrant(v, spec);
    const auto d = static_cast<std::size_t>(spec.dimension());
    std::vector<Vertex> out;
    switch (spec.family()) {
    case Family::Zd:
        for (std::size_t i = 0; i < d; ++i) out.push_back(detail::shifted(v, i, 1));
        break;
    case Family::Triangular: {
        out.push_back(detail::shifted(v, 0, 1));
        out.push_back(detail::shifted(v, 1, 1));
        Vertex diag = detail::shifted(v, 0, 1);
        diag[1] += 1;
        out.push_back(std::move(diag));
        break;
    }
    case Family::Hexagonal:
        // even layers keep the +e1 bond, odd layers lost it
        if (detail::l1(v) % 2 == 0) out.push_back(detail::shifted(v, 0, 1));
        out.push_back(detail::shifted(v, 1, 1));
        break;
    case Family::BondTranslated: {
        const auto prime = static_cast<std::size_t>(spec.prime_axis() - 1);
        const auto dir = static_cast<std::size_t>(detail::bond_direction(v));
        if (dir == prime) {
            out.push_back(detail::shifted(v, prime, 2));
            for (std::size_t j = 0; j < d; ++j) {
                if (j == prime) continue;
                for (int s : {1, -1}) {
                    Vertex w = detail::shifted(v, prime, 1);
                    w[j] += s;
                    out.push_back(std::move(w));
                }
            }
        } else {
            for (int s : {1, -1}) {
                Vertex w = detail::shifted(v, prime, 1);
                w[dir] += s;
                out.push_back(std::move(w));
            }
        }
        break;
    }
    }
    return out;
}

/// Undirected neighborhood (any vertex, not only the up-quadrant).
inline std::vector<Vertex> full_neighbors(const Vertex& v, const LatticeSpec& spec) {
    detail::check_dimension(v, spec);
    const auto d = static_cast<std::size_t>(spec.dimension());
    std::vector<Vertex> out;
    switch (spec.family()) {
    case Family::Zd:
        for (std::size_t i = 0; i < d; ++i) {
            out.push_back(detail::shifted(v, i, 1));
            out.push_back(detail::shifted(v, i, -1));
        }
        break;
    case Family::Triangular:
        for (int s : {1, -1}) {
            out.push_back(detail::shifted(v, 0, s));
            out.push_back(detail::shifted(v, 1, s));
            Vertex diag = detail::shifted(v, 0, s);
            diag[1] += s;
            out.push_back(std::move(diag));
        }
        break;
    case Family::Hexagonal: {
        // brick-wall honeycomb: even sites bond to +e1, odd sites to -e1
        const bool even = ((v[0] + v[1]) % 2) == 0;
        out.push_back(detail::shifted(v, 0, even ? 1 : -1));
        out.push_back(detail::shifted(v, 1, 1));
        out.push_back(detail::shifted(v, 1, -1));
        break;
    }
    case Family::BondTranslated: {
        detail::check_bond_vertex(v, spec);
        const auto dir = static_cast<std::size_t>(detail::bond_direction(v));
        out.push_back(detail::shifted(v, dir, 2));
        out.push_back(detail::shifted(v, dir, -2));
        for (std::size_t j = 0; j < d; ++j) {
            if (j == dir) continue;
            for (int s1 : {1, -1}) {
                for (int s2 : {1, -1}) {
                    Vertex w = detail::shifted(v, dir, s1);
                    w[j] += s2;
                    out.push_back(std::move(w));
                }
            }
        }
        break;
    }
    }
    return out;
}

/// One outgoing branch of the arc-level recurrence: every path sitting on
/// an arc with this parity splits into `multiplicity` paths that advance
/// `arc_step` arcs.
struct ArcBranch {
    int arc_step;
    int multiplicity;
};

/// Arc-level transfer rule the counting recurrences are built from. Depends on
/// the arc only through its parity.
inline std::vector<ArcBranch> arc_branches(const LatticeSpec& spec, int arc) {
    switch (spec.family()) {
    case Family::Zd: return {{1, spec.dimension()}};
    case Family::Triangular: return {{1, 2}, {2, 1}};
    case Family::Hexagonal: return {{1, arc % 2 == 0 ? 2 : 1}};
    case Family::BondTranslated:
        if (arc % 2 == 0) return {{1, spec.corner_branching()}, {2, 1}};
        return {{1, 2}};
    }
    return {};
}

} // namespace perc

template <>
struct std::hash<perc::Vertex> {
    std::size_t operator()(const perc::Vertex& v) const noexcept { return perc::VertexHash{}(v); }
};
