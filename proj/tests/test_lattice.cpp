#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "perc/lattice.hpp"

using namespace perc;

namespace {

std::vector<LatticeSpec> all_lattices() {
    return {LatticeSpec::zd(1),     LatticeSpec::zd(2),
            LatticeSpec::zd(3),     LatticeSpec::zd(4),
            LatticeSpec::triangular(), LatticeSpec::hexagonal(),
            LatticeSpec::bond_translated(1), LatticeSpec::bond_translated(2),
            LatticeSpec::bond_translated(3), LatticeSpec::bond_translated(2, 2),
            LatticeSpec::bond_translated(3, 2), LatticeSpec::bond_translated(4, 3)};
}

// Random up-quadrant vertex with norm <= max_norm.
Vertex random_vertex(const LatticeSpec& spec, std::mt19937_64& rng, int max_norm) {
    const auto n = static_cast<std::size_t>(spec.ambient_dimension());
    std::uniform_int_distribution<int> coord(0, max_norm);
    while (true) {
        Vertex v(std::vector<int>(n, 0));
        if (spec.family() == Family::BondTranslated) {
            const auto prime = static_cast<std::size_t>(spec.prime_axis() - 1);
            std::uniform_int_distribution<std::size_t> axis(0, n - 1);
            std::uniform_int_distribution<int> signed_coord(-max_norm, max_norm);
            for (std::size_t i = 0; i < n; ++i) v[i] = 2 * signed_coord(rng);
            v[prime] = 2 * coord(rng);
            v[axis(rng)] += 1;
            if (v[prime] < 1) continue;
        } else {
            for (std::size_t i = 0; i < n; ++i) v[i] = coord(rng);
        }
        if (norm(v, spec) <= max_norm) return v;
    }
}

std::set<Vertex> as_set(const std::vector<Vertex>& vs) { return {vs.begin(), vs.end()}; }

int full_degree(const LatticeSpec& spec) {
    switch (spec.family()) {
    case Family::Zd: return 2 * spec.dimension();
    case Family::Triangular: return 6;
    case Family::Hexagonal: return 3;
    case Family::BondTranslated: return 2 * (2 * spec.dimension() - 1);
    }
    return 0;
}

} // namespace

TEST(LatticeSpec, ParseAndName) {
    EXPECT_EQ(parse_lattice("zd:2"), LatticeSpec::zd(2));
    EXPECT_EQ(parse_lattice("tri"), LatticeSpec::triangular());
    EXPECT_EQ(parse_lattice("hex"), LatticeSpec::hexagonal());
    EXPECT_EQ(parse_lattice("bond:3"), LatticeSpec::bond_translated(3));
    EXPECT_EQ(parse_lattice("bond:3:2"), LatticeSpec::bond_translated(3, 2));
    for (const auto& spec : all_lattices()) EXPECT_EQ(parse_lattice(spec.name()), spec);
    for (const char* bad : {"", "zd", "zd:0", "zd:x", "tri:2", "bond:2:3", "square", "zd:2:1", "bond:"}) {
        EXPECT_THROW(parse_lattice(bad), InvalidSpec) << bad;
    }
    try {
        parse_lattice("cubic");
        FAIL();
    } catch (const InvalidSpec& e) {
        EXPECT_NE(std::string(e.what()).find("zd:<d>"), std::string::npos);
    }
}

TEST(LatticeSpec, Derived) {
    EXPECT_EQ(LatticeSpec::bond_translated(3).corner_branching(), 4);
    EXPECT_EQ(LatticeSpec::bond_translated(3).max_up_degree(), 5);
    EXPECT_EQ(LatticeSpec::triangular().ambient_dimension(), 2);
    EXPECT_THROW(LatticeSpec::zd(0), InvalidSpec);
    EXPECT_THROW(LatticeSpec::bond_translated(2, 3), InvalidSpec);
}

TEST(Vertex, FormatParseRoundTrip) {
    const Vertex v({3, -1, 0});
    EXPECT_EQ(parse_vertex(format_vertex(v)), v);
    EXPECT_THROW(parse_vertex("1,,2"), InvalidSpec);
}

TEST(Norm, Examples) {
    EXPECT_EQ(norm(Vertex({0, 0}), LatticeSpec::zd(2)), 0);
    EXPECT_EQ(norm(Vertex({2, 2}), LatticeSpec::zd(2)), 4);
    EXPECT_EQ(norm(Vertex({0, 3}), LatticeSpec::bond_translated(2, 2)), 2);
    EXPECT_EQ(norm(origin(LatticeSpec::bond_translated(3)), LatticeSpec::bond_translated(3)), 0);
}

TEST(Norm, Errors) {
    EXPECT_THROW(norm(Vertex({1, 2, 3}), LatticeSpec::zd(2)), DimensionMismatch);
    EXPECT_THROW(norm(Vertex({0, -1}), LatticeSpec::bond_translated(2, 2)), OutOfQuadrant);
    EXPECT_THROW(up_neighbors(Vertex({-1, 0}), LatticeSpec::zd(2)), OutOfQuadrant);
    EXPECT_THROW(norm(Vertex({1, 1}), LatticeSpec::bond_translated(2)), InvalidSpec);
}

TEST(UpNeighbors, Examples) {
    EXPECT_EQ(as_set(up_neighbors(Vertex({1, 0}), LatticeSpec::zd(2))), as_set({Vertex({2, 0}), Vertex({1, 1})}));

    const auto b3 = LatticeSpec::bond_translated(3, 2);
    const Vertex o = origin(b3);
    const auto up = up_neighbors(o, b3);
    ASSERT_EQ(up.size(), 5u);
    int colinear = 0;
    for (const auto& w : up) colinear += detail::bond_direction(w) == 1 ? 1 : 0;
    EXPECT_EQ(colinear, 1);

    const auto hex = LatticeSpec::hexagonal();
    EXPECT_EQ(up_neighbors(Vertex({1, 0}), hex).size(), 1u);
    EXPECT_EQ(up_neighbors(Vertex({0, 1}), hex).size(), 1u);
}

TEST(FullNeighbors, Examples) {
    EXPECT_EQ(full_neighbors(Vertex({5, -2, 7}), LatticeSpec::zd(3)).size(), 6u);
    EXPECT_EQ(full_neighbors(Vertex({4, 7}), LatticeSpec::bond_translated(2)).size(), 6u);
    EXPECT_EQ(full_neighbors(Vertex({0, 0}), LatticeSpec::hexagonal()).size(), 3u);
}

// The arc increments of a vertex's up-neighbors are exactly the branches the
// counting recurrence uses for that arc.
TEST(UpNeighbors, MatchArcBranches) {
    std::mt19937_64 rng(11);
    for (const auto& spec : all_lattices()) {
        for (int s = 0; s < 10000; ++s) {
            const Vertex v = random_vertex(spec, rng, 12);
            const int a = norm(v, spec);
            std::map<int, int> seen;
            for (const auto& w : up_neighbors(v, spec)) ++seen[norm(w, spec) - a];
            std::map<int, int> expected;
            for (const auto& b : arc_branches(spec, a)) {
                if (b.multiplicity > 0) expected[b.arc_step] += b.multiplicity;
            }
            ASSERT_EQ(seen, expected) << spec.name() << " at " << format_vertex(v);
        }
    }
}

TEST(UpNeighbors, SubsetOfFullNeighbors) {
    std::mt19937_64 rng(12);
    for (const auto& spec : all_lattices()) {
        for (int s = 0; s < 10000; ++s) {
            const Vertex v = random_vertex(spec, rng, 12);
            const auto full = as_set(full_neighbors(v, spec));
            for (const auto& w : up_neighbors(v, spec)) ASSERT_TRUE(full.count(w)) << spec.name() << " " << format_vertex(v);
        }
    }
}

TEST(FullNeighbors, SymmetricAndConstantDegree) {
    std::mt19937_64 rng(13);
    for (const auto& spec : all_lattices()) {
        for (int s = 0; s < 2000; ++s) {
            const Vertex v = random_vertex(spec, rng, 12);
            const auto nbrs = full_neighbors(v, spec);
            ASSERT_EQ(static_cast<int>(as_set(nbrs).size()), full_degree(spec)) << spec.name();
            for (const auto& w : nbrs) ASSERT_TRUE(as_set(full_neighbors(w, spec)).count(v)) << spec.name();
        }
    }
}

// Every quadrant vertex of norm <= 12 has the up-degree the recurrence assumes.
TEST(UpNeighbors, DegreeCountsUpToNorm12) {
    for (const auto& spec : {LatticeSpec::zd(2), LatticeSpec::zd(3), LatticeSpec::triangular(), LatticeSpec::hexagonal()}) {
        const int d = spec.ambient_dimension();
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        const auto rec = [&](auto&& self, int axis) -> void {
            if (axis == d) {
                const Vertex v(c);
                if (norm(v, spec) > 12) return;
                int want = 0;
                for (const auto& b : arc_branches(spec, norm(v, spec))) want += b.multiplicity;
                ASSERT_EQ(static_cast<int>(up_neighbors(v, spec).size()), want);
                return;
            }
            for (int x = 0; x <= 12; ++x) {
                c[static_cast<std::size_t>(axis)] = x;
                self(self, axis + 1);
            }
        };
        rec(rec, 0);
    }
}

TEST(Hexagonal, DegreeHistogramOn20x20) {
    const auto hex = LatticeSpec::hexagonal();
    std::map<int, int> histogram;
    int interior_bad = 0;
    for (int x = 0; x < 20; ++x) {
        for (int y = 0; y < 20; ++y) {
            int inside = 0;
            for (const auto& w : full_neighbors(Vertex({x, y}), hex)) {
                if (w[0] >= 0 && w[0] < 20 && w[1] >= 0 && w[1] < 20) ++inside;
            }
            ++histogram[inside];
            if (x > 0 && x < 19 && y > 0 && y < 19 && inside != 3) ++interior_bad;
        }
    }
    EXPECT_EQ(interior_bad, 0);
    // boundary sites lose at most one bond per side, and no site has degree 0
    EXPECT_EQ(histogram.count(0), 0u);
    EXPECT_EQ(histogram.count(4), 0u);
    int total = 0;
    for (const auto& [deg, n] : histogram) total += deg * n;
    EXPECT_EQ(total % 2, 0);
}

TEST(ArcBranches, Tables) {
    const auto b = arc_branches(LatticeSpec::bond_translated(3), 0);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].multiplicity, 4);
    EXPECT_EQ(b[1].arc_step, 2);
    EXPECT_EQ(arc_branches(LatticeSpec::hexagonal(), 1)[0].multiplicity, 1);
}
