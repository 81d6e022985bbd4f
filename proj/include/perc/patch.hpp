#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include "perc/error.hpp"
#include "perc/lattice.hpp"

namespace perc {

inline constexpr std::size_t kDefaultPatchSiteBudget = 20'000'000;

/// Finite piece of a lattice around the origin, flattened to index form.
///
/// Zd, Triangular and Hexagonal patches hold every site with L1 norm <= radius;
/// the targets are the sites at norm exactly radius. A BondTranslated(d) patch
/// is the image of the Z^d patch: one site per Z^d edge with both endpoints
/// inside the diamond, targets are the edges touching the outer arc, and the
/// origin is the Z^d edge leaving 0 along the prime axis.
struct Patch {
    LatticeSpec lattice;
    int radius = 0;
    std::vector<Vertex> sites;
    std::vector<std::uint32_t> edge_a;  // each undirected edge once, edge_a < edge_b
    std::vector<std::uint32_t> edge_b;
    std::uint32_t origin = 0;
    std::vector<std::uint32_t> targets;

    std::size_t site_count() const { return sites.size(); }
    std::size_t edge_count() const { return edge_a.size(); }
};

namespace detail {

// Calls fn(point) for every integer point of Z^d with L1 norm <= radius, in
// lexicographic order.
template <class Fn>
void for_each_in_diamond(int d, int radius, Fn&& fn) {
    std::vector<int> point(static_cast<std::size_t>(d), 0);
    const auto rec = [&](auto&& self, std::size_t axis, int budget) -> void {
        if (axis == point.size()) {
            fn(Vertex(point));
            return;
        }
        for (int c = -budget; c <= budget; ++c) {
            point[axis] = c;
            self(self, axis + 1, budget - std::abs(c));
        }
        point[axis] = 0;
    };
    rec(rec, 0, radius);
}

} // namespace detail

inline Patch build_patch(const LatticeSpec& spec, int radius,
                         std::size_t site_budget = kDefaultPatchSiteBudget) {
    if (radius < 1) throw InvalidConfig("patch radius must be >= 1");
    Patch patch{spec, radius, {}, {}, {}, 0, {}};
    const int d = spec.dimension();
    const auto add = [&](Vertex v) {
        if (patch.sites.size() >= site_budget) {
            throw MemoryBudgetExceeded("patch of " + spec.name() + " with radius " + std::to_string(radius) +
                                       " exceeds " + std::to_string(site_budget) + " sites");
        }
        patch.sites.push_back(std::move(v));
    };

    if (spec.family() == Family::BondTranslated) {
        detail::for_each_in_diamond(d, radius, [&](const Vertex& u) {
            const int n = detail::l1(u);
            for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
                Vertex far = u;
                far[i] += 1;
                if (detail::l1(far) > radius) continue;
                Vertex bond = u;
                for (auto& c : bond.coords) c *= 2;
                bond[i] += 1;
                if (n == radius || detail::l1(far) == radius) patch.targets.push_back(static_cast<std::uint32_t>(patch.sites.size()));
                add(std::move(bond));
            }
        });
    } else {
        detail::for_each_in_diamond(d, radius, [&](const Vertex& v) {
            if (detail::l1(v) == radius) patch.targets.push_back(static_cast<std::uint32_t>(patch.sites.size()));
            add(v);
        });
    }

    std::unordered_map<Vertex, std::uint32_t, VertexHash> index;
    index.reserve(patch.sites.size() * 2);
    for (std::uint32_t i = 0; i < patch.sites.size(); ++i) index.emplace(patch.sites[i], i);

    for (std::uint32_t i = 0; i < patch.sites.size(); ++i) {
        for (const Vertex& w : full_neighbors(patch.sites[i], spec)) {
            auto it = index.find(w);
            if (it != index.end() && it->second > i) {
                patch.edge_a.push_back(i);
                patch.edge_b.push_back(it->second);
            }
        }
    }
    patch.origin = index.at(origin(spec));
    return patch;
}

} // namespace perc
