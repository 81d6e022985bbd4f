#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "perc/bigint.hpp"
#include "perc/error.hpp"
#include "perc/lattice.hpp"

namespace perc {

/// Exact number of k-step up-paths from the origin, grouped by terminal arc.
/// Arcs with zero paths are not stored.
struct PathCountTable {
    LatticeSpec lattice;
    int k = 0;
    std::map<int, BigInt> counts;

    BigInt total() const {
        BigInt sum = 0;
        for (const auto& [arc, n] : counts) sum += n;
        return sum;
    }

    BigInt count_at(int arc) const {
        auto it = counts.find(arc);
        return it == counts.end() ? BigInt(0) : it->second;
    }

    friend bool operator==(const PathCountTable&, const PathCountTable&) = default;
};

/// Advances one layer of the arc recurrence. `layer[a]` holds the paths
/// ending on arc a; `branches(a)` yields (arc_step, multiplier) pairs.
template <class Coef, class Branches>
std::vector<Coef> advance_layer(const std::vector<Coef>& layer, Branches&& branches) {
    std::vector<Coef> next(layer.size() + 2, Coef{});
    for (std::size_t arc = 0; arc < layer.size(); ++arc) {
        if (layer[arc] == Coef{}) continue;
        for (const auto& [step, mult] : branches(static_cast<int>(arc))) {
            next[arc + static_cast<std::size_t>(step)] += layer[arc] * mult;
        }
    }
    while (!next.empty() && next.back() == Coef{}) next.pop_back();
    return next;
}

/// Iterates the integer arc recurrence of a lattice one step at a time.
/// Layer 0 is the origin alone; layer k holds n_k(arc) for every arc.
class ArcRecurrence {
public:
    explicit ArcRecurrence(LatticeSpec spec) : spec_(spec), layer_{BigInt(1)} {}

    const LatticeSpec& lattice() const { return spec_; }
    int steps() const { return steps_; }
    const std::vector<BigInt>& layer() const { return layer_; }

    void advance() {
        layer_ = advance_layer(layer_, [this](int arc) {
            std::vector<std::pair<int, BigInt>> out;
            for (const ArcBranch& b : arc_branches(spec_, arc)) out.emplace_back(b.arc_step, BigInt(b.multiplicity));
            return out;
        });
        ++steps_;
    }

    BigInt count_at(int arc) const {
        if (arc < 0 || static_cast<std::size_t>(arc) >= layer_.size()) return 0;
        return layer_[static_cast<std::size_t>(arc)];
    }

    BigInt total() const {
        BigInt sum = 0;
        for (const BigInt& n : layer_) sum += n;
        return sum;
    }

    PathCountTable table() const {
        PathCountTable t{spec_, steps_, {}};
        for (std::size_t arc = 0; arc < layer_.size(); ++arc) {
            if (layer_[arc] != 0) t.counts.emplace(static_cast<int>(arc), layer_[arc]);
        }
        return t;
    }

private:
    LatticeSpec spec_;
    int steps_ = 0;
    std::vector<BigInt> layer_;
};

/// Exact per-arc path counts from the layered recurrences:
///   Zd            n_k(k) = d^k
///   Triangular    n_{k+1}(a) = 2 n_k(a-1) + n_k(a-2)
///   Hexagonal     doubles on even arcs, unchanged on odd arcs
///   BondTranslated even arc -> D paths one arc up + 1 path two arcs up,
///                  odd arc  -> 2 paths one arc up          (D = 2d - 2)
inline PathCountTable count_recurrence(const LatticeSpec& spec, int k) {
    if (k < 1) throw InvalidSpec("step count k must be >= 1, got " + std::to_string(k));
    ArcRecurrence rec(spec);
    for (int i = 0; i < k; ++i) rec.advance();
    return rec.table();
}

inline constexpr int kBruteForceMaxK = 14;
inline constexpr std::uint64_t kDefaultExpansionBudget = 100'000'000;

namespace detail {

struct UpPathWalker {
    const LatticeSpec& spec;
    int k;
    std::uint64_t budget;
    std::uint64_t expansions = 0;
    std::map<int, BigInt> counts;

    void walk(const Vertex& v, int depth) {
        if (depth == k) {
            counts[norm(v, spec)] += 1;
            return;
        }
        if (++expansions > budget) {
            throw BudgetExceeded("brute-force enumeration exceeded " + std::to_string(budget) +
                                 " node expansions");
        }
        for (const Vertex& w : up_neighbors(v, spec)) walk(w, depth + 1);
    }
};

} // namespace detail

/// Independent oracle for count_recurrence: depth-first enumeration of every
/// k-step up-path using the vertex-level neighbor rules. Up-steps strictly
/// raise the arc index, so every enumerated walk is self-avoiding.
inline PathCountTable count_bruteforce(const LatticeSpec& spec, int k,
                                       std::uint64_t expansion_budget = kDefaultExpansionBudget) {
    if (k < 1) throw InvalidSpec("step count k must be >= 1, got " + std::to_string(k));
    if (k > kBruteForceMaxK) {
        throw BudgetExceeded("brute-force enumeration is guarded to k <= " + std::to_string(kBruteForceMaxK));
    }
    detail::UpPathWalker walker{spec, k, expansion_budget, 0, {}};
    walker.walk(origin(spec), 0);
    return PathCountTable{spec, k, std::move(walker.counts)};
}

/// Upper bound on the number of (k+2m)-paths from the origin ending on arc k
/// of Z^d: m * d^k, and d^k itself for m = 0.
inline BigInt extension_bound(int d, int k, int m) {
    const BigInt base = pow_int(d, static_cast<unsigned>(k));
    return m == 0 ? base : BigInt(m) * base;
}

namespace detail {

struct QuadrantWalkCounter {
    int d;
    int target_norm;
    int length;
    std::uint64_t budget;
    std::uint64_t expansions = 0;
    BigInt count = 0;
    std::unordered_set<Vertex, VertexHash> visited;

    void walk(Vertex& v, int current_norm, int depth) {
        const int remaining = length - depth;
        if (remaining == 0) {
            if (current_norm == target_norm) count += 1;
            return;
        }
        // every step changes the norm by exactly one
        if (current_norm - remaining > target_norm) return;
        if (++expansions > budget) {
            throw BudgetExceeded("walk enumeration exceeded " + std::to_string(budget) + " node expansions");
        }
        for (std::size_t axis = 0; axis < static_cast<std::size_t>(d); ++axis) {
            for (int s : {1, -1}) {
                if (v[axis] + s < 0) continue;
                v[axis] += s;
                if (visited.insert(v).second) {
                    walk(v, current_norm + s, depth + 1);
                    visited.erase(v);
                }
                v[axis] -= s;
            }
        }
    }
};

} // namespace detail

/// Exhaustive count of self-avoiding walks of k + 2m steps on Z^d that start
/// at the origin, never leave the up-quadrant (all coordinates >= 0) and end
/// on arc k. Empirical companion to extension_bound.
inline BigInt count_walks_to_arc(int d, int k, int m,
                                 std::uint64_t expansion_budget = kDefaultExpansionBudget) {
    if (d < 1 || d > 3) throw InvalidSpec("count_walks_to_arc supports 1 <= d <= 3, got d=" + std::to_string(d));
    if (k < 1 || m < 0) throw InvalidSpec("count_walks_to_arc needs k >= 1 and m >= 0");
    if (k + 2 * m > 10) throw InvalidSpec("count_walks_to_arc is limited to k + 2m <= 10");
    detail::QuadrantWalkCounter counter{d, k, k + 2 * m, expansion_budget, 0, 0, {}};
    Vertex v(std::vector<int>(static_cast<std::size_t>(d), 0));
    counter.visited.insert(v);
    counter.walk(v, 0, 0);
    return counter.count;
}

} // namespace perc
