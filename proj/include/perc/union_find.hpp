#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace perc {

// Disjoint sets with union by size and path halving.
class UnionFind {
public:
    using index_type = std::uint32_t;

    explicit UnionFind(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), index_type{0});
        size_.assign(n, 1);
        components_ = n;
    }

    index_type find(index_type x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when a and b were in different sets.
    bool unite(index_type a, index_type b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --components_;
        return true;
    }

    bool connected(index_type a, index_type b) { return find(a) == find(b); }

    std::size_t component_size(index_type x) { return size_[find(x)]; }
    std::size_t components() const { return components_; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<index_type> parent_;
    std::vector<index_type> size_;
    std::size_t components_ = 0;
};

} // namespace perc
