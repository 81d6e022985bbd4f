#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "perc/bigint.hpp"
#include "perc/error.hpp"
#include "perc/exact_count.hpp"

namespace perc {

/// Polynomial in the formal branching variable D with exact coefficients.
/// Kept trimmed so the zero polynomial compares equal to Polynomial{}.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int constant) : Polynomial(BigInt(constant)) {}
    Polynomial(BigInt constant) {
        if (constant != 0) coefs_.push_back(std::move(constant));
    }

    static Polynomial variable() {
        Polynomial p;
        p.coefs_ = {BigInt(0), BigInt(1)};
        return p;
    }

    /// Coefficients by ascending power of D.
    const std::vector<BigInt>& coefficients() const { return coefs_; }
    int degree() const { return static_cast<int>(coefs_.size()) - 1; }

    Polynomial& operator+=(const Polynomial& other) {
        if (other.coefs_.size() > coefs_.size()) coefs_.resize(other.coefs_.size());
        for (std::size_t i = 0; i < other.coefs_.size(); ++i) coefs_[i] += other.coefs_[i];
        trim();
        return *this;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        if (a.coefs_.empty() || b.coefs_.empty()) return out;
        out.coefs_.assign(a.coefs_.size() + b.coefs_.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.coefs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coefs_.size(); ++j) out.coefs_[i + j] += a.coefs_[i] * b.coefs_[j];
        }
        out.trim();
        return out;
    }

    BigInt evaluate(const BigInt& d_value) const {
        BigInt acc = 0;
        for (auto it = coefs_.rbegin(); it != coefs_.rend(); ++it) acc = acc * d_value + *it;
        return acc;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim() {
        while (!coefs_.empty() && coefs_.back() == 0) coefs_.pop_back();
    }

    std::vector<BigInt> coefs_;
};

/// One term c * D^power of a listed row.
struct SymbolicTerm {
    BigInt coefficient;
    int power = 0;

    friend bool operator==(const SymbolicTerm&, const SymbolicTerm&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const SymbolicTerm& t) {
    os << t.coefficient;
    if (t.power > 0) os << "D^" << t.power;
    return os;
}

inline std::string format_row(const std::vector<SymbolicTerm>& row) {
    std::string out;
    for (const SymbolicTerm& t : row) {
        if (!out.empty()) out += " + ";
        out += t.coefficient.str();
        if (t.power > 0) out += "D^" + std::to_string(t.power);
    }
    return out;
}

/// Per-arc path counts of the bond-translated lattice after k up-steps as
/// polynomials in D = 2d - 2. Index i of the result is arc k + i.
inline std::vector<Polynomial> bond_symbolic_arcs(int k) {
    if (k < 1) throw InvalidSpec("step count k must be >= 1, got " + std::to_string(k));
    std::vector<Polynomial> layer{Polynomial(1)};
    const auto branches = [](int arc) {
        std::vector<std::pair<int, Polynomial>> out;
        if (arc % 2 == 0) {
            out.emplace_back(1, Polynomial::variable());
            out.emplace_back(2, Polynomial(1));
        } else {
            out.emplace_back(1, Polynomial(2));
        }
        return out;
    };
    for (int step = 0; step < k; ++step) layer = advance_layer(layer, branches);
    layer.resize(static_cast<std::size_t>(2 * k + 1));
    return {layer.begin() + k, layer.end()};
}

/// Row sum_{i=k}^{2k} n_k(i) written term by term in arc order, without
/// collecting like powers. Arcs whose count is a sum of several powers
/// contribute one term per power, highest first.
inline std::vector<SymbolicTerm> bond_symbolic_row(int k) {
    std::vector<SymbolicTerm> row;
    for (const Polynomial& p : bond_symbolic_arcs(k)) {
        const auto& c = p.coefficients();
        for (int power = p.degree(); power >= 0; --power) {
            if (c[static_cast<std::size_t>(power)] != 0) row.push_back({c[static_cast<std::size_t>(power)], power});
        }
    }
    return row;
}

} // namespace perc
