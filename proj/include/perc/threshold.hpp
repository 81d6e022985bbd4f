#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "perc/bigint.hpp"
#include "perc/error.hpp"
#include "perc/exact_count.hpp"
#include "perc/lattice.hpp"

namespace perc {

enum class Provenance { Exact, Approximate };

inline const char* to_string(Provenance p) {
    return p == Provenance::Exact ? "exact" : "approximate";
}

/// Closed-form critical probability p_H claimed for a lattice.
struct ThresholdFormula {
    LatticeSpec lattice;
    double p_h;
    Provenance provenance;
};

inline ThresholdFormula formula_threshold(const LatticeSpec& spec) {
    switch (spec.family()) {
    case Family::Zd: return {spec, 1.0 / spec.dimension(), Provenance::Exact};
    case Family::Triangular: return {spec, std::pow(2.0, -1.5), Provenance::Approximate};
    case Family::Hexagonal: return {spec, std::pow(2.0, -0.5), Provenance::Exact};
    case Family::BondTranslated:
        if (spec.dimension() == 1) return {spec, 1.0, Provenance::Exact};
        return {spec, 1.0 / (2.0 * std::sqrt(spec.dimension() - 1.0)), Provenance::Exact};
    }
    return {spec, 1.0, Provenance::Exact};
}

/// Arc whose count the closed-form limits are evaluated on: arc k for Zd,
/// Hexagonal and the all-corner branch of BondTranslated, and
/// k + floor((k-1)/2) for Triangular. Not necessarily the arc with the most
/// paths; see argmax_arc.
inline int dominant_arc(const LatticeSpec& spec, int k) {
    if (k < 1) throw InvalidSpec("step count k must be >= 1, got " + std::to_string(k));
    switch (spec.family()) {
    case Family::Zd:
    case Family::Hexagonal: return k;
    case Family::Triangular: return k + (k - 1) / 2;
    case Family::BondTranslated: return spec.dimension() == 1 ? 2 * k : k;
    }
    return k;
}

/// Arc holding the largest count; ties go to the smaller arc.
inline int argmax_arc(const PathCountTable& table) {
    int best_arc = -1;
    BigInt best = -1;
    for (const auto& [arc, n] : table.counts) {
        if (n > best) {
            best = n;
            best_arc = arc;
        }
    }
    return best_arc;
}

namespace detail {

inline void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
}

inline double k_log_p(int k, double p) {
    if (k == 0) return 0.0;
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    return k * std::log(p);
}

} // namespace detail

/// log psi_k = log(sum_i n_k(i)) + k log p.
inline double log_psi(const PathCountTable& table, double p) {
    detail::check_probability(p);
    return log_bigint(table.total()) + detail::k_log_p(table.k, p);
}

inline double psi_expected_paths(const LatticeSpec& spec, double p, int k) {
    return log_psi(count_recurrence(spec, k), p);
}

/// log(n_k(dominant arc) p^k) for k = 1..k_max, from a single recurrence pass.
inline std::vector<double> log_psi_dominant_series(const LatticeSpec& spec, double p, int k_max) {
    detail::check_probability(p);
    std::vector<double> out;
    ArcRecurrence rec(spec);
    for (int k = 1; k <= k_max; ++k) {
        rec.advance();
        out.push_back(log_bigint(rec.count_at(dominant_arc(spec, k))) + detail::k_log_p(k, p));
    }
    return out;
}

inline double log_psi_dominant(const LatticeSpec& spec, double p, int k) {
    if (k < 1) throw InvalidSpec("step count k must be >= 1, got " + std::to_string(k));
    return log_psi_dominant_series(spec, p, k).back();
}

/// log[(dp)^k (1 + sum_{i>=1} i p^{2i})], using sum_{i>=1} i x^i = x / (1-x)^2.
inline double psi_upper_bound_zd(int d, double p, int k) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("series diverges unless 0 <= p < 1, got " + std::to_string(p));
    if (d < 1) throw DomainError("dimension must be >= 1");
    const double x = p * p;
    const double tail = std::log1p(x / ((1.0 - x) * (1.0 - x)));
    if (k == 0) return tail;
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    return k * std::log(d * p) + tail;
}

struct GrowthSample {
    int k;
    int arc;            // dominant_arc(lattice, k)
    double arc_rate;    // n_k(arc)^(1/k)
    double total_rate;  // (sum_i n_k(i))^(1/k)
};

struct GrowthEstimate {
    LatticeSpec lattice;
    int k_max;
    std::vector<GrowthSample> sequence;
    double extrapolated_rate;   // dominant-arc rate, limit k -> inf
    double reciprocal;          // 1 / extrapolated_rate, compared against formula
    double total_extrapolated_rate;
    double total_reciprocal;
    ThresholdFormula formula;
};

inline constexpr int kGrowthMaxK = 20000;
inline constexpr int kGrowthFitPoints = 8;
inline constexpr double kGrowthStride = 1.25;

/// Sampled step counts 8, 10, 12, 15, ... (stride 1.25) up to k_max. Lattices
/// whose recurrence has period two (Hexagonal, BondTranslated) use even k only.
inline std::vector<int> growth_sample_points(const LatticeSpec& spec, int k_max) {
    const bool even_only = spec.family() == Family::Hexagonal || spec.family() == Family::BondTranslated;
    std::vector<int> ks;
    const auto push = [&](int k) {
        if (even_only && k % 2 != 0) ++k;
        if (k > k_max) return;
        if (ks.empty() || k > ks.back()) ks.push_back(k);
    };
    for (double k = 8; k <= k_max; k = std::max(k + 1.0, std::round(k * kGrowthStride))) push(static_cast<int>(k));
    push(even_only ? k_max - (k_max % 2) : k_max);
    return ks;
}

namespace detail {

/// Intercept of the least-squares line y = a + b x.
inline double fit_intercept(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (x.size() < 2 || denom == 0.0) return sy / n;
    const double slope = (n * sxy - sx * sy) / denom;
    return (sy - slope * sx) / n;
}

// Fit log(n_k)/k against 1/k over the largest kGrowthFitPoints samples.
inline double extrapolate_rate(const std::vector<int>& ks, const std::vector<double>& logs) {
    const std::size_t first = ks.size() > kGrowthFitPoints ? ks.size() - kGrowthFitPoints : 0;
    std::vector<double> x, y;
    for (std::size_t i = first; i < ks.size(); ++i) {
        x.push_back(1.0 / ks[i]);
        y.push_back(logs[i] / ks[i]);
    }
    bool constant = true;
    for (double v : y) constant = constant && v == y.front();
    if (constant) return std::exp(y.front());
    return std::exp(fit_intercept(x, y));
}

} // namespace detail

/// Exponential growth rate of the path counts, extrapolated in 1/k from
/// exact big-integer counts.
inline GrowthEstimate growth_rate(const LatticeSpec& spec, int k_max) {
    if (k_max < 8) throw InvalidSpec("growth_rate needs k_max >= 8, got " + std::to_string(k_max));
    if (k_max > kGrowthMaxK) {
        throw BudgetExceeded("growth_rate counts are capped at k_max = " + std::to_string(kGrowthMaxK));
    }
    const std::vector<int> ks = growth_sample_points(spec, k_max);
    std::vector<double> arc_logs, total_logs;
    std::vector<GrowthSample> sequence;
    ArcRecurrence rec(spec);
    std::size_t next = 0;
    while (next < ks.size()) {
        rec.advance();
        if (rec.steps() != ks[next]) continue;
        const int k = rec.steps();
        const int arc = dominant_arc(spec, k);
        const double arc_log = log_bigint(rec.count_at(arc));
        const double total_log = log_bigint(rec.total());
        arc_logs.push_back(arc_log);
        total_logs.push_back(total_log);
        sequence.push_back({k, arc, std::exp(arc_log / k), std::exp(total_log / k)});
        ++next;
    }
    const double rate = detail::extrapolate_rate(ks, arc_logs);
    const double total_rate = detail::extrapolate_rate(ks, total_logs);
    return GrowthEstimate{spec,         k_max,      std::move(sequence),       rate,
                          1.0 / rate,   total_rate, 1.0 / total_rate,          formula_threshold(spec)};
}

} // namespace perc
