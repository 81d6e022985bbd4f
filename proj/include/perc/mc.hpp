#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "perc/error.hpp"
#include "perc/lattice.hpp"
#include "perc/patch.hpp"
#include "perc/rng.hpp"
#include "perc/threshold.hpp"
#include "perc/union_find.hpp"

namespace perc {

enum class Mode { Site, Bond };

inline const char* to_string(Mode m) { return m == Mode::Site ? "site" : "bond"; }

inline Mode parse_mode(const std::string& text) {
    if (text == "site") return Mode::Site;
    if (text == "bond") return Mode::Bond;
    throw InvalidConfig("mode must be 'site' or 'bond', got '" + text + "'");
}

struct TrialConfig {
    LatticeSpec lattice;
    Mode mode = Mode::Site;
    int radius = 1;
    double p = 0.5;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
};

struct CrossingEstimate {
    TrialConfig config;
    std::uint64_t successes = 0;
    double p_hat = 0;
    double ci_half_width = 0;  // 95% normal approximation
    double elapsed_seconds = 0;
};

inline constexpr int kMaxBondSitePatchDimension = 4;

/// Worker count: PERC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("PERC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline void validate(const TrialConfig& c) {
    if (c.trials < 1) throw InvalidConfig("trials must be >= 1");
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw InvalidConfig("p must lie in [0, 1], got " + std::to_string(c.p));
    if (c.radius < 1) throw InvalidConfig("radius k must be >= 1");
    if (c.lattice.family() == Family::BondTranslated && c.lattice.dimension() > kMaxBondSitePatchDimension) {
        throw InvalidConfig("bond-translated patches are limited to d <= " +
                            std::to_string(kMaxBondSitePatchDimension));
    }
}

namespace detail {

// One trial on a prebuilt patch. Element e (site index in Site mode, edge
// index in Bond mode) is open iff its uniform draw is below p, so for a fixed
// key the success event is monotone in p.
class TrialRunner {
public:
    explicit TrialRunner(const Patch& patch) : patch_(patch), uf_(patch.site_count()) {}

    bool run(Mode mode, double p, std::uint64_t key) {
        uf_.reset(patch_.site_count());
        if (mode == Mode::Site) {
            if (!(rng::uniform(key, patch_.origin) < p)) return false;
            open_.resize(patch_.site_count());
            for (std::size_t s = 0; s < open_.size(); ++s) open_[s] = rng::uniform(key, s) < p;
            for (std::size_t e = 0; e < patch_.edge_count(); ++e) {
                if (open_[patch_.edge_a[e]] && open_[patch_.edge_b[e]]) uf_.unite(patch_.edge_a[e], patch_.edge_b[e]);
            }
            const auto root = uf_.find(patch_.origin);
            for (auto t : patch_.targets) {
                if (open_[t] && uf_.find(t) == root) return true;
            }
            return false;
        }
        for (std::size_t e = 0; e < patch_.edge_count(); ++e) {
            if (rng::uniform(key, e) < p) uf_.unite(patch_.edge_a[e], patch_.edge_b[e]);
        }
        const auto root = uf_.find(patch_.origin);
        for (auto t : patch_.targets) {
            if (uf_.find(t) == root) return true;
        }
        return false;
    }

private:
    const Patch& patch_;
    UnionFind uf_;
    std::vector<char> open_;
};

} // namespace detail

/// Runs `trials` independent trials on a prebuilt patch and returns the
/// success count. Trial t draws from stream derive(seed, t), so the result
/// does not depend on the number of threads.
inline std::uint64_t count_crossings(const Patch& patch, Mode mode, double p, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads = default_thread_count()) {
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(trials, 1)));
    std::vector<std::uint64_t> partial(threads, 0);
    const auto work = [&](unsigned w) {
        detail::TrialRunner runner(patch);
        std::uint64_t hits = 0;
        for (std::uint64_t t = w; t < trials; t += threads) hits += runner.run(mode, p, rng::derive(seed, t)) ? 1 : 0;
        partial[w] = hits;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::uint64_t total = 0;
    for (auto h : partial) total += h;
    return total;
}

inline double binomial_ci_half_width(double p_hat, std::uint64_t trials) {
    return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

/// Estimates the probability that the origin is open (Site mode) and joined by
/// open elements to the outer arc of the radius-k patch.
inline CrossingEstimate run_trials(const TrialConfig& config, unsigned threads = default_thread_count()) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const Patch patch = build_patch(config.lattice, config.radius);
    CrossingEstimate est;
    est.config = config;
    est.successes = count_crossings(patch, config.mode, config.p, config.trials, config.seed, threads);
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(config.trials);
    est.ci_half_width = binomial_ci_half_width(est.p_hat, config.trials);
    est.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return est;
}

struct Probe {
    double p = 0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double p_hat = 0;
};

struct ThresholdEstimate {
    LatticeSpec lattice;
    Mode mode = Mode::Site;
    int radius = 0;
    std::uint64_t trials_per_probe = 0;
    std::uint64_t seed = 0;
    double level = 0.5;
    double threshold = 0;
    double sigma = 0;  // statistical uncertainty of threshold
    std::optional<Probe> lower;  // last bisection probe below level
    std::optional<Probe> upper;  // last bisection probe at or above level
    std::vector<Probe> probes;   // bisection probes then the two slope probes
};

inline constexpr int kBisectionSteps = 12;
inline constexpr double kSlopeOffset = 0.02;
inline constexpr double kMonotoneSigmas = 5.0;

namespace detail {

inline void check_monotone(const std::vector<Probe>& probes) {
    for (const Probe& a : probes) {
        for (const Probe& b : probes) {
            if (!(a.p < b.p) || !(a.p_hat > b.p_hat)) continue;
            const double var = a.p_hat * (1 - a.p_hat) / static_cast<double>(a.trials) +
                               b.p_hat * (1 - b.p_hat) / static_cast<double>(b.trials);
            if (a.p_hat - b.p_hat > kMonotoneSigmas * std::sqrt(var)) {
                throw NonMonotoneSignal("crossing probability fell from " + std::to_string(a.p_hat) + " at p=" +
                                        std::to_string(a.p) + " to " + std::to_string(b.p_hat) + " at p=" +
                                        std::to_string(b.p) + "; increase trials_per_probe");
            }
        }
    }
}

} // namespace detail

/// Bisection on p for the point where the origin-to-arc crossing probability
/// reaches `level`. Each probe uses its own sub-stream of `seed`. Two extra
/// probes at threshold +/- kSlopeOffset measure the local slope, which turns
/// the binomial noise at the crossing point into a threshold uncertainty.
inline ThresholdEstimate estimate_threshold(const LatticeSpec& spec, Mode mode, int radius,
                                            std::uint64_t trials_per_probe, std::uint64_t seed,
                                            double level = 0.5, unsigned threads = default_thread_count()) {
    if (radius < 16) throw InvalidConfig("threshold estimation needs k >= 16");
    if (trials_per_probe < 500) throw InvalidConfig("threshold estimation needs >= 500 trials per probe");
    if (!(level > 0.0 && level < 1.0)) throw InvalidConfig("crossing level must lie in (0, 1)");
    validate(TrialConfig{spec, mode, radius, 0.5, trials_per_probe, seed});

    const Patch patch = build_patch(spec, radius);
    ThresholdEstimate est;
    est.lattice = spec;
    est.mode = mode;
    est.radius = radius;
    est.trials_per_probe = trials_per_probe;
    est.seed = seed;
    est.level = level;

    std::uint64_t probe_index = 0;
    const auto probe = [&](double p) {
        const std::uint64_t hits = count_crossings(patch, mode, p, trials_per_probe, rng::derive(seed, probe_index++), threads);
        Probe pr{p, hits, trials_per_probe, static_cast<double>(hits) / static_cast<double>(trials_per_probe)};
        est.probes.push_back(pr);
        return pr;
    };

    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (lo + hi);
        const Probe pr = probe(mid);
        if (pr.p_hat < level) {
            lo = mid;
            est.lower = pr;
        } else {
            hi = mid;
            est.upper = pr;
        }
    }
    est.threshold = 0.5 * (lo + hi);

    const double p_minus = std::max(0.0, est.threshold - kSlopeOffset);
    const double p_plus = std::min(1.0, est.threshold + kSlopeOffset);
    const Probe below = probe(p_minus);
    const Probe above = probe(p_plus);
    const double slope = (above.p_hat - below.p_hat) / (p_plus - p_minus);
    const double noise = std::sqrt(level * (1.0 - level) / static_cast<double>(trials_per_probe));
    est.sigma = slope > 0 ? noise / slope : p_plus - p_minus;

    detail::check_monotone(est.probes);
    return est;
}

/// One MC threshold to set against a closed-form value.
struct ThresholdMeasurement {
    std::string label;        // e.g. "zd:2 site"
    std::string formula_key;  // lattice name whose formula applies
    double estimate = 0;
    double sigma = 0;
    int radius = 0;
    std::uint64_t trials_per_probe = 0;
    std::uint64_t seed = 0;
};

/// Lattice whose closed-form threshold a simulation should be compared with:
/// itself for site percolation, BondTranslated(d) for bond percolation on Z^d.
inline std::optional<LatticeSpec> formula_lattice(const LatticeSpec& spec, Mode mode) {
    if (mode == Mode::Site) return spec;
    if (spec.family() == Family::Zd) return LatticeSpec::bond_translated(spec.dimension(), 1);
    return std::nullopt;
}

inline ThresholdMeasurement to_measurement(const ThresholdEstimate& est) {
    const auto key = formula_lattice(est.lattice, est.mode);
    return ThresholdMeasurement{est.lattice.name() + " " + to_string(est.mode),
                                key ? key->name() : std::string(),
                                est.threshold,
                                est.sigma,
                                est.radius,
                                est.trials_per_probe,
                                est.seed};
}

struct ComparisonRow {
    std::string label;
    std::string formula_lattice;
    double formula = 0;
    double estimate = 0;
    double sigma = 0;
    double gap = 0;
    double gap_sigmas = 0;
    bool flag = false;
    int radius = 0;
    std::uint64_t trials_per_probe = 0;
    std::uint64_t seed = 0;
};

struct ComparisonReport {
    double flag_sigmas = 3.0;
    double level = 0.5;
    std::vector<ComparisonRow> rows;
};

/// Sets each measurement against the formula keyed by its lattice. Rows keep
/// the input order and are never dropped; gap > 3 sigma raises the flag.
inline ComparisonReport compare(const std::vector<ThresholdFormula>& formulas,
                                const std::vector<ThresholdMeasurement>& measurements, double level = 0.5) {
    ComparisonReport report;
    report.level = level;
    for (const ThresholdMeasurement& m : measurements) {
        const auto it = std::find_if(formulas.begin(), formulas.end(),
                                     [&](const ThresholdFormula& f) { return f.lattice.name() == m.formula_key; });
        if (it == formulas.end()) {
            throw KeyMismatch("no formula for '" + m.formula_key + "' (row '" + m.label + "')");
        }
        ComparisonRow row;
        row.label = m.label;
        row.formula_lattice = m.formula_key;
        row.formula = it->p_h;
        row.estimate = m.estimate;
        row.sigma = m.sigma;
        row.gap = std::abs(m.estimate - it->p_h);
        row.gap_sigmas = m.sigma > 0 ? row.gap / m.sigma : std::numeric_limits<double>::infinity();
        row.flag = row.gap > report.flag_sigmas * m.sigma;
        row.radius = m.radius;
        row.trials_per_probe = m.trials_per_probe;
        row.seed = m.seed;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace perc
