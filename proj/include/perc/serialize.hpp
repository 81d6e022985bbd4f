#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "perc/exact_count.hpp"
#include "perc/mc.hpp"
#include "perc/threshold.hpp"

namespace perc::io {

using Json = nlohmann::ordered_json;

// CSV: header row, comma separated, LF endings. JSON: one document per file,
// snake_case keys, counts as decimal strings, probabilities rounded to 6
// decimals.

inline std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string fixed9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    return buf;
}

inline double round6(double x) {
    if (!std::isfinite(x)) return x;
    return std::round(x * 1e6) / 1e6;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Lattice name made safe for file names ("zd:2" -> "zd-2").
inline std::string file_stem(const LatticeSpec& spec) {
    std::string s = spec.name();
    for (char& c : s) {
        if (c == ':') c = '-';
    }
    return s;
}

// ---- path counts ---------------------------------------------------------

inline std::string to_csv(const PathCountTable& t) {
    std::string out = "k,arc,count\n";
    for (const auto& [arc, n] : t.counts) out += std::to_string(t.k) + "," + std::to_string(arc) + "," + n.str() + "\n";
    return out;
}

inline Json to_json(const PathCountTable& t) {
    Json counts = Json::array();
    for (const auto& [arc, n] : t.counts) counts.push_back({{"arc", arc}, {"count", n.str()}});
    return Json{{"lattice", t.lattice.name()}, {"k", t.k}, {"total", t.total().str()}, {"counts", counts}};
}

inline PathCountTable table_from_json(const Json& j) {
    PathCountTable t{parse_lattice(j.at("lattice").get<std::string>()), j.at("k").get<int>(), {}};
    for (const auto& row : j.at("counts")) t.counts.emplace(row.at("arc").get<int>(), BigInt(row.at("count").get<std::string>()));
    return t;
}

/// Lines "arc,left,right" for every arc where the two tables disagree;
/// empty when they agree key by key.
inline std::string diff_tables(const PathCountTable& left, const PathCountTable& right) {
    std::string out;
    if (left.k != right.k || !(left.lattice == right.lattice)) {
        out += "# tables differ in lattice or k: " + left.lattice.name() + " k=" + std::to_string(left.k) + " vs " +
               right.lattice.name() + " k=" + std::to_string(right.k) + "\n";
    }
    std::map<int, std::pair<BigInt, BigInt>> merged;
    for (const auto& [arc, n] : left.counts) merged[arc].first = n;
    for (const auto& [arc, n] : right.counts) merged[arc].second = n;
    for (const auto& [arc, pair] : merged) {
        if (pair.first != pair.second) out += std::to_string(arc) + "," + pair.first.str() + "," + pair.second.str() + "\n";
    }
    return out;
}

// ---- growth limits -------------------------------------------------------

inline Json to_json(const GrowthEstimate& g) {
    Json seq = Json::array();
    for (const GrowthSample& s : g.sequence) {
        seq.push_back({{"k", s.k}, {"arc", s.arc}, {"arc_rate", s.arc_rate}, {"total_rate", s.total_rate}});
    }
    return Json{{"lattice", g.lattice.name()},
                {"k_max", g.k_max},
                {"formula_p_h", g.formula.p_h},
                {"formula_provenance", to_string(g.formula.provenance)},
                {"extrapolated_rate", g.extrapolated_rate},
                {"reciprocal", g.reciprocal},
                {"reciprocal_gap", std::abs(g.reciprocal - g.formula.p_h)},
                {"total_extrapolated_rate", g.total_extrapolated_rate},
                {"total_reciprocal", g.total_reciprocal},
                {"fit", {{"points", kGrowthFitPoints}, {"stride", kGrowthStride}, {"abscissa", "1/k"}}},
                {"sequence", seq}};
}

inline std::string to_csv(const GrowthEstimate& g) {
    std::string out = "k,arc,arc_rate,total_rate\n";
    for (const GrowthSample& s : g.sequence) {
        out += std::to_string(s.k) + "," + std::to_string(s.arc) + "," + fixed9(s.arc_rate) + "," + fixed9(s.total_rate) + "\n";
    }
    return out;
}

inline std::string summary_csv(const GrowthEstimate& g) {
    std::string out = "lattice,k_max,formula_p_h,extrapolated_rate,reciprocal,total_extrapolated_rate,total_reciprocal\n";
    out += g.lattice.name() + "," + std::to_string(g.k_max) + "," + fixed9(g.formula.p_h) + "," +
           fixed9(g.extrapolated_rate) + "," + fixed9(g.reciprocal) + "," + fixed9(g.total_extrapolated_rate) + "," +
           fixed9(g.total_reciprocal) + "\n";
    return out;
}

// ---- Monte Carlo ---------------------------------------------------------

inline Json to_json(const CrossingEstimate& e) {
    return Json{{"lattice", e.config.lattice.name()},
                {"mode", to_string(e.config.mode)},
                {"k", e.config.radius},
                {"p", round6(e.config.p)},
                {"trials", e.config.trials},
                {"seed", e.config.seed},
                {"successes", e.successes},
                {"p_hat", round6(e.p_hat)},
                {"ci_half_width", round6(e.ci_half_width)}};
}

inline std::string to_csv(const CrossingEstimate& e) {
    return "lattice,mode,k,p,trials,seed,successes,p_hat,ci_half_width\n" + e.config.lattice.name() + "," +
           to_string(e.config.mode) + "," + std::to_string(e.config.radius) + "," + fixed6(e.config.p) + "," +
           std::to_string(e.config.trials) + "," + std::to_string(e.config.seed) + "," +
           std::to_string(e.successes) + "," + fixed6(e.p_hat) + "," + fixed6(e.ci_half_width) + "\n";
}

inline Json to_json(const Probe& p) {
    return Json{{"p", round6(p.p)}, {"trials", p.trials}, {"successes", p.successes}, {"p_hat", round6(p.p_hat)}};
}

inline Json to_json(const ThresholdEstimate& e) {
    Json probes = Json::array();
    for (const Probe& p : e.probes) probes.push_back(to_json(p));
    const auto key = formula_lattice(e.lattice, e.mode);
    return Json{{"lattice", e.lattice.name()},
                {"mode", to_string(e.mode)},
                {"formula_lattice", key ? key->name() : ""},
                {"k", e.radius},
                {"trials_per_probe", e.trials_per_probe},
                {"seed", e.seed},
                {"criterion", "p_hat crosses level"},
                {"level", round6(e.level)},
                {"threshold", round6(e.threshold)},
                {"sigma", round6(e.sigma)},
                {"lower", e.lower ? to_json(*e.lower) : Json(nullptr)},
                {"upper", e.upper ? to_json(*e.upper) : Json(nullptr)},
                {"probes", probes}};
}

inline std::string to_csv(const ThresholdEstimate& e) {
    const auto probe_cols = [](const std::optional<Probe>& p) {
        return p ? fixed6(p->p) + "," + fixed6(p->p_hat) : std::string(",");
    };
    return "lattice,mode,k,trials_per_probe,seed,level,threshold,sigma,lower_p,lower_p_hat,upper_p,upper_p_hat\n" +
           e.lattice.name() + "," + to_string(e.mode) + "," + std::to_string(e.radius) + "," +
           std::to_string(e.trials_per_probe) + "," + std::to_string(e.seed) + "," + fixed6(e.level) + "," +
           fixed6(e.threshold) + "," + fixed6(e.sigma) + "," + probe_cols(e.lower) + "," + probe_cols(e.upper) + "\n";
}

inline std::string probes_csv(const ThresholdEstimate& e) {
    std::string out = "probe,p,trials,successes,p_hat\n";
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const Probe& p = e.probes[i];
        out += std::to_string(i) + "," + fixed6(p.p) + "," + std::to_string(p.trials) + "," +
               std::to_string(p.successes) + "," + fixed6(p.p_hat) + "\n";
    }
    return out;
}

/// Reads the fields of a threshold-estimate JSON document that compare needs.
inline ThresholdMeasurement measurement_from_json(const Json& j) {
    ThresholdMeasurement m;
    m.label = j.at("lattice").get<std::string>() + " " + j.at("mode").get<std::string>();
    m.formula_key = j.at("formula_lattice").get<std::string>();
    m.estimate = j.at("threshold").get<double>();
    m.sigma = j.at("sigma").get<double>();
    m.radius = j.at("k").get<int>();
    m.trials_per_probe = j.at("trials_per_probe").get<std::uint64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    return m;
}

inline Json to_json(const ComparisonReport& r) {
    Json rows = Json::array();
    for (const ComparisonRow& row : r.rows) {
        rows.push_back({{"label", row.label},
                        {"formula_lattice", row.formula_lattice},
                        {"formula", round6(row.formula)},
                        {"estimate", round6(row.estimate)},
                        {"sigma", round6(row.sigma)},
                        {"gap", round6(row.gap)},
                        {"gap_sigmas", std::isfinite(row.gap_sigmas) ? Json(round6(row.gap_sigmas)) : Json("inf")},
                        {"flag", row.flag},
                        {"k", row.radius},
                        {"trials_per_probe", row.trials_per_probe},
                        {"seed", row.seed}});
    }
    return Json{{"criterion", "p_hat crosses level"}, {"level", round6(r.level)}, {"flag_sigmas", r.flag_sigmas}, {"rows", rows}};
}

inline std::string to_csv(const ComparisonReport& r) {
    std::string out = "label,formula_lattice,formula,estimate,sigma,gap,gap_sigmas,flag,k,trials_per_probe,seed\n";
    for (const ComparisonRow& row : r.rows) {
        out += row.label + "," + row.formula_lattice + "," + fixed6(row.formula) + "," + fixed6(row.estimate) + "," +
               fixed6(row.sigma) + "," + fixed6(row.gap) + "," +
               (std::isfinite(row.gap_sigmas) ? fixed6(row.gap_sigmas) : std::string("inf")) + "," +
               (row.flag ? "true" : "false") + "," + std::to_string(row.radius) + "," +
               std::to_string(row.trials_per_probe) + "," + std::to_string(row.seed) + "\n";
    }
    return out;
}

} // namespace perc::io
