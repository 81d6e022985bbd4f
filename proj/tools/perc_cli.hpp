#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "perc/perc.hpp"
#include "perc/serialize.hpp"

namespace perc::cli {

// Exit-code contract: 0 success, 2 usage, 3 verification mismatch, 4 budget.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kMismatch = 3, kBudget = 4 };

using io::Json;
namespace fs = std::filesystem;

struct Common {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string format = "csv";
};

inline void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "PRNG seed (echoed in every output)")->capture_default_str();
    sub->add_option("--out-dir", c.out_dir, "directory for data files and the run manifest")->capture_default_str();
    sub->add_option("--format", c.format, "data file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Records one invocation. Written beside the data files as
/// <stem>.manifest.json; `perc replay` re-runs from it.
class Manifest {
public:
    Manifest(std::string subcommand, const Common& common)
        : subcommand_(std::move(subcommand)), common_(common), started_(utc_timestamp()),
          clock_(std::chrono::steady_clock::now()) {}

    void param(const std::string& flag, Json value) { params_[flag] = std::move(value); }

    fs::path output(const std::string& filename) {
        fs::path p = fs::path(common_.out_dir) / filename;
        outputs_.push_back(p.string());
        return p;
    }

    void write(const std::string& stem) const {
        Json params = params_;
        params["seed"] = common_.seed;
        params["out-dir"] = common_.out_dir;
        params["format"] = common_.format;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_).count();
        Json doc{{"tool", "perc"},
                 {"version", kVersion},
                 {"subcommand", subcommand_},
                 {"parameters", params},
                 {"seed", common_.seed},
                 {"threads", default_thread_count()},
                 {"started_at", started_},
                 {"elapsed_seconds", elapsed},
                 {"outputs", outputs_}};
        io::write_file_atomic(fs::path(common_.out_dir) / (stem + ".manifest.json"), io::dump(doc));
    }

private:
    std::string subcommand_;
    Common common_;
    std::string started_;
    std::chrono::steady_clock::time_point clock_;
    Json params_ = Json::object();
    std::vector<std::string> outputs_;
};

// ---- count ---------------------------------------------------------------

struct CountOptions {
    Common common;
    std::string lattice;
    int k = 0;
    std::string method = "recurrence";
    std::uint64_t budget = kDefaultExpansionBudget;
};

inline int cmd_count(const CountOptions& o, std::ostream& out, std::ostream& err) {
    if (o.k < 1) {
        err << "count: --k must be >= 1\n";
        return kUsage;
    }
    const LatticeSpec spec = parse_lattice(o.lattice);
    Manifest manifest("count", o.common);
    manifest.param("lattice", spec.name());
    manifest.param("k", o.k);
    manifest.param("method", o.method);
    manifest.param("budget", o.budget);

    const std::string stem = "count_" + io::file_stem(spec) + "_k" + std::to_string(o.k);
    const auto write_table = [&](const PathCountTable& t, const std::string& name) {
        const bool json = o.common.format == "json";
        io::write_file_atomic(manifest.output(name + (json ? ".json" : ".csv")), json ? io::dump(io::to_json(t)) : io::to_csv(t));
    };

    int code = kOk;
    PathCountTable shown;
    if (o.method == "recurrence") {
        shown = count_recurrence(spec, o.k);
        write_table(shown, stem);
    } else if (o.method == "bruteforce") {
        shown = count_bruteforce(spec, o.k, o.budget);
        write_table(shown, stem);
    } else {
        shown = count_recurrence(spec, o.k);
        const PathCountTable brute = count_bruteforce(spec, o.k, o.budget);
        write_table(shown, stem);
        write_table(brute, stem + "_bruteforce");
        const std::string diff = io::diff_tables(shown, brute);
        io::write_file_atomic(manifest.output(stem + "_diff.txt"), diff);
        if (!diff.empty()) {
            err << "count: recurrence and brute force disagree:\n" << diff;
            code = kMismatch;
        }
    }
    manifest.write(stem);
    out << spec.name() << " k=" << o.k << " total=" << shown.total().str() << "\n";
    for (const auto& [arc, n] : shown.counts) out << "  arc " << arc << ": " << n.str() << "\n";
    return code;
}

// ---- limits --------------------------------------------------------------

struct LimitsOptions {
    Common common;
    std::string lattice;
    int k_max = 1000;
};

inline int cmd_limits(const LimitsOptions& o, std::ostream& out, std::ostream&) {
    const LatticeSpec spec = parse_lattice(o.lattice);
    Manifest manifest("limits", o.common);
    manifest.param("lattice", spec.name());
    manifest.param("k-max", o.k_max);
    const GrowthEstimate g = growth_rate(spec, o.k_max);
    const std::string stem = "limits_" + io::file_stem(spec);
    if (o.common.format == "json") {
        io::write_file_atomic(manifest.output(stem + ".json"), io::dump(io::to_json(g)));
    } else {
        io::write_file_atomic(manifest.output(stem + ".csv"), io::to_csv(g));
        io::write_file_atomic(manifest.output(stem + "_summary.csv"), io::summary_csv(g));
    }
    manifest.write(stem);
    out << spec.name() << " k_max=" << o.k_max << " rate=" << io::fixed9(g.extrapolated_rate)
        << " reciprocal=" << io::fixed9(g.reciprocal) << " formula=" << io::fixed9(g.formula.p_h)
        << " total_reciprocal=" << io::fixed9(g.total_reciprocal) << "\n";
    return kOk;
}

// ---- mc ------------------------------------------------------------------

struct McOptions {
    Common common;
    std::string lattice;
    std::string mode = "site";
    int k = 64;
    std::optional<double> p;
    bool scan = false;
    std::uint64_t trials = 2000;
    double level = 0.5;
};

inline int cmd_mc(const McOptions& o, std::ostream& out, std::ostream& err) {
    if (o.scan == o.p.has_value()) {
        err << "mc: give exactly one of --p or --scan\n";
        return kUsage;
    }
    const LatticeSpec spec = parse_lattice(o.lattice);
    const Mode mode = parse_mode(o.mode);
    Manifest manifest("mc", o.common);
    manifest.param("lattice", spec.name());
    manifest.param("mode", o.mode);
    manifest.param("k", o.k);
    if (o.p) manifest.param("p", *o.p);
    manifest.param("scan", o.scan);
    manifest.param("trials", o.trials);
    manifest.param("level", o.level);
    const bool json = o.common.format == "json";
    std::string stem = "mc_" + io::file_stem(spec) + "_" + o.mode + "_k" + std::to_string(o.k);

    if (o.p) {
        const CrossingEstimate e = run_trials(TrialConfig{spec, mode, o.k, *o.p, o.trials, o.common.seed});
        io::write_file_atomic(manifest.output(stem + (json ? ".json" : ".csv")), json ? io::dump(io::to_json(e)) : io::to_csv(e));
        manifest.write(stem);
        out << spec.name() << " " << o.mode << " k=" << o.k << " p=" << io::fixed6(*o.p) << " p_hat=" << io::fixed6(e.p_hat)
            << " +/- " << io::fixed6(e.ci_half_width) << " seed=" << o.common.seed << "\n";
        return kOk;
    }

    stem += "_scan";
    const ThresholdEstimate e = estimate_threshold(spec, mode, o.k, o.trials, o.common.seed, o.level);
    if (json) {
        io::write_file_atomic(manifest.output(stem + ".json"), io::dump(io::to_json(e)));
    } else {
        io::write_file_atomic(manifest.output(stem + ".csv"), io::to_csv(e));
        io::write_file_atomic(manifest.output(stem + "_probes.csv"), io::probes_csv(e));
    }
    manifest.write(stem);
    out << spec.name() << " " << o.mode << " k=" << o.k << " threshold=" << io::fixed6(e.threshold)
        << " sigma=" << io::fixed6(e.sigma) << " seed=" << o.common.seed << "\n";
    return kOk;
}

// ---- compare -------------------------------------------------------------

struct CompareOptions {
    Common common;
    std::vector<std::string> inputs;
    std::uint64_t trials = 2000;
    int k = 64;
    int k3 = 24;
    double level = 0.5;
};

struct SuiteEntry {
    LatticeSpec lattice;
    Mode mode;
    bool three_d;
};

/// Default comparison suite: every family that has an MC counterpart.
inline std::vector<SuiteEntry> default_suite() {
    return {{LatticeSpec::zd(2), Mode::Site, false},     {LatticeSpec::zd(3), Mode::Site, true},
            {LatticeSpec::triangular(), Mode::Site, false}, {LatticeSpec::hexagonal(), Mode::Site, false},
            {LatticeSpec::zd(2), Mode::Bond, false},     {LatticeSpec::bond_translated(2), Mode::Site, false}};
}

inline int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
    Manifest manifest("compare", o.common);
    std::vector<ThresholdMeasurement> measurements;
    if (!o.inputs.empty()) {
        manifest.param("input", o.inputs);
        for (const std::string& path : o.inputs) {
            if (!fs::exists(path)) {
                err << "compare: missing input file '" << path << "'\n";
                return kUsage;
            }
            Json doc;
            try {
                doc = Json::parse(io::read_file(path));
                measurements.push_back(io::measurement_from_json(doc));
            } catch (const Json::exception& ex) {
                err << "compare: '" << path << "' is not a threshold-scan JSON file: " << ex.what() << "\n";
                return kUsage;
            }
        }
    } else {
        manifest.param("trials", o.trials);
        manifest.param("k", o.k);
        manifest.param("k3", o.k3);
        manifest.param("level", o.level);
        for (const SuiteEntry& s : default_suite()) {
            const int radius = s.three_d ? o.k3 : o.k;
            measurements.push_back(to_measurement(estimate_threshold(s.lattice, s.mode, radius, o.trials, o.common.seed, o.level)));
        }
    }
    std::vector<ThresholdFormula> formulas;
    for (const ThresholdMeasurement& m : measurements) {
        if (m.formula_key.empty()) throw KeyMismatch("row '" + m.label + "' has no closed-form counterpart");
        formulas.push_back(formula_threshold(parse_lattice(m.formula_key)));
    }
    const ComparisonReport report = compare(formulas, measurements, o.level);
    const std::string stem = "compare_report";
    const bool json = o.common.format == "json";
    io::write_file_atomic(manifest.output(stem + (json ? ".json" : ".csv")), json ? io::dump(io::to_json(report)) : io::to_csv(report));
    manifest.write(stem);
    for (const ComparisonRow& r : report.rows) {
        out << r.label << ": formula " << io::fixed6(r.formula) << " mc " << io::fixed6(r.estimate) << " +/- "
            << io::fixed6(r.sigma) << (r.flag ? "  FLAG" : "") << "\n";
    }
    return kOk;
}

// ---- entry point ---------------------------------------------------------

int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// Rebuilds the argument list recorded in a manifest.
inline std::vector<std::string> replay_args(const Json& manifest, const std::optional<std::string>& out_dir) {
    std::vector<std::string> args{manifest.at("subcommand").get<std::string>()};
    for (const auto& [flag, value] : manifest.at("parameters").items()) {
        if (flag == "out-dir" && out_dir) {
            args.push_back("--out-dir");
            args.push_back(*out_dir);
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                args.push_back("--" + flag);
                args.push_back(v.get<std::string>());
            }
        } else if (value.is_string()) {
            args.push_back("--" + flag);
            args.push_back(value.get<std::string>());
        } else {
            args.push_back("--" + flag);
            args.push_back(value.dump());
        }
    }
    return args;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact up-path counts, threshold limits and Monte Carlo percolation checks", "perc"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CountOptions count;
    auto* count_cmd = app.add_subcommand("count", "exact k-step up-path counts per terminal arc");
    count_cmd->add_option("--lattice", count.lattice, std::string(kLatticeGrammar))->required();
    count_cmd->add_option("--k", count.k, "number of up-steps (>= 1)")->required();
    count_cmd->add_option("--method", count.method)->check(CLI::IsMember({"recurrence", "bruteforce", "both"}))->capture_default_str();
    count_cmd->add_option("--budget", count.budget, "node-expansion cap for brute force")->capture_default_str();
    add_common(count_cmd, count.common);

    LimitsOptions limits;
    auto* limits_cmd = app.add_subcommand("limits", "growth-rate limits versus closed-form thresholds");
    limits_cmd->add_option("--lattice", limits.lattice, std::string(kLatticeGrammar))->required();
    limits_cmd->add_option("--k-max", limits.k_max)->capture_default_str();
    add_common(limits_cmd, limits.common);

    McOptions mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo origin-to-arc crossing probability");
    mc_cmd->add_option("--lattice", mc.lattice, std::string(kLatticeGrammar))->required();
    mc_cmd->add_option("--mode", mc.mode)->check(CLI::IsMember({"site", "bond"}))->capture_default_str();
    mc_cmd->add_option("--k", mc.k, "patch radius")->capture_default_str();
    mc_cmd->add_option("--p", mc.p, "open probability");
    mc_cmd->add_flag("--scan", mc.scan, "bisect for the crossing threshold");
    mc_cmd->add_option("--trials", mc.trials)->capture_default_str();
    mc_cmd->add_option("--level", mc.level, "crossing probability defining the threshold")->capture_default_str();
    add_common(mc_cmd, mc.common);

    CompareOptions cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "formula thresholds versus MC estimates");
    cmp_cmd->add_option("--input", cmp.inputs, "threshold-scan JSON files from `mc --scan --format json`");
    cmp_cmd->add_option("--trials", cmp.trials, "trials per probe for the default suite")->capture_default_str();
    cmp_cmd->add_option("--k", cmp.k, "patch radius for 2D lattices in the default suite")->capture_default_str();
    cmp_cmd->add_option("--k3", cmp.k3, "patch radius for 3D lattices in the default suite")->capture_default_str();
    cmp_cmd->add_option("--level", cmp.level)->capture_default_str();
    add_common(cmp_cmd, cmp.common);

    std::string manifest_path;
    std::optional<std::string> replay_out_dir;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a recorded manifest");
    replay_cmd->add_option("--manifest", manifest_path)->required();
    replay_cmd->add_option("--out-dir", replay_out_dir, "override the recorded output directory");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "perc: " << e.what() << "\n";
        err << "run 'perc --help' for usage\n";
        return kUsage;
    }

    try {
        if (count_cmd->parsed()) return cmd_count(count, out, err);
        if (limits_cmd->parsed()) return cmd_limits(limits, out, err);
        if (mc_cmd->parsed()) return cmd_mc(mc, out, err);
        if (cmp_cmd->parsed()) return cmd_compare(cmp, out, err);
        if (replay_cmd->parsed()) {
            if (!fs::exists(manifest_path)) {
                err << "replay: missing manifest '" << manifest_path << "'\n";
                return kUsage;
            }
            const Json doc = Json::parse(io::read_file(manifest_path));
            return run(replay_args(doc, replay_out_dir), out, err);
        }
    } catch (const InvalidSpec& e) {
        err << "perc: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidConfig& e) {
        err << "perc: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "perc: " << e.what() << "\n";
        return kUsage;
    } catch (const KeyMismatch& e) {
        err << "perc: " << e.what() << "\n";
        return kUsage;
    } catch (const NonMonotoneSignal& e) {
        err << "perc: " << e.what() << "\n";
        return kMismatch;
    } catch (const BudgetExceeded& e) {
        err << "perc: " << e.what() << "\n";
        return kBudget;
    } catch (const MemoryBudgetExceeded& e) {
        err << "perc: " << e.what() << "\n";
        return kBudget;
    } catch (const std::exception& e) {
        err << "perc: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

} // namespace perc::cli
