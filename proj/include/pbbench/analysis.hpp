#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbbench/logging.hpp"
#include "pbbench/util.hpp"

namespace pbbench {

inline constexpr double value_tolerance = 1e-9;  // raw-value comparisons

// One run as recorded in an info file.
struct RunInfo {
    std::string alg;
    int fid = 0;
    std::string fname;
    int dim = 0;
    int iid = 0;
    int rep = 0;
    long long seed = 0;
    long long budget = 0;
    long long evals_used = 0;
    double final_best_raw = 0;
    double final_best_transformed = 0;
    bool hit = false;
    std::optional<long long> hitting_time;
    std::filesystem::path dat_path;  // resolved against the info file location
    nlohmann::json instance;
};

struct EvalPoint {
    long long evaluations;
    double raw;
    double raw_best;
};

struct LoadReport {
    std::vector<std::string> warnings;
};

// Parses one dat file. Throws std::runtime_error naming the file and line on
// malformed content or non-monotone best-so-far values.
inline std::vector<EvalPoint> load_run_events(const RunInfo& run) {
    std::ifstream in(run.dat_path);
    if (!in) throw std::runtime_error("cannot open " + run.dat_path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("evaluations,", 0) != 0)
        throw std::runtime_error(run.dat_path.string() + ":1: missing header");
    std::vector<EvalPoint> events;
    long long line_no = 1;
    long long prev_evals = 0;
    double prev_best = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        const auto fail = [&](const char* what) {
            throw std::runtime_error(run.dat_path.string() + ":" + std::to_string(line_no) + ": " +
                                     what);
        };
        if (fields.size() < 5) fail("expected at least 5 columns");
        EvalPoint p{};
        try {
            p.evaluations = parse_int(fields[0]);
            p.raw = parse_double(fields[1]);
            p.raw_best = parse_double(fields[2]);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        if (p.evaluations <= prev_evals) fail("evaluation counts not increasing");
        if (p.raw_best < prev_best) fail("best-so-far value decreased");
        prev_evals = p.evaluations;
        prev_best = p.raw_best;
        events.push_back(p);
    }
    if (events.empty()) throw std::runtime_error(run.dat_path.string() + ": no data rows");
    return events;
}

// Indexed dataset. Loading validates every info record and its dat file;
// malformed entries are reported and skipped, dat rows are re-read lazily by
// the statistics below.
class DataSet {
public:
    static DataSet load(const std::filesystem::path& root, LoadReport* report = nullptr) {
        namespace fs = std::filesystem;
        DataSet ds;
        ds.root_ = root;
        const auto warn = [report](std::string msg) {
            if (report) report->warnings.push_back(std::move(msg));
        };
        if (!fs::exists(root)) throw std::runtime_error("no such dataset directory: " + root.string());
        std::vector<fs::path> info_files;
        for (const auto& entry : fs::recursive_directory_iterator(root))
            if (entry.is_regular_file() && entry.path().string().ends_with(".info.jsonl"))
                info_files.push_back(entry.path());
        std::sort(info_files.begin(), info_files.end());
        for (const auto& file : info_files) {
            std::ifstream in(file);
            std::string line;
            long long line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                RunInfo run;
                try {
                    const auto j = nlohmann::json::parse(line);
                    run.alg = j.at("alg").get<std::string>();
                    run.fid = j.at("fid").get<int>();
                    run.fname = j.value("fname", "");
                    run.dim = j.at("dim").get<int>();
                    run.iid = j.at("iid").get<int>();
                    run.rep = j.at("rep").get<int>();
                    run.seed = j.value("seed", 0ll);
                    run.budget = j.at("budget").get<long long>();
                    run.evals_used = j.at("evals_used").get<long long>();
                    run.final_best_raw = j.at("final_best_raw").get<double>();
                    run.final_best_transformed = j.value("final_best_transformed", 0.0);
                    run.hit = j.value("hit", false);
                    if (j.contains("hitting_time")) run.hitting_time = j.at("hitting_time").get<long long>();
                    run.dat_path = file.parent_path() / j.at("dat_path").get<std::string>();
                    run.instance = j.value("instance", nlohmann::json());
                } catch (const std::exception& e) {
                    warn(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
                    continue;
                }
                try {
                    load_run_events(run);
                } catch (const std::exception& e) {
                    warn(std::string(e.what()) + " (run excluded)");
                    continue;
                }
                ds.runs_.push_back(std::move(run));
            }
        }
        if (ds.runs_.empty()) throw std::runtime_error("no records in " + root.string());
        return ds;
    }

    std::span<const RunInfo> runs() const { return runs_; }
    const std::filesystem::path& root() const { return root_; }

    std::vector<const RunInfo*> select(std::optional<int> fid = std::nullopt,
                                       std::optional<int> dim = std::nullopt,
                                       std::optional<std::string> alg = std::nullopt) const {
        std::vector<const RunInfo*> out;
        for (const auto& r : runs_) {
            if (fid && r.fid != *fid) continue;
            if (dim && r.dim != *dim) continue;
            if (alg && r.alg != *alg) continue;
            out.push_back(&r);
        }
        return out;
    }

    std::vector<std::string> algorithms() const {
        std::set<std::string> s;
        for (const auto& r : runs_) s.insert(r.alg);
        return {s.begin(), s.end()};
    }

private:
    std::filesystem::path root_;
    std::vector<RunInfo> runs_;
};

// --- fixed-target statistics ---------------------------------------------------

// First evaluation count at which the run reached the target, or -1.
inline long long hit_time(std::span<const EvalPoint> events, double target) {
    for (const auto& p : events)
        if (p.raw_best >= target - value_tolerance) return p.evaluations;
    return -1;
}

struct ErtResult {
    double target = 0;
    int runs = 0;
    int successes = 0;
    double aht = std::numeric_limits<double>::infinity();
    long long budget = 0;
    double ert = std::numeric_limits<double>::infinity();
};

struct RunSeries {
    std::vector<EvalPoint> events;
    long long budget = 0;
};

// ERT = AHT + (r-s)/s * B over r runs with s successes; infinite when no run
// succeeds.
inline ErtResult ert_from_series(std::span<const RunSeries> series, double target, long long budget) {
    if (series.empty()) throw std::invalid_argument("ert_from_series: empty run group");
    ErtResult res;
    res.target = target;
    res.runs = static_cast<int>(series.size());
    res.budget = budget;
    double hit_sum = 0;
    for (const auto& s : series) {
        const long long t = hit_time(s.events, target);
        if (t > 0) {
            ++res.successes;
            hit_sum += static_cast<double>(t);
        }
    }
    if (res.successes > 0) {
        res.aht = hit_sum / res.successes;
        res.ert = res.aht + static_cast<double>(res.runs - res.successes) / res.successes *
                                static_cast<double>(budget);
    }
    return res;
}

inline std::vector<RunSeries> load_series(std::span<const RunInfo* const> group) {
    std::vector<RunSeries> series;
    series.reserve(group.size());
    for (const RunInfo* run : group) series.push_back({load_run_events(*run), run->budget});
    return series;
}

inline long long group_budget(std::span<const RunSeries> series) {
    long long b = 0;
    for (const auto& s : series) b = std::max(b, s.budget);
    return b;
}

inline ErtResult compute_ert(std::span<const RunInfo* const> group, double target) {
    const auto series = load_series(group);
    return ert_from_series(series, target, group_budget(series));
}

// ERT per ascending target; the success counts must be non-increasing.
inline std::vector<ErtResult> fixed_target_curve(std::span<const RunSeries> series,
                                                 std::span<const double> targets, long long budget) {
    if (!std::is_sorted(targets.begin(), targets.end()))
        throw std::invalid_argument("fixed_target_curve: targets must be ascending");
    std::vector<ErtResult> curve;
    int prev_successes = std::numeric_limits<int>::max();
    for (const double t : targets) {
        curve.push_back(ert_from_series(series, t, budget));
        if (curve.back().successes > prev_successes)
            throw std::logic_error("fixed_target_curve: success counts increased with the target");
        prev_successes = curve.back().successes;
    }
    return curve;
}

// Best-so-far raw value of one run at the given budget (step interpolation).
inline double best_at(std::span<const EvalPoint> events, long long budget) {
    double best = events.front().raw_best;
    for (const auto& p : events) {
        if (p.evaluations > budget) break;
        best = p.raw_best;
    }
    return best;
}

// Mean best raw value per budget across runs.
inline std::vector<double> fixed_budget_curve(std::span<const RunSeries> series,
                                              std::span<const long long> budgets) {
    if (budgets.empty()) throw std::invalid_argument("fixed_budget_curve: no budgets given");
    if (series.empty()) throw std::invalid_argument("fixed_budget_curve: empty run group");
    const long long max_budget = group_budget(series);
    std::vector<double> means;
    for (const long long b : budgets) {
        if (b < 1 || b > max_budget)
            throw std::invalid_argument("fixed_budget_curve: budget outside [1, max budget]");
        double sum = 0;
        for (const auto& s : series) sum += best_at(s.events, b);
        means.push_back(sum / static_cast<double>(series.size()));
    }
    return means;
}

// --- ECDF ------------------------------------------------------------------------

struct EcdfCurve {
    std::vector<long long> budgets;
    std::vector<double> fractions;
    long long total_pairs = 0;
};

// Fraction of (run, target) pairs achieved within each budget. `hits` holds
// one hitting time per pair, -1 for pairs never achieved.
inline EcdfCurve ecdf_from_hits(std::vector<long long> hits, std::span<const long long> budget_grid) {
    EcdfCurve curve;
    curve.total_pairs = static_cast<long long>(hits.size());
    std::sort(hits.begin(), hits.end());
    for (const long long b : budget_grid) {
        // hits in (0, b]
        const auto last = std::upper_bound(hits.begin(), hits.end(), b);
        const auto first = std::upper_bound(hits.begin(), hits.end(), 0ll);
        const auto count = first <= last ? last - first : 0;
        curve.budgets.push_back(b);
        curve.fractions.push_back(curve.total_pairs == 0
                                      ? 0.0
                                      : static_cast<double>(count) / static_cast<double>(curve.total_pairs));
    }
    return curve;
}

struct CellTargets {
    int fid = 0;
    int dim = 0;
    std::vector<double> targets;
};

// Ten equally spaced targets from the cell's lowest initial best-so-far value
// up to the best value any algorithm reached in the cell.
inline std::vector<double> default_cell_targets(const DataSet& ds, int fid, int dim, int count = 10) {
    const auto group = ds.select(fid, dim);
    if (group.empty())
        throw std::runtime_error("no runs for F" + std::to_string(fid) + " dim " + std::to_string(dim));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const RunInfo* run : group) {
        const auto events = load_run_events(*run);
        lo = std::min(lo, events.front().raw_best);
        hi = std::max(hi, run->final_best_raw);
    }
    std::vector<double> targets;
    for (int i = 0; i < count; ++i)
        targets.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return targets;
}

// Per-algorithm ECDF over the given cells on a shared budget grid. Every
// referenced cell must hold at least one run.
inline std::map<std::string, EcdfCurve> compute_ecdf(const DataSet& ds,
                                                     std::span<const CellTargets> cells,
                                                     std::span<const long long> budget_grid) {
    for (const auto& cell : cells)
        if (ds.select(cell.fid, cell.dim).empty())
            throw std::runtime_error("missing cell F" + std::to_string(cell.fid) + " dim " +
                                     std::to_string(cell.dim));
    std::map<std::string, std::vector<long long>> hits;
    for (const auto& cell : cells)
        for (const RunInfo* run : ds.select(cell.fid, cell.dim)) {
            const auto events = load_run_events(*run);
            auto& bucket = hits[run->alg];
            for (const double target : cell.targets) bucket.push_back(hit_time(events, target));
        }
    std::map<std::string, EcdfCurve> curves;
    for (auto& [alg, h] : hits) curves.emplace(alg, ecdf_from_hits(std::move(h), budget_grid));
    return curves;
}

// Geometric budget grid from 1 to max_budget (inclusive), deduplicated.
inline std::vector<long long> default_budget_grid(long long max_budget, int points = 50) {
    std::vector<long long> grid;
    for (int i = 0; i < points; ++i) {
        const double t = std::pow(static_cast<double>(max_budget),
                                  static_cast<double>(i) / static_cast<double>(points - 1));
        const auto b = static_cast<long long>(std::llround(t));
        if (grid.empty() || grid.back() != b) grid.push_back(b);
    }
    if (grid.empty() || grid.back() != max_budget) grid.push_back(max_budget);
    return grid;
}

// --- rankings and instance groups -------------------------------------------------

struct HitRankRow {
    std::string alg;
    long long hitting_number = 0;
    int rank = 1;
};

// Hitting number of an algorithm at one dimension: how many of its runs
// reached the best value recorded for the run's (fid, dim) cell. Ranked
// descending; ties share the better rank.
inline std::vector<HitRankRow> hitting_rank(const DataSet& ds, int dim) {
    std::map<int, double> cell_best;
    for (const auto& run : ds.runs()) {
        if (run.dim != dim) continue;
        auto [it, inserted] = cell_best.emplace(run.fid, run.final_best_raw);
        if (!inserted) it->second = std::max(it->second, run.final_best_raw);
    }
    std::map<std::string, long long> counts;
    for (const auto& run : ds.runs()) {
        if (run.dim != dim) continue;
        counts.try_emplace(run.alg, 0);
        if (run.final_best_raw >= cell_best.at(run.fid) - value_tolerance) ++counts.at(run.alg);
    }
    std::vector<HitRankRow> rows;
    for (const auto& [alg, count] : counts) rows.push_back({alg, count, 1});
    std::sort(rows.begin(), rows.end(), [](const HitRankRow& a, const HitRankRow& b) {
        return a.hitting_number != b.hitting_number ? a.hitting_number > b.hitting_number
                                                    : a.alg < b.alg;
    });
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& other : rows) rows[i].rank += other.hitting_number > rows[i].hitting_number;
    return rows;
}

struct FiveNumberSummary {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    int count = 0;
};

// Box-plot statistics with linearly interpolated (type-7) quartiles.
inline FiveNumberSummary five_number_summary(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("five_number_summary: empty group");
    std::sort(values.begin(), values.end());
    const auto quantile = [&values](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(h);
        if (lo + 1 >= values.size()) return values.back();
        return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
    };
    return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back(),
            static_cast<int>(values.size())};
}

// Final best raw values of one algorithm's runs on a cell, grouped by
// instance id partition.
inline std::vector<FiveNumberSummary> instance_group_summary(
    std::span<const RunInfo* const> cell_runs, std::span<const std::vector<int>> groups) {
    std::vector<FiveNumberSummary> out;
    for (const auto& group : groups) {
        std::vector<double> values;
        for (const RunInfo* run : cell_runs)
            if (std::find(group.begin(), group.end(), run->iid) != group.end())
                values.push_back(run->final_best_raw);
        if (values.empty()) throw std::runtime_error("instance group matched no runs");
        out.push_back(five_number_summary(std::move(values)));
    }
    return out;
}

}  // namespace pbbench
