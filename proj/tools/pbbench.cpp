// Command-line front end: runs experiment grids and turns the recorded
// datasets into CSV statistics.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbbench/analysis.hpp"
#include "pbbench/algorithms.hpp"
#include "pbbench/experiment.hpp"
#include "pbbench/problems.hpp"
#include "pbbench/targets.hpp"
#include "pbbench/util.hpp"
#include "pbbench/version.hpp"

namespace {

using namespace pbbench;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_partial = 2;

std::string normalize_algorithm(const std::string& name) {
    for (const auto& info : algorithm_catalog())
        if (name == info.display_name) return std::string(info.id);
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower;
}

std::vector<std::string> parse_algorithms(const std::string& spec) {
    std::vector<std::string> ids;
    for (const auto part : split(spec, ',')) {
        if (part.empty()) continue;
        const std::string name(part);
        if (name == "all") {
            for (const auto& info : algorithm_catalog()) ids.emplace_back(info.id);
            continue;
        }
        ids.push_back(normalize_algorithm(name));
    }
    return ids;
}

std::string default_output_dir() {
    if (const char* env = std::getenv("BENCH_OUT")) return env;
    return "bench_out";
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    return out;
}

int cmd_run(const std::string& config_path, std::string algo_spec, std::string fid_spec,
            std::string dim_spec, std::string iid_spec, int reps, int extra1, long long budget,
            long long seed, std::string log_mode, std::string out_dir, int jobs,
            const CLI::App& app) {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << "\n";
            return exit_usage;
        }
        cfg = config_from_json(nlohmann::json::parse(in));
    } else {
        cfg.fids.resize(function_count);
        for (int i = 0; i < function_count; ++i) cfg.fids[static_cast<std::size_t>(i)] = i + 1;
    }
    const auto given = [&app](const std::string& flag) { return app.count(flag) > 0; };
    if (given("--algo")) cfg.algorithms = parse_algorithms(algo_spec);
    if (given("--fid")) cfg.fids = parse_int_ranges(fid_spec);
    if (given("--dim")) cfg.dims = parse_int_ranges(dim_spec);
    if (given("--iid")) cfg.iids = parse_int_ranges(iid_spec);
    if (given("--reps")) cfg.repetitions = reps;
    if (given("--extra-inst1-reps")) cfg.extra_instance1_reps = extra1;
    if (given("--budget")) cfg.budget_override = budget;
    if (given("--seed")) cfg.master_seed = seed;
    if (given("--log-mode")) cfg.log_mode = log_mode_from_string(log_mode);
    if (given("--out"))
        cfg.output_dir = out_dir;
    else if (cfg.output_dir.empty())
        cfg.output_dir = default_output_dir();
    if (given("--jobs")) cfg.jobs = jobs;

    ExperimentSummary summary;
    try {
        validate_config(cfg);
        summary = run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    for (const auto& line : summary.run_lines) std::cout << line << "\n";
    std::cout << summary.runs_completed << " runs written to " << cfg.output_dir;
    if (!summary.errors.empty()) std::cout << " (" << summary.errors.size() << " cells failed)";
    std::cout << "\n";
    return summary.errors.empty() ? exit_ok : exit_partial;
}

std::vector<int> present_values(const DataSet& ds, bool fids) {
    std::set<int> s;
    for (const auto& r : ds.runs()) s.insert(fids ? r.fid : r.dim);
    return {s.begin(), s.end()};
}

int cmd_analyze_ert(const DataSet& ds, int fid, int dim, const std::string& target_spec,
                    const std::string& out_path) {
    const auto cell = ds.select(fid, dim);
    if (cell.empty()) throw std::runtime_error("no runs for the requested cell");
    std::vector<double> targets;
    if (target_spec == "best-found") {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto* r : cell) best = std::max(best, r->final_best_raw);
        targets.push_back(best);
    } else {
        for (const auto part : split(target_spec, ','))
            if (!part.empty()) targets.push_back(parse_double(part));
        std::sort(targets.begin(), targets.end());
    }
    auto out = open_csv(out_path);
    out << "alg,fid,dim,target,runs,successes,aht,ert\n";
    for (const auto& alg : ds.algorithms()) {
        const auto group = ds.select(fid, dim, alg);
        if (group.empty()) continue;
        const auto series = load_series(group);
        for (const double target : targets) {
            const auto res = ert_from_series(series, target, group_budget(series));
            std::string row = alg;
            row += ',';
            append_number(row, static_cast<long long>(fid));
            row += ',';
            append_number(row, static_cast<long long>(dim));
            row += ',';
            append_number(row, res.target);
            row += ',';
            append_number(row, static_cast<long long>(res.runs));
            row += ',';
            append_number(row, static_cast<long long>(res.successes));
            row += ',';
            append_number(row, res.aht);
            row += ',';
            append_number(row, res.ert);
            out << row << "\n";
        }
    }
    return exit_ok;
}

int cmd_analyze_ecdf(const DataSet& ds, std::string fid_spec, std::string dim_spec,
                     std::string budget_spec, const std::string& out_path) {
    const auto fids = fid_spec.empty() ? present_values(ds, true) : parse_int_ranges(fid_spec);
    const auto dims = dim_spec.empty() ? present_values(ds, false) : parse_int_ranges(dim_spec);
    std::vector<CellTargets> cells;
    long long max_budget = 0;
    for (const int dim : dims)
        for (const int fid : fids) {
            CellTargets cell{fid, dim, default_cell_targets(ds, fid, dim)};
            for (const auto* r : ds.select(fid, dim)) max_budget = std::max(max_budget, r->budget);
            cells.push_back(std::move(cell));
        }
    std::vector<long long> grid;
    if (!budget_spec.empty()) {
        for (const auto part : split(budget_spec, ','))
            if (!part.empty()) grid.push_back(parse_int(part));
        std::sort(grid.begin(), grid.end());
    } else {
        grid = default_budget_grid(max_budget);
    }
    const auto curves = compute_ecdf(ds, cells, grid);
    auto out = open_csv(out_path);
    out << "alg,budget,fraction\n";
    for (const auto& [alg, curve] : curves)
        for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
            std::string row = alg;
            row += ',';
            append_number(row, curve.budgets[i]);
            row += ',';
            append_number(row, curve.fractions[i]);
            out << row << "\n";
        }
    return exit_ok;
}

int cmd_analyze_fixed_budget(const DataSet& ds, int fid, int dim, std::string budget_spec,
                             const std::string& out_path) {
    std::vector<long long> budgets;
    if (!budget_spec.empty()) {
        for (const auto part : split(budget_spec, ','))
            if (!part.empty()) budgets.push_back(parse_int(part));
        std::sort(budgets.begin(), budgets.end());
    } else {
        long long max_budget = 0;
        for (const auto* r : ds.select(fid, dim)) max_budget = std::max(max_budget, r->budget);
        if (max_budget == 0) throw std::runtime_error("no runs for the requested cell");
        budgets = default_budget_grid(max_budget);
    }
    auto out = open_csv(out_path);
    out << "alg,fid,dim,budget,mean_best_raw\n";
    for (const auto& alg : ds.algorithms()) {
        const auto group = ds.select(fid, dim, alg);
        if (group.empty()) continue;
        const auto series = load_series(group);
        const auto means = fixed_budget_curve(series, budgets);
        for (std::size_t i = 0; i < budgets.size(); ++i) {
            std::string row = alg;
            row += ',';
            append_number(row, static_cast<long long>(fid));
            row += ',';
            append_number(row, static_cast<long long>(dim));
            row += ',';
            append_number(row, budgets[i]);
            row += ',';
            append_number(row, means[i]);
            out << row << "\n";
        }
    }
    return exit_ok;
}

int cmd_analyze_rank(const DataSet& ds, int dim, const std::string& out_path) {
    const auto rows = hitting_rank(ds, dim);
    if (rows.empty()) throw std::runtime_error("no runs at the requested dimension");
    auto out = open_csv(out_path);
    out << "alg,dim,hitting_number,rank\n";
    for (const auto& r : rows) {
        std::string row = r.alg;
        row += ',';
        append_number(row, static_cast<long long>(dim));
        row += ',';
        append_number(row, r.hitting_number);
        row += ',';
        append_number(row, static_cast<long long>(r.rank));
        out << row << "\n";
    }
    return exit_ok;
}

int cmd_analyze_groups(const DataSet& ds, int fid, int dim, const std::string& group_spec,
                       const std::string& alg_filter, const std::string& out_path) {
    std::vector<std::vector<int>> groups;
    std::vector<std::string> group_names;
    for (const auto part : split(group_spec, ';'))
        if (!part.empty()) {
            groups.push_back(parse_int_ranges(part));
            group_names.emplace_back(part);
        }
    if (groups.empty()) throw std::runtime_error("no instance groups given");
    auto algs = ds.algorithms();
    if (!alg_filter.empty()) algs = {normalize_algorithm(alg_filter)};
    auto out = open_csv(out_path);
    out << "alg,fid,dim,group,count,min,q1_type7,median_type7,q3_type7,max\n";
    for (const auto& alg : algs) {
        const auto cell = ds.select(fid, dim, alg);
        if (cell.empty()) continue;
        const auto summaries = instance_group_summary(cell, groups);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto& s = summaries[g];
            std::string row = alg;
            row += ',';
            append_number(row, static_cast<long long>(fid));
            row += ',';
            append_number(row, static_cast<long long>(dim));
            row += ',';
            row += group_names[g];
            row += ',';
            append_number(row, static_cast<long long>(s.count));
            row += ',';
            append_number(row, s.min);
            row += ',';
            append_number(row, s.q1);
            row += ',';
            append_number(row, s.median);
            row += ',';
            append_number(row, s.q3);
            row += ',';
            append_number(row, s.max);
            out << row << "\n";
        }
    }
    return exit_ok;
}

int cmd_list() {
    std::cout << "algorithms (id: display name)\n";
    for (const auto& info : algorithm_catalog())
        std::cout << "  " << info.id << ": " << info.display_name << "\n";
    std::cout << "functions (fid: name)\n";
    for (int fid = 1; fid <= function_count; ++fid)
        std::cout << "  F" << fid << ": " << function_name(fid) << "\n";
    std::cout << "instances: 1 (plain), 2-6 (xor mask + affine values), 51-55 (permutation + "
                 "affine values)\n";
    return exit_ok;
}

int cmd_targets(int dim) {
    const bool with_reference = reference_target(1, dim).has_value();
    std::cout << (with_reference ? "fid,name,optimum,target\n" : "fid,name,optimum\n");
    for (int fid = 1; fid <= function_count; ++fid) {
        std::string row = std::to_string(fid);
        row += ',';
        row += function_name(fid);
        row += ',';
        std::optional<double> optimum;
        try {
            optimum = ProblemInstance::create(fid, dim, 1).optimum();
        } catch (const std::exception&) {
            // dimension not admissible for this function
        }
        if (optimum) append_number(row, *optimum);
        if (with_reference) {
            row += ',';
            append_number(row, *reference_target(fid, dim));
        }
        std::cout << row << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark suite for iterative optimization heuristics on bit strings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(suite_name) + " " + suite_version);

    // run
    auto* run = app.add_subcommand("run", "execute an experiment grid and write a dataset");
    std::string config_path, algo_spec, fid_spec, dim_spec, iid_spec, log_mode = "delta";
    std::string out_dir, format = "csv";
    int reps = 1, extra1 = 0, jobs = 0;
    long long budget = 0, seed = 1;
    run->add_option("--config", config_path, "experiment config JSON file");
    run->add_option("--algo", algo_spec, "algorithm ids, comma separated, or 'all'");
    run->add_option("--fid", fid_spec, "function ids, e.g. 1-6,11,23 (default all)");
    run->add_option("--dim", dim_spec, "dimensions (default 16,64,100,625)");
    run->add_option("--iid", iid_spec, "instance ids (default 1-6,51-55)");
    run->add_option("--reps", reps, "repetitions per (algorithm, fid, dim, iid)");
    run->add_option("--extra-inst1-reps", extra1, "additional repetitions on instance 1 only");
    run->add_option("--budget", budget, "evaluation budget per run (default 100n^2, 5n^2 above n=100)");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--log-mode", log_mode, "delta (improvements + final row) or full");
    run->add_option("--out", out_dir, "output directory (default $BENCH_OUT or ./bench_out)");
    run->add_option("--jobs", jobs, "worker threads (default: hardware)");
    run->add_option("--format", format, "output format (csv)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "compute statistics from a dataset");
    analyze->require_subcommand(1);
    std::string data_dir, out_path, target_spec = "best-found", budget_spec, group_spec = "1;1-6,51-55";
    std::string alg_filter, a_fid_spec, a_dim_spec;
    int fid = 0, dim = 0;
    auto add_common = [&](CLI::App* sub, const char* default_out) {
        sub->add_option("--data", data_dir, "dataset directory")->required();
        sub->add_option("--out", out_path, std::string("output CSV path (default ") + default_out + ")");
        sub->add_option("--format", format, "output format (csv)");
    };
    auto* ert = analyze->add_subcommand("ert", "expected running times for fixed targets");
    add_common(ert, "ert.csv");
    ert->add_option("--fid", fid, "function id")->required();
    ert->add_option("--dim", dim, "dimension")->required();
    ert->add_option("--target", target_spec, "target values (comma separated) or 'best-found'");

    auto* ecdf = analyze->add_subcommand("ecdf", "aggregated ECDF curves over problem cells");
    add_common(ecdf, "ecdf.csv");
    ecdf->add_option("--fids", a_fid_spec, "function ids (default: all in dataset)");
    ecdf->add_option("--dims", a_dim_spec, "dimensions (default: all in dataset)");
    ecdf->add_option("--budgets", budget_spec, "budget grid (default: geometric)");

    auto* fixed = analyze->add_subcommand("fixed-budget", "mean best value per budget");
    add_common(fixed, "fixed_budget.csv");
    fixed->add_option("--fid", fid, "function id")->required();
    fixed->add_option("--dim", dim, "dimension")->required();
    fixed->add_option("--budgets", budget_spec, "budgets (default: geometric grid)");

    auto* rank = analyze->add_subcommand("rank", "hitting numbers and ranks per algorithm");
    add_common(rank, "hitting_rank.csv");
    rank->add_option("--dim", dim, "dimension")->required();

    auto* groups = analyze->add_subcommand("groups", "final-value quartiles per instance group");
    add_common(groups, "instance_groups.csv");
    groups->add_option("--fid", fid, "function id")->required();
    groups->add_option("--dim", dim, "dimension")->required();
    groups->add_option("--groups", group_spec, "instance groups, ';' separated (default '1;1-6,51-55')");
    groups->add_option("--alg", alg_filter, "restrict to one algorithm");

    // list, targets
    auto* list = app.add_subcommand("list", "list algorithms, functions and instances");
    auto* targets = app.add_subcommand("targets", "print known optima and reference targets");
    targets->add_option("--dim", dim, "dimension")->required();

    CLI11_PARSE(app, argc, argv);

    if (format != "csv") {
        std::cerr << "error: unsupported output format '" << format << "'\n";
        return exit_usage;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, algo_spec, fid_spec, dim_spec, iid_spec, reps, extra1, budget,
                           seed, log_mode, out_dir, jobs, *run);
        if (list->parsed()) return cmd_list();
        if (targets->parsed()) return cmd_targets(dim);
        if (analyze->parsed()) {
            const DataSet ds = DataSet::load(data_dir);
            if (ert->parsed())
                return cmd_analyze_ert(ds, fid, dim, target_spec,
                                       out_path.empty() ? "ert.csv" : out_path);
            if (ecdf->parsed())
                return cmd_analyze_ecdf(ds, a_fid_spec, a_dim_spec, budget_spec,
                                        out_path.empty() ? "ecdf.csv" : out_path);
            if (fixed->parsed())
                return cmd_analyze_fixed_budget(ds, fid, dim, budget_spec,
                                                out_path.empty() ? "fixed_budget.csv" : out_path);
            if (rank->parsed())
                return cmd_analyze_rank(ds, dim, out_path.empty() ? "hitting_rank.csv" : out_path);
            if (groups->parsed())
                return cmd_analyze_groups(ds, fid, dim, group_spec, alg_filter,
                                          out_path.empty() ? "instance_groups.csv" : out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
