#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pbbench/algorithms.hpp"
#include "pbbench/logging.hpp"
#include "pbbench/problems.hpp"
#include "pbbench/version.hpp"

namespace pbbench {

// Grid definition for one experiment. The dataset bytes written by
// run_experiment are a pure function of these fields; output_dir and jobs
// only steer where and how fast the work happens.
struct ExperimentConfig {
    std::vector<std::string> algorithms;
    std::vector<int> fids;
    std::vector<int> dims{16, 64, 100, 625};
    std::vector<int> iids{1, 2, 3, 4, 5, 6, 51, 52, 53, 54, 55};
    int repetitions = 1;            // runs per (algorithm, fid, dim, iid)
    int extra_instance1_reps = 0;   // additional runs appended on instance 1 only
    long long budget_override = 0;  // 0 = protocol default
    long long master_seed = 1;
    LogMode log_mode = LogMode::delta;
    std::string output_dir;
    int jobs = 0;  // 0 = hardware concurrency
};

// Protocol budget: 100 n^2 evaluations up to n = 100, 5 n^2 beyond.
inline long long default_budget(int dim) {
    const long long n = dim;
    return dim <= 100 ? 100 * n * n : 5 * n * n;
}

namespace detail {
inline std::int32_t seed_fold(std::int32_t state, std::uint64_t value) {
    auto s = static_cast<std::int32_t>((static_cast<std::uint64_t>(state) + value) % 2147483647ull);
    if (s == 0) s = 1;
    Rng mixer(s);
    mixer.next();
    mixer.next();
    return mixer.next();
}
}  // namespace detail

// Folds the run coordinates into one generator seed; checked collision-free
// over the default grid.
inline std::int32_t derive_run_seed(long long master_seed, int alg_index, int fid, int dim, int iid,
                                    int rep) {
    auto s = static_cast<std::int32_t>(((master_seed % 2147483647) + 2147483647) % 2147483647);
    if (s == 0) s = 1;
    s = detail::seed_fold(s, static_cast<std::uint64_t>(alg_index) + 1);
    s = detail::seed_fold(s, static_cast<std::uint64_t>(fid));
    s = detail::seed_fold(s, static_cast<std::uint64_t>(dim));
    s = detail::seed_fold(s, static_cast<std::uint64_t>(iid));
    s = detail::seed_fold(s, static_cast<std::uint64_t>(rep));
    return s;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["format"] = data_format;
    j["algorithms"] = cfg.algorithms;
    j["fids"] = cfg.fids;
    j["dims"] = cfg.dims;
    j["iids"] = cfg.iids;
    j["repetitions"] = cfg.repetitions;
    j["extra_instance1_reps"] = cfg.extra_instance1_reps;
    j["budget"] = cfg.budget_override;
    j["master_seed"] = cfg.master_seed;
    j["log_mode"] = to_string(cfg.log_mode);
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("format") && j.at("format").get<int>() != data_format)
        throw std::invalid_argument("unsupported config format revision");
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    cfg.fids = j.at("fids").get<std::vector<int>>();
    if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("iids")) cfg.iids = j.at("iids").get<std::vector<int>>();
    if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
    if (j.contains("extra_instance1_reps"))
        cfg.extra_instance1_reps = j.at("extra_instance1_reps").get<int>();
    if (j.contains("budget")) cfg.budget_override = j.at("budget").get<long long>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<long long>();
    if (j.contains("log_mode")) cfg.log_mode = log_mode_from_string(j.at("log_mode").get<std::string>());
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    return cfg;
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.algorithms.empty()) throw std::invalid_argument("config: no algorithms selected");
    for (const auto& id : cfg.algorithms)
        if (algorithm_index(id) < 0) {
            make_algorithm(id, 16);  // throws with the list of valid ids
        }
    if (cfg.fids.empty()) throw std::invalid_argument("config: no function ids selected");
    for (const int fid : cfg.fids)
        if (fid < 1 || fid > function_count)
            throw std::invalid_argument("config: unknown function id " + std::to_string(fid));
    if (cfg.dims.empty()) throw std::invalid_argument("config: no dimensions selected");
    for (const int dim : cfg.dims)
        if (dim < 1) throw std::invalid_argument("config: dimensions must be positive");
    if (cfg.iids.empty()) throw std::invalid_argument("config: no instance ids selected");
    for (const int iid : cfg.iids)
        if (!valid_iid(iid))
            throw std::invalid_argument("config: instance id must lie in 1..6 or 51..55");
    if (cfg.repetitions < 1) throw std::invalid_argument("config: repetitions must be positive");
    if (cfg.extra_instance1_reps < 0)
        throw std::invalid_argument("config: extra_instance1_reps must be non-negative");
    if (cfg.budget_override < 0) throw std::invalid_argument("config: budget must be positive");
    if (cfg.master_seed < 0) throw std::invalid_argument("config: master seed must be non-negative");
    if (cfg.output_dir.empty()) throw std::invalid_argument("config: output directory not set");
}

struct RunTask {
    int alg_index;  // position in cfg.algorithms
    int fid;
    int dim;
    int iid;
    int rep;
};

// Grid cells in canonical order: algorithm, fid, dim, iid, repetition.
// Instance 1 additionally receives cfg.extra_instance1_reps repetitions.
inline std::vector<RunTask> enumerate_tasks(const ExperimentConfig& cfg) {
    std::vector<RunTask> tasks;
    for (int ai = 0; ai < static_cast<int>(cfg.algorithms.size()); ++ai)
        for (const int fid : cfg.fids)
            for (const int dim : cfg.dims)
                for (const int iid : cfg.iids) {
                    const int reps = cfg.repetitions + (iid == 1 ? cfg.extra_instance1_reps : 0);
                    for (int rep = 1; rep <= reps; ++rep) tasks.push_back({ai, fid, dim, iid, rep});
                }
    return tasks;
}

struct CellError {
    RunTask task;
    std::string message;
};

struct ExperimentSummary {
    long long runs_completed = 0;
    std::vector<CellError> errors;
    std::vector<std::string> run_lines;  // one line per task, in grid order
};

namespace detail {

struct CompletedRun {
    RunTask task;
    std::int32_t seed = 0;
    long long budget = 0;
    RunResult result;
    std::string dat_rel_path;
    nlohmann::json instance_descriptor;
    std::string error;  // non-empty when the cell failed
};

inline std::string cell_stem(int fid, int dim) {
    return "F" + std::to_string(fid) + "_D" + std::to_string(dim);
}

inline std::string dat_name(int iid, int rep) {
    return "iid" + std::to_string(iid) + "_rep" + std::to_string(rep) + ".dat";
}

}  // namespace detail

// Executes the full grid and writes the dataset:
//   <out>/config.json                      echo of the experiment definition
//   <out>/<alg>/F<fid>_D<dim>.info.jsonl   one JSON line per run
//   <out>/<alg>/F<fid>_D<dim>/iid<i>_rep<r>.dat   per-evaluation CSV
//   <out>/errors.jsonl                     per-cell failures, if any
// Runs execute concurrently; all files are byte-identical for identical
// configs regardless of the number of jobs.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    validate_config(cfg);
    const fs::path out_root(cfg.output_dir);
    fs::create_directories(out_root);

    // Instances are shared by every algorithm and repetition of a grid cell.
    std::map<std::tuple<int, int, int>, std::variant<std::shared_ptr<const ProblemInstance>, std::string>>
        instances;
    for (const int fid : cfg.fids)
        for (const int dim : cfg.dims)
            for (const int iid : cfg.iids) {
                try {
                    instances.emplace(std::make_tuple(fid, dim, iid),
                                      std::make_shared<const ProblemInstance>(
                                          ProblemInstance::create(fid, dim, iid, cfg.master_seed)));
                } catch (const std::exception& e) {
                    instances.emplace(std::make_tuple(fid, dim, iid), std::string(e.what()));
                }
            }

    const std::vector<RunTask> tasks = enumerate_tasks(cfg);

    for (const auto& task : tasks) {
        fs::create_directories(out_root / cfg.algorithms[static_cast<std::size_t>(task.alg_index)] /
                               detail::cell_stem(task.fid, task.dim));
    }

    std::vector<detail::CompletedRun> completed(tasks.size());
    std::atomic<std::size_t> next_task{0};
    std::atomic<long long> done_count{0};

    const auto worker = [&]() {
        for (;;) {
            const std::size_t t = next_task.fetch_add(1);
            if (t >= tasks.size()) return;
            const RunTask task = tasks[t];
            detail::CompletedRun& slot = completed[t];
            slot.task = task;
            const std::string& alg_id = cfg.algorithms[static_cast<std::size_t>(task.alg_index)];
            try {
                const auto& entry = instances.at(std::make_tuple(task.fid, task.dim, task.iid));
                if (std::holds_alternative<std::string>(entry))
                    throw std::invalid_argument(std::get<std::string>(entry));
                const auto& instance = *std::get<std::shared_ptr<const ProblemInstance>>(entry);

                slot.seed = derive_run_seed(cfg.master_seed, algorithm_index(alg_id), task.fid,
                                            task.dim, task.iid, task.rep);
                slot.budget = cfg.budget_override > 0 ? cfg.budget_override : default_budget(task.dim);
                slot.dat_rel_path =
                    detail::cell_stem(task.fid, task.dim) + "/" + detail::dat_name(task.iid, task.rep);
                slot.instance_descriptor = instance.descriptor();

                const fs::path dat_path = out_root / alg_id / slot.dat_rel_path;
                std::ofstream dat(dat_path);
                if (!dat) throw std::runtime_error("cannot open " + dat_path.string());
                auto algorithm = make_algorithm(alg_id, task.dim);
                DatLogger logger(dat, cfg.log_mode, algorithm->parameter_names());
                Rng rng(slot.seed);
                slot.result = execute_run(*algorithm, instance, slot.budget, rng, &logger);
                dat.flush();
                if (!dat) throw std::runtime_error("write failed for " + dat_path.string());
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
            ++done_count;
        }
    };

    unsigned thread_count = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                         : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(tasks.size()) + 1);
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < thread_count; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Single-threaded manifest pass, in grid order.
    ExperimentSummary summary;
    std::map<std::pair<int, std::string>, std::ofstream> info_files;  // (alg_index, cell stem)
    for (const auto& run : completed) {
        const std::string& alg_id = cfg.algorithms[static_cast<std::size_t>(run.task.alg_index)];
        std::string line = alg_id + " F" + std::to_string(run.task.fid) + " D" +
                           std::to_string(run.task.dim) + " iid" + std::to_string(run.task.iid) +
                           " rep" + std::to_string(run.task.rep);
        if (!run.error.empty()) {
            summary.errors.push_back({run.task, run.error});
            summary.run_lines.push_back(line + ": ERROR " + run.error);
            continue;
        }
        nlohmann::json j;
        j["format"] = data_format;
        j["suite_version"] = suite_version;
        j["alg"] = alg_id;
        j["fid"] = run.task.fid;
        j["fname"] = function_name(run.task.fid);
        j["dim"] = run.task.dim;
        j["iid"] = run.task.iid;
        j["rep"] = run.task.rep;
        j["seed"] = run.seed;
        j["budget"] = run.budget;
        j["evals_used"] = run.result.evals_used;
        j["final_best_raw"] = run.result.best_raw;
        j["final_best_transformed"] = run.result.best_transformed;
        j["hit"] = run.result.hit;
        if (run.result.hit) j["hitting_time"] = run.result.hitting_time;
        j["dat_path"] = run.dat_rel_path;
        j["instance"] = run.instance_descriptor;

        const auto key = std::make_pair(run.task.alg_index, detail::cell_stem(run.task.fid, run.task.dim));
        auto it = info_files.find(key);
        if (it == info_files.end()) {
            const fs::path path = out_root / alg_id / (key.second + ".info.jsonl");
            it = info_files.emplace(key, std::ofstream(path)).first;
            if (!it->second) throw std::runtime_error("cannot open " + path.string());
        }
        it->second << j.dump() << '\n';

        line += ": best_raw=" + format_number(run.result.best_raw) +
                " evals=" + std::to_string(run.result.evals_used) + (run.result.hit ? " hit" : "");
        summary.run_lines.push_back(line);
        ++summary.runs_completed;
    }
    for (auto& [key, stream] : info_files) {
        stream.flush();
        if (!stream) throw std::runtime_error("write failed for an info file");
    }

    if (!summary.errors.empty()) {
        std::ofstream err(out_root / "errors.jsonl");
        for (const auto& e : summary.errors) {
            nlohmann::json j;
            j["alg"] = cfg.algorithms[static_cast<std::size_t>(e.task.alg_index)];
            j["fid"] = e.task.fid;
            j["dim"] = e.task.dim;
            j["iid"] = e.task.iid;
            j["rep"] = e.task.rep;
            j["error"] = e.message;
            err << j.dump() << '\n';
        }
    }

    std::ofstream cfg_echo(out_root / "config.json");
    cfg_echo << config_to_json(cfg).dump(2) << '\n';
    if (!cfg_echo) throw std::runtime_error("write failed for config.json");

    return summary;
}

}  // namespace pbbench
