// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 7-9 execute real experiment grids and take a few minutes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pbbench/analysis.hpp"
#include "pbbench/algorithms.hpp"
#include "pbbench/experiment.hpp"
#include "pbbench/problems.hpp"

using namespace pbbench;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::string label;
    std::function<void(std::string&)> body;  // appends failure notes; empty = pass
};

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("pbbench_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

void expect(std::string& notes, bool ok, const std::string& what) {
    if (!ok) notes += (notes.empty() ? "" : "; ") + what;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::set<fs::path> rel_a, rel_b;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel_a.insert(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) rel_b.insert(fs::relative(e.path(), b));
    if (rel_a != rel_b) {
        why = "file lists differ";
        return false;
    }
    for (const auto& rel : rel_a)
        if (slurp(a / rel) != slurp(b / rel)) {
            why = "bytes differ in " + rel.string();
            return false;
        }
    return true;
}

RunResult run_one(std::string_view alg, const ProblemInstance& inst, long long budget,
                  long long seed) {
    auto algorithm = make_algorithm(alg, inst.dimension());
    Rng rng(seed);
    return execute_run(*algorithm, inst, budget, rng);
}

long long labs_energy_reference(const BitString& x) {
    const int n = static_cast<int>(x.size());
    long long energy = 0;
    for (int k = 1; k < n; ++k) {
        long long corr = 0;
        for (int i = 0; i + k < n; ++i)
            corr += (x[static_cast<std::size_t>(i)] ? 1 : -1) *
                    (x[static_cast<std::size_t>(i + k)] ? 1 : -1);
        energy += corr * corr;
    }
    return energy;
}

// --- criteria -------------------------------------------------------------------

void criterion_worked_examples(std::string& notes) {
    expect(notes,
           bits_to_string(reduce_dummy(bits_from_string("1010101010"), {0, 1, 3, 6, 9})) == "10010",
           "dummy reduction example");
    expect(notes, bits_to_string(apply_neutrality(bits_from_string("1110101110"), 3)) == "101",
           "neutrality example");
    expect(notes, bits_to_string(apply_epistasis(bits_from_string("1111011101"), 4)) == "1110000110",
           "epistasis example");
    const char* table[16][2] = {
        {"0000", "0000"}, {"0001", "1101"}, {"0010", "1011"}, {"0011", "0110"},
        {"0100", "0111"}, {"0101", "1010"}, {"0110", "1100"}, {"0111", "0001"},
        {"1000", "1111"}, {"1001", "0010"}, {"1010", "0100"}, {"1011", "1001"},
        {"1100", "1000"}, {"1101", "0101"}, {"1110", "0011"}, {"1111", "1110"}};
    for (const auto& [in, out] : table)
        expect(notes, bits_to_string(apply_epistasis(bits_from_string(in), 4)) == out,
               std::string("e4(") + in + ")");
}

void criterion_known_optima(std::string& notes) {
    const auto check = [&notes](int fid, int dim, double expected) {
        const auto inst = ProblemInstance::create(fid, dim, 1);
        expect(notes, inst.optimum_known() && inst.optimum_raw() == expected,
               "F" + std::to_string(fid) + "(" + std::to_string(dim) + ")");
    };
    check(1, 64, 64);
    check(2, 64, 64);
    check(3, 64, 2080);
    check(4, 625, 312);
    check(5, 625, 562);
    check(6, 64, 21);
    check(6, 625, 208);
    check(8, 64, 33);
    check(9, 64, 64);
    check(19, 64, 128);
    check(21, 64, 384);
    check(23, 64, 8);

    // exhaustive check of the independent-set optimum at n=10
    const auto mivs = ProblemInstance::create(22, 10, 1);
    double best = -1e18;
    BitString x(10, 0);
    for (int v = 0; v < (1 << 10); ++v) {
        for (int b = 0; b < 10; ++b) x[static_cast<std::size_t>(b)] = (v >> b) & 1;
        best = std::max(best, mivs.evaluate(x).raw);
    }
    expect(notes, best == 6.0 && mivs.optimum_raw() == 6.0, "F22(10) exhaustive");
}

void criterion_ghc_bound(std::string& notes) {
    for (const int n : {16, 64, 100, 625}) {
        const auto inst = ProblemInstance::create(1, n, 1);
        for (long long seed = 1; seed <= 11; ++seed) {
            const auto res = run_one("ghc", inst, default_budget(n), seed);
            expect(notes, res.hit && res.hitting_time <= n + 1,
                   "n=" + std::to_string(n) + " seed " + std::to_string(seed) + " took " +
                       std::to_string(res.hitting_time));
            if (!notes.empty()) return;
        }
    }
}

void criterion_rls_hitting_time(std::string& notes) {
    const auto inst = ProblemInstance::create(1, 64, 1);
    double total = 0;
    for (long long seed = 1; seed <= 100; ++seed) {
        const auto res = run_one("rls", inst, default_budget(64), seed);
        if (!res.hit) {
            expect(notes, false, "seed " + std::to_string(seed) + " missed the optimum");
            return;
        }
        total += static_cast<double>(res.hitting_time);
    }
    const double mean = total / 100;
    expect(notes, mean >= 200 && mean <= 330, "mean hitting time " + format_number(mean));
}

void criterion_ert(std::string& notes) {
    std::vector<RunSeries> group;
    for (int i = 0; i < 5; ++i) group.push_back({{{500, 9, 9}}, 1000});
    for (int i = 0; i < 6; ++i) group.push_back({{{1000, 1, 1}}, 1000});
    const auto res = ert_from_series(group, 9.0, 1000);
    expect(notes, res.successes == 5 && res.aht == 500.0 && res.ert == 1700.0,
           "ert(r=11,s=5,aht=500,B=1000) = " + format_number(res.ert));

    std::vector<RunSeries> all{{{{10, 9, 9}}, 1000}, {{{30, 9, 9}}, 1000}};
    const auto res_all = ert_from_series(all, 9.0, 1000);
    expect(notes, res_all.ert == res_all.aht, "s=r must give ERT=AHT");

    const auto res_none = ert_from_series(all, 99.0, 1000);
    expect(notes, std::isinf(res_none.ert) && format_number(res_none.ert) == "inf",
           "s=0 must give inf");
}

void criterion_ecdf(std::string& notes) {
    std::vector<long long> grid;
    for (long long t = 1; t <= 10; ++t) grid.push_back(t);
    const auto curve = ecdf_from_hits({5, -1}, grid);
    for (int t = 1; t <= 10; ++t) {
        const double want = t < 5 ? 0.0 : 0.5;
        expect(notes, curve.fractions[static_cast<std::size_t>(t - 1)] == want,
               "plateau value at t=" + std::to_string(t));
    }

    Rng rng(4);
    std::vector<long long> hits_a, hits_b;
    for (int i = 0; i < 41; ++i) hits_a.push_back(rng.below(2) ? rng.below(1000) + 1 : -1);
    for (int i = 0; i < 17; ++i) hits_b.push_back(rng.below(2) ? rng.below(1000) + 1 : -1);
    std::vector<long long> wide_grid{1, 3, 10, 31, 100, 316, 1000};
    const auto a = ecdf_from_hits(hits_a, wide_grid);
    const auto b = ecdf_from_hits(hits_b, wide_grid);
    auto both = hits_a;
    both.insert(both.end(), hits_b.begin(), hits_b.end());
    const auto u = ecdf_from_hits(both, wide_grid);
    double prev = 0;
    for (std::size_t i = 0; i < wide_grid.size(); ++i) {
        expect(notes, u.fractions[i] >= prev && u.fractions[i] >= 0 && u.fractions[i] <= 1,
               "monotone/range");
        prev = u.fractions[i];
        const double weighted = (41 * a.fractions[i] + 17 * b.fractions[i]) / 58;
        expect(notes, std::abs(u.fractions[i] - weighted) < 1e-12, "union additivity");
    }
}

void criterion_reproducibility(std::string& notes) {
    ExperimentConfig cfg;
    for (const auto& info : algorithm_catalog()) cfg.algorithms.emplace_back(info.id);
    cfg.fids.resize(function_count);
    for (int i = 0; i < function_count; ++i) cfg.fids[static_cast<std::size_t>(i)] = i + 1;
    cfg.dims = {16};
    cfg.master_seed = 2024;

    const auto out_a = scratch_dir("repro_a");
    cfg.output_dir = out_a.string();
    const auto sum_a = run_experiment(cfg);
    const auto out_b = scratch_dir("repro_b");
    cfg.output_dir = out_b.string();
    const auto sum_b = run_experiment(cfg);

    expect(notes, sum_a.errors.empty() && sum_b.errors.empty(), "cells failed");
    expect(notes, sum_a.runs_completed == 12 * 23 * 11, "unexpected run count");
    std::string why;
    expect(notes, same_tree(out_a, out_b, why), "datasets differ: " + why);
    fs::remove_all(out_a);
    fs::remove_all(out_b);
}

void criterion_desk_scale(std::string& notes) {
    ExperimentConfig cfg;
    for (const auto& info : algorithm_catalog()) cfg.algorithms.emplace_back(info.id);
    cfg.fids.resize(function_count);
    for (int i = 0; i < function_count; ++i) cfg.fids[static_cast<std::size_t>(i)] = i + 1;
    cfg.dims = {16, 64};
    cfg.master_seed = 7;
    const auto out = scratch_dir("desk");
    cfg.output_dir = out.string();

    const auto start = std::chrono::steady_clock::now();
    const auto summary = run_experiment(cfg);
    const auto seconds =
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - start)
            .count();

    expect(notes, summary.errors.empty(), "cells failed");
    expect(notes, summary.runs_completed == 12 * 23 * 2 * 11, "unexpected run count");
    expect(notes, seconds < 1800, "grid took " + std::to_string(seconds) + "s (limit 1800)");
    std::fprintf(stderr, "  (desk-scale grid: %llds)\n", static_cast<long long>(seconds));
    fs::remove_all(out);
}

void criterion_qualitative(std::string& notes) {
    // (a) rugged r3 landscape at n=100: the distribution-based search reaches
    // the optimum in a majority of runs, local search never does
    {
        const auto inst = ProblemInstance::create(10, 100, 1);
        int umda_hits = 0;
        for (long long seed = 1; seed <= 11; ++seed)
            umda_hits += run_one("umda", inst, default_budget(100), seed).hit;
        int local_hits = 0;
        for (long long seed = 1; seed <= 11; ++seed) {
            local_hits += run_one("ghc", inst, default_budget(100), seed).hit;
            local_hits += run_one("rls", inst, default_budget(100), seed).hit;
        }
        expect(notes, umda_hits >= 6, "umda hit only " + std::to_string(umda_hits) + "/11 on F10");
        expect(notes, local_hits == 0, "ghc/rls hit F10 " + std::to_string(local_hits) + " times");
    }
    // (b) prefix-counting problem at n=64: UMDA fails within budget in a
    // majority of runs, RLS succeeds in every run
    {
        const auto inst = ProblemInstance::create(2, 64, 1);
        int umda_hits = 0, rls_hits = 0;
        for (long long seed = 1; seed <= 11; ++seed) {
            umda_hits += run_one("umda", inst, default_budget(64), seed).hit;
            rls_hits += run_one("rls", inst, default_budget(64), seed).hit;
        }
        expect(notes, umda_hits <= 5, "umda hit F2 " + std::to_string(umda_hits) + "/11");
        expect(notes, rls_hits == 11, "rls hit F2 only " + std::to_string(rls_hits) + "/11");
    }
    // (c) the generational GA deteriorates on permuted instances
    {
        std::vector<double> plain, permuted;
        const auto inst1 = ProblemInstance::create(2, 64, 1, 0);
        for (long long seed = 1; seed <= 11; ++seed)
            plain.push_back(run_one("vga", inst1, default_budget(64), seed).best_raw);
        const int iids[] = {51, 52, 53, 54, 55};
        for (long long seed = 1; seed <= 11; ++seed) {
            const auto inst = ProblemInstance::create(2, 64, iids[(seed - 1) % 5], 0);
            permuted.push_back(run_one("vga", inst, default_budget(64), seed).best_raw);
        }
        const double m_plain = median(plain);
        const double m_perm = median(permuted);
        expect(notes, m_perm < m_plain,
               "vga medians: plain " + format_number(m_plain) + " vs permuted " +
                   format_number(m_perm));
    }
}

void criterion_invariants(std::string& notes) {
    const auto inst = ProblemInstance::create(9, 64, 1);
    Rng rng(5);
    {
        Umda alg(64);
        Evaluator f(inst, 30000, nullptr, &alg);
        try {
            alg.init(f, rng);
            for (;;) {
                alg.step(f, rng);
                for (const double p : alg.frequencies())
                    if (p < 1.0 / 64 || p > 1.0 - 1.0 / 64) {
                        expect(notes, false, "umda frequency " + format_number(p));
                        throw StopRun{};
                    }
            }
        } catch (const StopRun&) {
        }
    }
    {
        TwoRateEa alg(64);
        Evaluator f(inst, 30000, nullptr, &alg);
        try {
            alg.init(f, rng);
            for (;;) {
                alg.step(f, rng);
                if (alg.rate() < 2.0 || alg.rate() > 16.0) {
                    expect(notes, false, "two-rate r " + format_number(alg.rate()));
                    throw StopRun{};
                }
            }
        } catch (const StopRun&) {
        }
    }
    {
        OneLambdaLambdaGa alg(64);
        Evaluator f(inst, 30000, nullptr, &alg);
        try {
            alg.init(f, rng);
            for (;;) {
                alg.step(f, rng);
                if (alg.lambda() < 1.0 || alg.lambda() > 64.0) {
                    expect(notes, false, "oll-ga lambda " + format_number(alg.lambda()));
                    throw StopRun{};
                }
            }
        } catch (const StopRun&) {
        }
    }
    // best-so-far monotone per run, for every algorithm
    {
        const auto rugged = ProblemInstance::create(19, 16, 3, 1);
        for (const auto& info : algorithm_catalog()) {
            MemoryLogger log;
            auto alg = make_algorithm(info.id, 16);
            Rng r2(31);
            execute_run(*alg, rugged, 3000, r2, &log);
            double best = -1e300;
            for (const auto& e : log.entries()) {
                if (e.raw_best < best) {
                    expect(notes, false, std::string("best-so-far dropped for ") + info.id.data());
                    break;
                }
                best = e.raw_best;
            }
        }
    }
    // autocorrelation value symmetry at n=12 against the quadratic oracle
    {
        Rng r3(77);
        for (int i = 0; i < 1000; ++i) {
            const auto x = random_bitstring(r3, 12);
            BitString comp = x, rev = x;
            for (auto& b : comp) b ^= 1;
            std::reverse(rev.begin(), rev.end());
            const double v = labs_merit(x);
            const double oracle = 144.0 / (2.0 * static_cast<double>(labs_energy_reference(x)));
            if (v != labs_merit(comp) || v != labs_merit(rev) || std::abs(v - oracle) > 1e-12) {
                expect(notes, false, "labs symmetry/oracle mismatch");
                break;
            }
        }
    }
}

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"1: worked transformation examples bit-exact", criterion_worked_examples},
        {"2: analytic optima", criterion_known_optima},
        {"3: gHC needs at most n+1 queries on F1", criterion_ghc_bound},
        {"4: RLS mean hitting time on F1 n=64 in [200, 330]", criterion_rls_hitting_time},
        {"5: ERT formula cases", criterion_ert},
        {"6: ECDF properties", criterion_ecdf},
        {"7: byte-identical reruns (12 algs x F1-F23 x n=16 x 11 iids)", criterion_reproducibility},
        {"8: desk-scale grid (n in {16,64}) within 30 minutes", criterion_desk_scale},
        {"9: qualitative algorithm orderings", criterion_qualitative},
        {"10: state invariants and value symmetries", criterion_invariants},
    };

    int failures = 0;
    for (const auto& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        std::string notes;
        try {
            check.body(notes);
        } catch (const std::exception& e) {
            notes += (notes.empty() ? "" : "; ") + std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (notes.empty()) {
            std::printf("[PASS] %s (%.1fs)\n", check.label.c_str(), secs);
        } else {
            std::printf("[FAIL] %s (%.1fs): %s\n", check.label.c_str(), secs, notes.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", checks.size() - failures, checks.size());
    return failures == 0 ? 0 : 1;
}
