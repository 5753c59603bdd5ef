#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbbench/logging.hpp"
#include "pbbench/operators.hpp"
#include "pbbench/problems.hpp"
#include "pbbench/rng.hpp"

namespace pbbench {

// Raised by the Evaluator when a run must end; unwinds the algorithm loop.
struct StopRun {};

class Algorithm;

// Budget gate between an algorithm and the problem. Counts evaluations,
// tracks the best-so-far values, feeds the logger, and raises StopRun once
// the budget is spent or the known optimum has been reached. Algorithms only
// ever see the transformed value.
class Evaluator {
public:
    Evaluator(const ProblemInstance& instance, long long budget, RunLogger* logger = nullptr,
              const Algorithm* parameter_source = nullptr)
        : instance_(&instance), budget_(budget), logger_(logger), algorithm_(parameter_source) {}

    int dimension() const { return instance_->dimension(); }
    long long used() const { return used_; }
    long long budget() const { return budget_; }
    bool finished() const { return done_; }
    double best_raw() const { return best_raw_; }
    double best_transformed() const { return best_transformed_; }
    bool hit_optimum() const { return hit_; }
    long long hitting_time() const { return hitting_time_; }

    double operator()(const BitString& x);

private:
    const ProblemInstance* instance_;
    long long budget_;
    RunLogger* logger_;
    const Algorithm* algorithm_;
    long long used_ = 0;
    double best_raw_ = -std::numeric_limits<double>::infinity();
    double best_transformed_ = -std::numeric_limits<double>::infinity();
    bool hit_ = false;
    long long hitting_time_ = 0;
    bool done_ = false;
    std::vector<double> parameter_scratch_;
};

class Algorithm {
public:
    virtual ~Algorithm() = default;
    virtual std::string_view id() const = 0;
    // Tracked parameter channels; the set is fixed for a whole run.
    virtual std::span<const std::string> parameter_names() const { return {}; }
    virtual void append_parameter_values(std::vector<double>&) const {}
    // Samples the initial solution(s) and iterates until the evaluator stops
    // the run.
    virtual void run(Evaluator& f, Rng& rng) = 0;
};

inline double Evaluator::operator()(const BitString& x) {
    if (done_) throw StopRun{};
    const EvaluationResult value = instance_->evaluate(x);
    ++used_;
    if (value.raw > best_raw_) {
        best_raw_ = value.raw;
        best_transformed_ = value.transformed;
    }
    if (!hit_ && instance_->optimum_known() && best_raw_ >= instance_->optimum_raw() - 1e-9) {
        hit_ = true;
        hitting_time_ = used_;
    }
    if (logger_) {
        parameter_scratch_.clear();
        if (algorithm_) algorithm_->append_parameter_values(parameter_scratch_);
        logger_->record({used_, value.raw, best_raw_, value.transformed, best_transformed_,
                         parameter_scratch_});
    }
    if (used_ >= budget_ || hit_) done_ = true;
    return value.transformed;
}

struct RunResult {
    long long evals_used = 0;
    double best_raw = -std::numeric_limits<double>::infinity();
    double best_transformed = -std::numeric_limits<double>::infinity();
    bool hit = false;          // known optimum reached
    long long hitting_time = 0;  // valid iff hit
};

// Runs one algorithm on one frozen instance until the budget is exhausted or
// the known raw optimum is hit. Every evaluation costs exactly one budget
// unit and is forwarded to the logger.
inline RunResult execute_run(Algorithm& algorithm, const ProblemInstance& instance, long long budget,
                             Rng& rng, RunLogger* logger = nullptr) {
    if (budget < 1) throw std::invalid_argument("execute_run: budget must be positive");
    Evaluator f(instance, budget, logger, &algorithm);
    try {
        algorithm.run(f, rng);
    } catch (const StopRun&) {
    }
    if (logger) logger->close();
    return {f.used(), f.best_raw(), f.best_transformed(), f.hit_optimum(), f.hitting_time()};
}

// --- the twelve reference heuristics -----------------------------------------

// Deterministic (1+1) hill climber cycling through the bit positions from
// left to right, one flip per iteration, accepting ties.
class GreedyHillClimber final : public Algorithm {
public:
    explicit GreedyHillClimber(int n) : n_(n) {}
    std::string_view id() const override { return "ghc"; }

    void run(Evaluator& f, Rng& rng) override {
        BitString x = random_bitstring(rng, n_);
        double fx = f(x);
        for (long long t = 1;; ++t) {
            const auto pos = static_cast<std::size_t>(t % n_);
            x[pos] ^= 1;
            const double fy = f(x);
            if (fy >= fx)
                fx = fy;
            else
                x[pos] ^= 1;
        }
    }

private:
    int n_;
};

// Elitist (1+1) strategy flipping one uniformly chosen bit per iteration.
class RandomizedLocalSearch final : public Algorithm {
public:
    explicit RandomizedLocalSearch(int n) : n_(n) {}
    std::string_view id() const override { return "rls"; }

    void run(Evaluator& f, Rng& rng) override {
        BitString x = random_bitstring(rng, n_);
        double fx = f(x);
        for (;;) {
            const auto pos = static_cast<std::size_t>(rng.below(n_));
            x[pos] ^= 1;
            const double fy = f(x);
            if (fy >= fx)
                fx = fy;
            else
                x[pos] ^= 1;
        }
    }

private:
    int n_;
};

// (1+lambda) EA with static standard bit mutation rate 1/n; the mutation
// strength is Bin(n, 1/n) conditioned on flipping at least one bit. Offspring
// ties are broken towards the first maximum.
class OnePlusLambdaEa final : public Algorithm {
public:
    OnePlusLambdaEa(int n, int lambda) : n_(n), lambda_(lambda), id_(lambda == 1 ? "ea" : "ea10") {}
    std::string_view id() const override { return id_; }

    void run(Evaluator& f, Rng& rng) override {
        BitString x = random_bitstring(rng, n_);
        double fx = f(x);
        const double p = 1.0 / n_;
        for (;;) {
            double best = -std::numeric_limits<double>::infinity();
            BitString best_y;
            for (int i = 0; i < lambda_; ++i) {
                const int strength = p >= 1.0 ? n_ : sample_binomial_gt0(rng, n_, p);
                BitString y = mutate_strength(x, strength, rng);
                const double fy = f(y);
                if (fy > best) {
                    best = fy;
                    best_y = std::move(y);
                }
            }
            if (best >= fx) {
                x = std::move(best_y);
                fx = best;
            }
        }
    }

private:
    int n_;
    int lambda_;
    std::string_view id_;
};

// (1+1) EA drawing the mutation strength from a power-law distribution with
// exponent beta = 1.5, favouring occasional large jumps.
class FastGa final : public Algorithm {
public:
    explicit FastGa(int n, double beta = 1.5) : n_(n), sampler_(n, beta) {}
    std::string_view id() const override { return "fga"; }

    void run(Evaluator& f, Rng& rng) override {
        BitString x = random_bitstring(rng, n_);
        double fx = f(x);
        for (;;) {
            const int strength = sampler_(rng);
            BitString y = mutate_strength(x, strength, rng);
            const double fy = f(y);
            if (fy >= fx) {
                x = std::move(y);
                fx = fy;
            }
        }
    }

private:
    int n_;
    PowerLawSampler sampler_;
};

// Two-rate (1+10) EA: half the offspring mutate at rate r/(2n), half at 2r/n,
// and r follows the winning half with a biased coin. r stays in [2, n/4].
class TwoRateEa final : public Algorithm {
public:
    explicit TwoRateEa(int n, int lambda = 10) : n_(n), lambda_(lambda) {
        if (n < 8) throw std::invalid_argument("two-rate EA needs n >= 8");
        offspring_.resize(static_cast<std::size_t>(lambda_));
        fitness_.resize(static_cast<std::size_t>(lambda_));
    }
    std::string_view id() const override { return "ea10-2rate"; }

    std::span<const std::string> parameter_names() const override {
        static const std::vector<std::string> names{"rate_r"};
        return names;
    }
    void append_parameter_values(std::vector<double>& out) const override { out.push_back(rate_); }
    double rate() const { return rate_; }

    void init(Evaluator& f, Rng& rng) {
        x_ = random_bitstring(rng, n_);
        fx_ = f(x_);
    }

    void step(Evaluator& f, Rng& rng) {
        for (int i = 0; i < lambda_; ++i) {
            const double p = i < lambda_ / 2 ? rate_ / (2.0 * n_) : 2.0 * rate_ / n_;
            const int strength = sample_binomial_gt0(rng, n_, p);
            offspring_[static_cast<std::size_t>(i)] = mutate_strength(x_, strength, rng);
            fitness_[static_cast<std::size_t>(i)] = f(offspring_[static_cast<std::size_t>(i)]);
        }
        double best = fitness_[0];
        for (const double fy : fitness_) best = std::max(best, fy);
        int ties = 0;
        for (const double fy : fitness_) ties += fy == best;
        auto pick = rng.below(ties);
        int chosen = -1;
        for (int i = 0; i < lambda_; ++i)
            if (fitness_[static_cast<std::size_t>(i)] == best && pick-- == 0) {
                chosen = i;
                break;
            }
        if (best >= fx_) {
            x_ = offspring_[static_cast<std::size_t>(chosen)];
            fx_ = best;
        }
        rate_ = two_rate_update(rate_, chosen < lambda_ / 2, n_, rng);
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

private:
    int n_;
    int lambda_;
    double rate_ = 2.0;
    BitString x_;
    double fx_ = 0;
    std::vector<BitString> offspring_;
    std::vector<double> fitness_;
};

// (1+10) EA with normalized standard bit mutation: strengths are drawn from
// N(r, r(1-r/n)) conditioned to be positive, and r restarts from the strength
// of the iteration's best offspring. The variance-controlled variant shrinks
// the variance by F^c after c consecutive iterations with unchanged r.
class NormalizedEa final : public Algorithm {
public:
    NormalizedEa(int n, bool adaptive_variance, int lambda = 10)
        : n_(n), lambda_(lambda), adaptive_variance_(adaptive_variance) {}
    std::string_view id() const override { return adaptive_variance_ ? "ea10-var" : "ea10-norm"; }

    std::span<const std::string> parameter_names() const override {
        static const std::vector<std::string> names{"rate_r", "counter_c"};
        return names;
    }
    void append_parameter_values(std::vector<double>& out) const override {
        out.push_back(rate_);
        out.push_back(static_cast<double>(counter_));
    }
    double rate() const { return rate_; }
    int counter() const { return counter_; }

    void init(Evaluator& f, Rng& rng) {
        x_ = random_bitstring(rng, n_);
        fx_ = f(x_);
    }

    void step(Evaluator& f, Rng& rng) {
        const double variance =
            (adaptive_variance_ ? std::pow(variance_decay, counter_) : 1.0) * rate_ * (1.0 - rate_ / n_);
        double best = -std::numeric_limits<double>::infinity();
        int best_strength = 0;
        BitString best_y;
        for (int i = 0; i < lambda_; ++i) {
            const int strength = sample_normal_gt0(rng, rate_, variance, n_);
            BitString y = mutate_strength(x_, strength, rng);
            const double fy = f(y);
            if (fy > best) {  // ties favour the smallest index
                best = fy;
                best_strength = strength;
                best_y = std::move(y);
            }
        }
        if (adaptive_variance_) counter_ = best_strength == static_cast<int>(rate_) ? counter_ + 1 : 0;
        rate_ = best_strength;
        if (best >= fx_) {
            x_ = std::move(best_y);
            fx_ = best;
        }
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

    static constexpr double variance_decay = 0.98;

private:
    int n_;
    int lambda_;
    bool adaptive_variance_;
    double rate_ = 2.0;
    int counter_ = 0;
    BitString x_;
    double fx_ = 0;
};

// (1+10) EA with log-normal self-adaptation: each offspring perturbs the
// current rate on the log-odds scale, and the rate of the iteration's best
// offspring is inherited. The rate always stays strictly inside (0, 1).
class LogNormalEa final : public Algorithm {
public:
    explicit LogNormalEa(int n, int lambda = 10) : n_(n), lambda_(lambda) {}
    std::string_view id() const override { return "ea10-logn"; }

    std::span<const std::string> parameter_names() const override {
        static const std::vector<std::string> names{"p"};
        return names;
    }
    void append_parameter_values(std::vector<double>& out) const override { out.push_back(p_); }
    double mutation_rate() const { return p_; }

    void init(Evaluator& f, Rng& rng) {
        x_ = random_bitstring(rng, n_);
        fx_ = f(x_);
    }

    void step(Evaluator& f, Rng& rng) {
        double best = -std::numeric_limits<double>::infinity();
        double best_rate = p_;
        BitString best_y;
        for (int i = 0; i < lambda_; ++i) {
            const double rate = clamp_rate(lognormal_rate(p_, rng));
            const int strength = sample_binomial_gt0(rng, n_, rate);
            BitString y = mutate_strength(x_, strength, rng);
            const double fy = f(y);
            if (fy > best) {  // ties favour the smallest index
                best = fy;
                best_rate = rate;
                best_y = std::move(y);
            }
        }
        p_ = best_rate;
        if (best >= fx_) {
            x_ = std::move(best_y);
            fx_ = best;
        }
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

private:
    // Keeps the rate representable strictly inside (0, 1); the log-odds walk
    // can otherwise collapse to exactly 0.0 or 1.0 in double precision.
    static double clamp_rate(double p) {
        return std::clamp(p, std::numeric_limits<double>::denorm_min(),
                          1.0 - std::numeric_limits<double>::epsilon() / 2);
    }

    int n_;
    int lambda_;
    double p_ = 0.2;
    BitString x_;
    double fx_ = 0;
};

// Self-adjusting (1+(lambda,lambda)) GA: lambda mutation offspring at a shared
// strength Bin_{>0}(n, lambda/n), then lambda biased crossovers between the
// parent and the mutation winner with bias 1/lambda. Crossover children equal
// to a parent inherit its value without being evaluated. lambda shrinks by
// F = 3/2 on strict improvement and grows by F^(1/4) otherwise, within [1, n].
class OneLambdaLambdaGa final : public Algorithm {
public:
    explicit OneLambdaLambdaGa(int n) : n_(n) {}
    std::string_view id() const override { return "ollga"; }

    std::span<const std::string> parameter_names() const override {
        static const std::vector<std::string> names{"lambda"};
        return names;
    }
    void append_parameter_values(std::vector<double>& out) const override { out.push_back(lambda_); }
    double lambda() const { return lambda_; }

    void init(Evaluator& f, Rng& rng) {
        x_ = random_bitstring(rng, n_);
        fx_ = f(x_);
    }

    void step(Evaluator& f, Rng& rng) {
        const int count = std::max(1, static_cast<int>(std::llround(lambda_)));
        const double p = lambda_ / n_;
        const double bias = 1.0 / lambda_;

        const int strength = p >= 1.0 ? n_ : sample_binomial_gt0(rng, n_, p);
        double mut_best = -std::numeric_limits<double>::infinity();
        BitString mut_winner;
        for (int i = 0; i < count; ++i) {
            BitString y = mutate_strength(x_, strength, rng);
            const double fy = f(y);
            if (fy >= mut_best) {  // ties favour the largest index
                mut_best = fy;
                mut_winner = std::move(y);
            }
        }

        double cross_best = -std::numeric_limits<double>::infinity();
        BitString cross_winner;
        for (int i = 0; i < count; ++i) {
            BitString y = crossover_biased(x_, mut_winner, bias, rng);
            double fy;
            if (y == x_)
                fy = fx_;
            else if (y == mut_winner)
                fy = mut_best;
            else
                fy = f(y);
            if (fy >= cross_best) {  // ties favour the largest index
                cross_best = fy;
                cross_winner = std::move(y);
            }
        }

        if (cross_best > fx_) {
            x_ = std::move(cross_winner);
            fx_ = cross_best;
            lambda_ = ollga_update(lambda_, SelectionOutcome::improved, update_strength, n_);
        } else if (cross_best == fx_) {
            x_ = std::move(cross_winner);
            lambda_ = ollga_update(lambda_, SelectionOutcome::equal, update_strength, n_);
        } else {
            lambda_ = ollga_update(lambda_, SelectionOutcome::worse, update_strength, n_);
        }
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

    static constexpr double update_strength = 1.5;

private:
    int n_;
    double lambda_ = 1.0;
    BitString x_;
    double fx_ = 0;
};

// Textbook generational (30,30) GA: roulette-wheel parent selection on
// min-windowed fitness, 1-point crossover of consecutive pairs with
// probability 0.37, unconditioned Bin(n, 2/n) mutation, full replacement.
// Every individual is evaluated each generation.
class VanillaGa final : public Algorithm {
public:
    explicit VanillaGa(int n, int mu = 30, double crossover_prob = 0.37)
        : n_(n), mu_(mu), crossover_prob_(crossover_prob),
          mutation_rate_(std::min(1.0, 2.0 / n)) {}
    std::string_view id() const override { return "vga"; }

    void init(Evaluator& f, Rng& rng) {
        population_.clear();
        fitness_.clear();
        for (int i = 0; i < mu_; ++i) {
            population_.push_back(random_bitstring(rng, n_));
            fitness_.push_back(f(population_.back()));
        }
        offspring_.resize(population_.size());
        offspring_fitness_.resize(fitness_.size());
    }

    void step(Evaluator& f, Rng& rng) {
        for (int i = 0; i < mu_; ++i)
            offspring_[static_cast<std::size_t>(i)] =
                population_[static_cast<std::size_t>(roulette_select(fitness_, rng))];
        for (int i = 0; i + 1 < mu_; i += 2)
            if (rng.uniform01() <= crossover_prob_) {
                auto [c1, c2] = one_point_crossover(offspring_[static_cast<std::size_t>(i)],
                                                    offspring_[static_cast<std::size_t>(i + 1)], rng);
                offspring_[static_cast<std::size_t>(i)] = std::move(c1);
                offspring_[static_cast<std::size_t>(i + 1)] = std::move(c2);
            }
        for (int i = 0; i < mu_; ++i) {
            const int strength = sample_binomial(rng, n_, mutation_rate_);
            offspring_[static_cast<std::size_t>(i)] =
                mutate_strength(offspring_[static_cast<std::size_t>(i)], strength, rng);
            offspring_fitness_[static_cast<std::size_t>(i)] = f(offspring_[static_cast<std::size_t>(i)]);
        }
        population_.swap(offspring_);
        fitness_.swap(offspring_fitness_);
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

private:
    int n_;
    int mu_;
    double crossover_prob_;
    double mutation_rate_;
    std::vector<BitString> population_;
    std::vector<double> fitness_;
    std::vector<BitString> offspring_;
    std::vector<double> offspring_fitness_;
};

// Univariate marginal distribution algorithm with population 50: the best 25
// individuals define per-position one-frequencies (clamped into
// [1/n, 1-1/n]) from which the next population is sampled. Selection ties are
// broken uniformly at random.
class Umda final : public Algorithm {
public:
    explicit Umda(int n, int population_size = 50) : n_(n), s_(population_size) {
        if (n < 2) throw std::invalid_argument("UMDA needs n >= 2");
    }
    std::string_view id() const override { return "umda"; }

    const std::vector<double>& frequencies() const { return frequencies_; }

    void init(Evaluator& f, Rng& rng) {
        population_.clear();
        fitness_.clear();
        for (int i = 0; i < s_; ++i) {
            population_.push_back(random_bitstring(rng, n_));
            fitness_.push_back(f(population_.back()));
        }
        select(rng);
    }

    void step(Evaluator& f, Rng& rng) {
        frequencies_ = umda_update_model(selected_, s_, n_);
        for (int i = 0; i < s_; ++i) {
            auto& x = population_[static_cast<std::size_t>(i)];
            for (int j = 0; j < n_; ++j)
                x[static_cast<std::size_t>(j)] = rng.uniform01() < frequencies_[static_cast<std::size_t>(j)];
            fitness_[static_cast<std::size_t>(i)] = f(x);
        }
        select(rng);
    }

    void run(Evaluator& f, Rng& rng) override {
        init(f, rng);
        for (;;) step(f, rng);
    }

private:
    void select(Rng& rng) {
        const int keep = s_ / 2;
        std::vector<std::pair<double, double>> order(static_cast<std::size_t>(s_));  // (-fit, tiebreak)
        for (int i = 0; i < s_; ++i)
            order[static_cast<std::size_t>(i)] = {-fitness_[static_cast<std::size_t>(i)], rng.uniform01()};
        std::vector<int> idx(static_cast<std::size_t>(s_));
        for (int i = 0; i < s_; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::sort(idx.begin(), idx.end(), [&order](int a, int b) {
            return order[static_cast<std::size_t>(a)] < order[static_cast<std::size_t>(b)];
        });
        selected_.clear();
        for (int i = 0; i < keep; ++i)
            selected_.push_back(population_[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
    }

    int n_;
    int s_;
    std::vector<BitString> population_;
    std::vector<double> fitness_;
    std::vector<BitString> selected_;
    std::vector<double> frequencies_;
};

// --- catalog ------------------------------------------------------------------

struct AlgorithmInfo {
    std::string_view id;
    std::string_view display_name;
};

inline std::span<const AlgorithmInfo> algorithm_catalog() {
    static constexpr AlgorithmInfo infos[] = {
        {"ghc", "gHC"},
        {"rls", "RLS"},
        {"ea", "(1+1) EA"},
        {"fga", "fGA"},
        {"ea10", "(1+10) EA"},
        {"ea10-2rate", "(1+10) EA_{r/2,2r}"},
        {"ea10-norm", "(1+10) EA_norm"},
        {"ea10-var", "(1+10) EA_var"},
        {"ea10-logn", "(1+10) EA_logn"},
        {"ollga", "(1+(lambda,lambda)) GA"},
        {"vga", "vGA"},
        {"umda", "UMDA"},
    };
    return infos;
}

inline int algorithm_index(std::string_view id) {
    const auto catalog = algorithm_catalog();
    for (int i = 0; i < static_cast<int>(catalog.size()); ++i)
        if (catalog[static_cast<std::size_t>(i)].id == id) return i;
    return -1;
}

inline std::unique_ptr<Algorithm> make_algorithm(std::string_view id, int n) {
    if (id == "ghc") return std::make_unique<GreedyHillClimber>(n);
    if (id == "rls") return std::make_unique<RandomizedLocalSearch>(n);
    if (id == "ea") return std::make_unique<OnePlusLambdaEa>(n, 1);
    if (id == "fga") return std::make_unique<FastGa>(n);
    if (id == "ea10") return std::make_unique<OnePlusLambdaEa>(n, 10);
    if (id == "ea10-2rate") return std::make_unique<TwoRateEa>(n);
    if (id == "ea10-norm") return std::make_unique<NormalizedEa>(n, false);
    if (id == "ea10-var") return std::make_unique<NormalizedEa>(n, true);
    if (id == "ea10-logn") return std::make_unique<LogNormalEa>(n);
    if (id == "ollga") return std::make_unique<OneLambdaLambdaGa>(n);
    if (id == "vga") return std::make_unique<VanillaGa>(n);
    if (id == "umda") return std::make_unique<Umda>(n);
    std::string valid;
    for (const auto& info : algorithm_catalog()) {
        if (!valid.empty()) valid += ", ";
        valid += info.id;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(id) + "'; valid ids: " + valid);
}

}  // namespace pbbench
