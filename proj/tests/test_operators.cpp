#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "pbbench/operators.hpp"

using namespace pbbench;

TEST_CASE("conditioned binomial sampling") {
    Rng rng(101);
    CHECK_THROWS_AS(sample_binomial_gt0(rng, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_binomial_gt0(rng, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_binomial_gt0(rng, 0, 0.5), std::invalid_argument);

    const int n = 100;
    const double p = 0.01;
    const int draws = 100000;
    int count_one = 0;
    double sum = 0;
    for (int i = 0; i < draws; ++i) {
        const int k = sample_binomial_gt0(rng, n, p);
        REQUIRE(k >= 1);
        REQUIRE(k <= n);
        count_one += k == 1;
        sum += k;
    }
    // closed-form conditional pmf and mean
    const double p0 = std::pow(1 - p, n);
    const double p1 = n * p * std::pow(1 - p, n - 1) / (1 - p0);
    const double mean = n * p / (1 - p0);
    CHECK(static_cast<double>(count_one) / draws == Catch::Approx(p1).margin(0.01));
    CHECK(sum / draws == Catch::Approx(mean).margin(0.01));
}

TEST_CASE("conditioned binomial survives extreme rates") {
    Rng rng(55);
    for (int i = 0; i < 1000; ++i) {
        const int lo = sample_binomial_gt0(rng, 64, 1e-300);
        REQUIRE(lo == 1);
        const int hi = sample_binomial_gt0(rng, 64, 1.0 - 1e-16);
        REQUIRE(hi == 64);
    }
    // p > 1/2 keeps the exact distribution via the mirrored walk
    int sum = 0;
    for (int i = 0; i < 20000; ++i) sum += sample_binomial_gt0(rng, 10, 0.7);
    CHECK(static_cast<double>(sum) / 20000 == Catch::Approx(7.0).margin(0.05));
}

TEST_CASE("plain binomial sampling matches moments") {
    Rng rng(7);
    double sum = 0, sumsq = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const int k = sample_binomial(rng, 50, 0.3);
        sum += k;
        sumsq += static_cast<double>(k) * k;
    }
    const double mean = sum / draws;
    const double var = sumsq / draws - mean * mean;
    CHECK(mean == Catch::Approx(15.0).margin(0.1));
    CHECK(var == Catch::Approx(10.5).margin(0.3));
    CHECK(sample_binomial(rng, 10, 0.0) == 0);
    CHECK(sample_binomial(rng, 10, 1.0) == 10);
}

TEST_CASE("power-law mutation strengths") {
    Rng rng(9);
    CHECK_THROWS_AS(PowerLawSampler(1, 1.5), std::invalid_argument);

    PowerLawSampler sampler(4, 1.5);  // support {1, 2}
    const int draws = 100000;
    int ones_count = 0;
    for (int i = 0; i < draws; ++i) {
        const int k = sampler(rng);
        REQUIRE(k >= 1);
        REQUIRE(k <= 2);
        ones_count += k == 1;
    }
    const double c = 1.0 + std::pow(2.0, -1.5);
    CHECK(static_cast<double>(ones_count) / draws == Catch::Approx(1.0 / c).margin(0.01));
    CHECK(1.0 - static_cast<double>(ones_count) / draws ==
          Catch::Approx(std::pow(2.0, -1.5) / c).margin(0.01));

    PowerLawSampler wide(64, 1.5);
    for (int i = 0; i < 10000; ++i) REQUIRE(wide(rng) <= 32);
}

TEST_CASE("positive normal strengths") {
    Rng rng(12);
    CHECK(sample_normal_gt0(rng, 3.2, 0.0, 10) == 3);
    CHECK(sample_normal_gt0(rng, -4.0, 0.0, 10) == 1);
    CHECK(sample_normal_gt0(rng, 99.0, 0.0, 10) == 10);
    const int n = 100;
    const double r = 50;
    double sum = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const int v = sample_normal_gt0(rng, r, r * (1 - r / n), n);
        REQUIRE(v >= 1);
        REQUIRE(v <= n);
        sum += v;
    }
    CHECK(sum / draws == Catch::Approx(r).epsilon(0.02));
}

TEST_CASE("mutation flips exactly the requested number of bits") {
    Rng rng(3);
    const auto x = random_bitstring(rng, 50);
    CHECK(mutate_strength(x, 0, rng) == x);
    BitString complement = x;
    for (auto& b : complement) b ^= 1;
    CHECK(mutate_strength(x, 50, rng) == complement);
    for (int strength : {1, 2, 7, 9, 25, 49})
        for (int i = 0; i < 50; ++i) {
            const auto y = mutate_strength(x, strength, rng);
            REQUIRE(y.size() == x.size());
            REQUIRE(hamming_distance(x, y) == strength);
        }
    CHECK_THROWS_AS(mutate_strength(x, 51, rng), std::invalid_argument);
    CHECK_THROWS_AS(mutate_strength(x, -1, rng), std::invalid_argument);
}

TEST_CASE("biased crossover copies donor positions") {
    Rng rng(4);
    const auto x = random_bitstring(rng, 40);
    const auto donor = random_bitstring(rng, 40);
    CHECK(crossover_biased(x, x, 0.3, rng) == x);
    for (int i = 0; i < 200; ++i) {
        const auto y = crossover_biased(x, donor, 0.25, rng);
        for (std::size_t j = 0; j < y.size(); ++j)
            REQUIRE((y[j] == x[j] || y[j] == donor[j]));
    }
    // bias 1 copies the whole donor
    CHECK(crossover_biased(x, donor, 1.0, rng) == donor);
    // expected copied positions ~ nc / (1 - (1-c)^n)
    const double c = 0.05;
    double copied = 0;
    const int draws = 20000;
    BitString zero(40, 0), one(40, 1);
    for (int i = 0; i < draws; ++i) copied += one_max(crossover_biased(zero, one, c, rng));
    const double expect = 40 * c / (1 - std::pow(1 - c, 40));
    CHECK(copied / draws == Catch::Approx(expect).epsilon(0.02));
}

TEST_CASE("one-point crossover preserves per-position multisets") {
    Rng rng(6);
    const auto a = random_bitstring(rng, 30);
    const auto b = random_bitstring(rng, 30);
    for (int i = 0; i < 100; ++i) {
        const auto [y1, y2] = one_point_crossover(a, b, rng);
        for (std::size_t j = 0; j < a.size(); ++j) {
            REQUIRE(static_cast<int>(y1[j]) + y2[j] == static_cast<int>(a[j]) + b[j]);
            REQUIRE((y1[j] == a[j] || y1[j] == b[j]));
        }
    }
    const auto [s1, s2] = one_point_crossover(a, a, rng);
    CHECK(s1 == a);
    CHECK(s2 == a);
}

TEST_CASE("roulette selection uses min-windowed weights") {
    Rng rng(8);
    CHECK_THROWS_AS(roulette_select({}, rng), std::invalid_argument);

    const std::vector<double> equal{3.0, 3.0, 3.0, 3.0};
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 40000; ++i) ++counts[static_cast<std::size_t>(roulette_select(equal, rng))];
    for (const int c : counts) CHECK(static_cast<double>(c) / 40000 == Catch::Approx(0.25).margin(0.01));

    const std::vector<double> graded{2.0, 4.0, 6.0};
    std::vector<int> g(3, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++g[static_cast<std::size_t>(roulette_select(graded, rng))];
    CHECK(g[0] == 0);  // window minimum is never selected
    CHECK(static_cast<double>(g[1]) / draws == Catch::Approx(1.0 / 3).margin(0.01));
    CHECK(static_cast<double>(g[2]) / draws == Catch::Approx(2.0 / 3).margin(0.01));

    const std::vector<double> negative{-10.0, -10.0, 20.0};
    for (int i = 0; i < 1000; ++i) REQUIRE(roulette_select(negative, rng) == 2);
}

TEST_CASE("two-rate update rule") {
    Rng rng(10);
    // q <= 3/4 halves: force by scanning until both branches appear
    int halved = 0, doubled = 0;
    for (int i = 0; i < 10000; ++i) {
        const double r = two_rate_update(8.0, true, 64, rng);
        if (r == 4.0) ++halved;
        else if (r == 16.0) ++doubled;
        else FAIL("unexpected rate");
    }
    CHECK(static_cast<double>(halved) / 10000 == Catch::Approx(0.75).margin(0.02));
    for (int i = 0; i < 100; ++i) {
        CHECK(two_rate_update(2.0, true, 64, rng) >= 2.0);      // floor
        CHECK(two_rate_update(16.0, false, 64, rng) <= 16.0);   // cap at n/4
    }
    int low_after_loss = 0;
    for (int i = 0; i < 10000; ++i) low_after_loss += two_rate_update(8.0, false, 64, rng) == 4.0;
    CHECK(static_cast<double>(low_after_loss) / 10000 == Catch::Approx(0.25).margin(0.02));
}

TEST_CASE("population size update of the (1+(lambda,lambda)) GA") {
    CHECK(ollga_update(3.0, SelectionOutcome::improved, 1.5, 64) == 2.0);
    CHECK(ollga_update(1.0, SelectionOutcome::improved, 1.5, 64) == 1.0);
    CHECK(ollga_update(3.0, SelectionOutcome::worse, 1.5, 64) ==
          Catch::Approx(3.0 * std::pow(1.5, 0.25)));
    CHECK(ollga_update(3.0, SelectionOutcome::equal, 1.5, 64) ==
          Catch::Approx(3.0 * std::pow(1.5, 0.25)));
    CHECK(ollga_update(64.0, SelectionOutcome::worse, 1.5, 64) == 64.0);
}

TEST_CASE("log-normal rate perturbation") {
    // a zero normal draw returns p exactly: exp(0) = 1
    const double p = 0.2;
    CHECK(1.0 / (1.0 + (1.0 - p) / p * std::exp(0.0)) == Catch::Approx(p));

    Rng rng(14);
    std::vector<double> outs;
    for (int i = 0; i < 100000; ++i) {
        const double v = lognormal_rate(p, rng);
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
        outs.push_back(v);
    }
    std::nth_element(outs.begin(), outs.begin() + outs.size() / 2, outs.end());
    const double median = outs[outs.size() / 2];
    CHECK(median > 0.19);
    CHECK(median < 0.21);
}

TEST_CASE("umda frequency model") {
    // 20 ones at a position over s=50 selected size 25 -> 0.8
    const int n = 10;
    std::vector<BitString> selected(25, BitString(n, 0));
    for (int i = 0; i < 20; ++i) selected[static_cast<std::size_t>(i)][0] = 1;
    for (int i = 0; i < 25; ++i) selected[static_cast<std::size_t>(i)][1] = 1;
    const auto freq = umda_update_model(selected, 50, n);
    CHECK(freq[0] == Catch::Approx(0.8));
    CHECK(freq[1] == 1.0 - 1.0 / n);  // 25/25 clamped
    CHECK(freq[2] == 1.0 / n);        // no ones clamped
    CHECK_THROWS_AS(umda_update_model(selected, 49, n), std::invalid_argument);
}
