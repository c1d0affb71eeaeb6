#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "core/adaptation.hpp"
#include "core/errors.hpp"
#include "doctest.h"

using namespace incadapt;

TEST_CASE("gain_from_tau") {
    CHECK(gain_from_tau(1.0, 1.0) == 1.0);
    CHECK(gain_from_tau(0.1, 0.01) == doctest::Approx(10.0));
    CHECK(gain_from_tau(2.0, 0.5) == doctest::Approx(4.0));
    CHECK_THROWS_AS(gain_from_tau(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(gain_from_tau(1.0, -0.1), ConfigError);
}

TEST_CASE("gain resolution: the integral law carries the 1/tau scaling") {
    AdaptationConfig cfg;
    cfg.tau = 0.1;
    cfg.gamma_prime = 1.0;
    cfg.law = Law::integral;
    CHECK(resolve_gain(cfg) == doctest::Approx(10.0));
    cfg.law = Law::incremental;
    CHECK(resolve_gain(cfg) == doctest::Approx(1.0));
    cfg.gamma = 3.0;
    CHECK_THROWS_AS(resolve_gain(cfg), ConfigError);  // both spellings set
    cfg.gamma_prime.reset();
    CHECK(resolve_gain(cfg) == doctest::Approx(3.0));
    cfg.gamma.reset();
    CHECK_THROWS_AS(resolve_gain(cfg), ConfigError);  // neither
}

// The update direction is +sgn(b) gamma phi e throughout: it is the
// orientation under which the estimate-error cross terms of the functional
// derivative cancel and the closed loop converges.
TEST_CASE("integral law derivative") {
    CHECK(integral_law_derivative(1, 3.0, Vec{1.0, -2.0}, 0.0) == Vec{0.0, -0.0});
    const Vec d1 = integral_law_derivative(1, 2.0, Vec{1.0, -1.0}, 0.5);
    CHECK(d1[0] == doctest::Approx(1.0));
    CHECK(d1[1] == doctest::Approx(-1.0));
    const Vec d2 = integral_law_derivative(-1, 1.0, Vec{3.0}, 2.0);
    CHECK(d2[0] == doctest::Approx(-6.0));
}

TEST_CASE("history: pre-history, grid samples, interpolation, underflow") {
    EstimateHistory h(Vec{7.0}, 0.3, 0.1);
    CHECK(h.steps_per_tau() == 3);
    CHECK(h.query(-0.05)[0] == 7.0);
    CHECK(h.query(-5.0)[0] == 7.0);

    h.append(0.0, Vec{0.0});
    h.append(0.1, Vec{1.0});
    CHECK(h.query(0.1)[0] == 1.0);              // grid sample, bit exact
    CHECK(h.query(0.05)[0] == doctest::Approx(0.5));  // two samples: linear
    CHECK(h.query(-1e-3)[0] == 7.0);

    CHECK_THROWS_AS(h.query(0.5), HistoryError);  // ahead of the newest sample
    for (int k = 2; k <= 12; ++k) h.append(0.1 * k, Vec{static_cast<double>(k)});
    CHECK_THROWS_AS(h.query(0.1), HistoryError);  // discarded
    CHECK(h.query(1.2)[0] == 12.0);

    CHECK_THROWS_AS(h.append(1.4, Vec{0.0}), ConfigError);   // skipped a step
    CHECK_THROWS_AS(h.append(1.3, Vec{0.0, 0.0}), ConfigError);  // wrong dim
    CHECK_THROWS_AS(EstimateHistory(Vec{0.0}, 0.25, 0.1), ConfigError);  // tau != m h
}

TEST_CASE("history interpolation reproduces smooth segments to high order") {
    // samples of a cubic are reproduced exactly away from segment boundaries
    EstimateHistory h(Vec{0.0}, 1.0, 0.1);
    auto f = [](double t) { return 1.0 + t + 0.5 * t * t - 0.25 * t * t * t; };
    for (int k = 0; k <= 9; ++k) h.append(0.1 * k, Vec{f(0.1 * k)});
    for (double t : {0.13, 0.35, 0.61, 0.88})
        CHECK(h.query(t)[0] == doctest::Approx(f(t)).epsilon(1e-12));
}

TEST_CASE("history fuzz: ring-buffer reads match a dense reference") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (int m : {1, 2, 3, 7, 25}) {
        const double h = 0.01;
        const double tau = m * h;
        EstimateHistory hist(Vec{val(rng), val(rng)}, tau, h);
        std::vector<Vec> dense;  // every sample ever appended, index = grid step
        const int steps = 6 * m + 5;
        for (int k = 0; k <= steps; ++k) {
            Vec v{val(rng), val(rng)};
            hist.append(h * k, v);
            dense.push_back(v);

            // every retained grid point reads back bit-exactly
            const int oldest = std::max(0, k - (m + 3));
            for (int j = oldest; j <= k; ++j) {
                const Vec q = hist.query(h * j);
                CHECK(q == dense[static_cast<std::size_t>(j)]);
            }
            // pre-history times return the initial setting
            CHECK(hist.query(-h) == hist.initial());
            // discarded times underflow, future times are rejected
            if (oldest > 0) CHECK_THROWS_AS(hist.query(h * (oldest - 1)), HistoryError);
            CHECK_THROWS_AS(hist.query(h * (k + 2)), HistoryError);
        }
    }
}

TEST_CASE("history fuzz: off-grid reads of a linear sequence are exact") {
    // every interpolation stencil reproduces collinear samples exactly,
    // whatever its degree or clamping
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    for (int m : {2, 4, 10}) {
        const double h = 0.1;
        EstimateHistory hist(Vec{0.0}, m * h, h);
        auto f = [](double t) { return 2.5 * t - 1.0; };
        const int steps = 5 * m;
        for (int k = 0; k <= steps; ++k) hist.append(h * k, Vec{f(h * k)});
        for (int trial = 0; trial < 200; ++trial) {
            const double lo = h * (steps - m - 2);
            const double t = lo + frac(rng) * (h * steps - lo);
            CHECK(hist.query(t)[0] == doctest::Approx(f(t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("incremental update and recursion") {
    EstimateHistory h(Vec{0.0, 0.0}, 0.1, 0.1);
    // with zero error the update reads through the delay untouched
    const Vec frozen = incremental_update(h, 0.0, 1, 1.0, Vec{1.0, 2.0}, 0.0);
    CHECK(frozen == Vec{0.0, 0.0});
    // first step reads the pre-history branch
    const Vec first = incremental_update(h, 0.0, 1, 1.0, Vec{1.0, 2.0}, 1.0);
    CHECK(first[0] == doctest::Approx(1.0));
    CHECK(first[1] == doctest::Approx(2.0));
    h.append(0.0, first);
    const Vec second = incremental_update(h, 0.1, 1, 1.0, Vec{1.0, 2.0}, 1.0);
    CHECK(second[0] == doctest::Approx(2.0));  // two accumulated updates
    CHECK(second[1] == doctest::Approx(4.0));
}

TEST_CASE("telescoping recursion with a constant update term") {
    // theta(k tau + s) = theta0 + (k+1) sgn(b) gamma c on every grid
    const double tau = 0.5, gamma = 0.7, c = 0.3;
    for (int m : {2, 5, 10}) {
        const double h = tau / m;
        EstimateHistory hist(Vec{1.0}, tau, h);
        const int steps = 6 * m;
        for (int i = 0; i <= steps; ++i) {
            const double t = h * i;
            const Vec v = incremental_update(hist, t, 1, gamma, Vec{1.0}, c);
            const int band = i / m;  // k such that t is in [k tau, (k+1) tau)
            CHECK(v[0] == doctest::Approx(1.0 + (band + 1) * gamma * c).epsilon(1e-12));
            hist.append(t, v);
        }
    }
}

TEST_CASE("forward update: the visible estimate lags by one interval") {
    EstimateHistory h(Vec{1.0}, 0.2, 0.1);
    // control-visible value on [0, tau) is the initial setting
    CHECK(h.query(0.0)[0] == 1.0);
    const Vec stored = forward_incremental_update(h, 0.0, 1, 2.0, Vec{1.0}, 0.5);
    CHECK(stored[0] == doctest::Approx(2.0));  // 1 + 2*0.5
    h.append(0.2, stored);
    CHECK(h.query(0.1)[0] == 1.0);   // still the initial setting
    CHECK(h.query(0.2)[0] == 2.0);   // the stored future value arrives at tau
}

TEST_CASE("forward update with zero error keeps the initial setting forever") {
    EstimateHistory h(Vec{3.0}, 0.2, 0.1);
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.1 * i;
        const Vec stored = forward_incremental_update(h, t, 1, 5.0, Vec{1.0}, 0.0);
        CHECK(stored[0] == 3.0);
        h.append(t + 0.2, stored);
    }
}

TEST_CASE("saturate clamps componentwise") {
    CHECK(saturate(Vec{0.3, -0.2}, Vec{-1.0, -1.0}, Vec{1.0, 1.0}) == Vec{0.3, -0.2});
    CHECK(saturate(Vec{5.0, -5.0}, Vec{-1.0, -1.0}, Vec{1.0, 1.0}) == Vec{1.0, -1.0});
    CHECK(saturate(Vec{0.5, 2.0}, Vec{0.0, 0.0}, Vec{1.0, 1.0}) == Vec{0.5, 1.0});
}

TEST_CASE("saturated update clamps at the history read and at the output") {
    const Vec lo{-1.0}, hi{1.0};
    {
        EstimateHistory h(Vec{0.25}, 0.1, 0.1);
        const SaturatedUpdate s = saturated_incremental_update(h, 0.0, 1, 1.0, Vec{3.0}, 0.0, lo, hi);
        CHECK(s.theta_star[0] == 0.25);
        CHECK(s.theta_hat[0] == 0.25);
    }
    {
        // the recursion variable outside the box is clamped when read
        EstimateHistory h(Vec{2.0}, 0.1, 0.1);
        const SaturatedUpdate s = saturated_incremental_update(h, 0.0, 1, 1.0, Vec{1.0}, 0.0, lo, hi);
        CHECK(s.theta_star[0] == 1.0);
        CHECK(s.theta_hat[0] == 1.0);
    }
    {
        EstimateHistory h(Vec{0.0}, 0.1, 0.1);
        const SaturatedUpdate s = saturated_incremental_update(h, 0.0, 1, 1.0, Vec{3.0}, 1.0, lo, hi);
        CHECK(s.theta_star[0] == doctest::Approx(3.0));
        CHECK(s.theta_hat[0] == 1.0);  // output clamp
    }
}

TEST_CASE("saturated estimates stay inside the box under random updates") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    const Vec lo{-1.0, -2.0}, hi{1.5, 0.5};
    EstimateHistory h(Vec{0.0, 0.0}, 0.2, 0.1);
    for (int i = 0; i <= 500; ++i) {
        const double t = 0.1 * i;
        const SaturatedUpdate s = saturated_incremental_update(
            h, t, 1, 1.3, Vec{d(rng), d(rng)}, d(rng), lo, hi);
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(s.theta_hat[c] >= lo[c]);
            CHECK(s.theta_hat[c] <= hi[c]);
        }
        h.append(t, s.theta_star);
    }
}

TEST_CASE("robust update freezes inside the dead zone") {
    EstimateHistory h(Vec{0.6}, 0.1, 0.1);
    CHECK(robust_incremental_update(h, 0.0, 1, 9.0, Vec{4.0}, 0.0, 0)[0] == 0.6);

    const Vec a = robust_incremental_update(h, 0.0, 1, 1.0, Vec{2.0}, 0.5, -1);
    CHECK(a[0] == doctest::Approx(0.6 - 1.0));  // 0.6 + 1*2*0.5*(-1)

    EstimateHistory h2(Vec{1.0}, 0.1, 0.1);
    const Vec b = robust_incremental_update(h2, 0.0, -1, 2.0, Vec{1.0}, 1.0, 1);
    CHECK(b[0] == doctest::Approx(-1.0));  // 1 + (-1)*2*1*1

    CHECK_THROWS_AS(robust_incremental_update(h, 0.0, 1, 1.0, Vec{1.0}, -0.1, 1), ConfigError);
    CHECK_THROWS_AS(robust_incremental_update(h, 0.0, 1, 1.0, Vec{1.0}, 0.5, 0), ConfigError);
}

TEST_CASE("dead-zone freeze holds over whole frozen intervals") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    EstimateHistory h(Vec{0.4, -0.2}, 0.3, 0.1);
    Vec last = h.initial();
    for (int i = 0; i <= 100; ++i) {
        const double t = 0.1 * i;
        const Vec v = robust_incremental_update(h, t, 1, 2.0, Vec{d(rng), d(rng)}, 0.0, 0);
        h.append(t, v);
        last = v;
    }
    CHECK(last == h.initial());
}
