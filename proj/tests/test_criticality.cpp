#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tdnls/criticality.hpp"

using namespace tdnls;
using Catch::Approx;

TEST_CASE("threshold exponents reproduce the closed forms") {
    const auto t1 = threshold_exponents(1);
    CHECK(t1.p_n == Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t1.p_star_star == Approx(2.0).epsilon(1e-14));

    const auto t3 = threshold_exponents(3);
    CHECK(t3.p_n == Approx((3.0 + std::sqrt(24.0)) / 5.0).epsilon(1e-14));
    CHECK(t3.p_star == Approx((24.0 + std::sqrt(201.0)) / 25.0).epsilon(1e-14));
    CHECK(t3.p_star_star == Approx(7.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("threshold ordering p** < p* < p for n = 1..10") {
    for (int n = 1; n <= 10; ++n) {
        const auto th = threshold_exponents(n);
        INFO("n = " << n);
        CHECK(th.p_star_star < th.p_star);
        CHECK(th.p_star < th.p_n);
    }
}

TEST_CASE("strong dissipation condition") {
    CHECK(strong_dissipation({3.0, 0.0, -1.0}));  // Re lambda = 0
    // Boundary: (p-1)/(2 sqrt p) = 1/sqrt3 at p = 3, lambda = 2 - i 2/sqrt3.
    CHECK(strong_dissipation({3.0, 2.0, -2.0 / std::sqrt(3.0)}));
    CHECK_FALSE(strong_dissipation({3.0, 2.0, -0.5}));
}

TEST_CASE("zero model classification across the trichotomy") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 400.0);

    auto crit = classify(pair, 2, 2.0, 1.0, 400.0);  // p = 1 + 2/n
    CHECK(crit.cls == CriticalityClass::Critical);
    CHECK(crit.alpha == Approx(1.0).margin(1e-6));
    CHECK(crit.p_critical == Approx(2.0).epsilon(1e-12));

    auto super = classify(pair, 1, 4.0, 1.0, 400.0);
    CHECK(super.cls == CriticalityClass::SuperCritical);
    CHECK(super.delta_upper == Approx(0.5).margin(1e-6));  // n(p-1)/2 - 1

    auto sub = classify(pair, 1, 2.0, 1.0, 400.0);
    CHECK(sub.cls == CriticalityClass::SubCritical);
    CHECK(sub.delta_star == Approx(0.5).margin(1e-6));
}

TEST_CASE("example-1 criticality matches the mu closed form") {
    const double sigma0 = 3.0 / 16.0;  // mu = 1/4
    auto model = OscillatorModel::inverse_square_attractive(sigma0);
    // y2 carries a subdominant t^mu component that biases the tail fit like
    // t^{-1/2}; the window must sit far enough out for tol_class = 1e-2.
    auto pair = solve_fundamental(model, 20000.0);
    const int n = 1;
    const double p_crit = 1.0 + 2.0 / (n * (1.0 - 0.25));

    auto rep = classify(pair, n, p_crit, 1.0, 20000.0);
    CHECK(rep.p_critical == Approx(p_crit).epsilon(1e-12));
    CHECK(rep.cls == CriticalityClass::Critical);

    auto rep_super = classify(pair, n, p_crit + 0.5, 1.0, 20000.0);
    CHECK(rep_super.cls == CriticalityClass::SuperCritical);
}

TEST_CASE("power-law classification matches the sign of n(p-1)beta/2 - 1") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 600.0);  // beta = 1
    for (int n : {1, 2, 3}) {
        for (double p : {1.3, 1.8, 2.2, 3.0, 4.0}) {
            const double alpha = 0.5 * n * (p - 1.0);
            auto rep = classify(pair, n, p, 1.0, 600.0);
            INFO("n=" << n << " p=" << p);
            CHECK(rep.alpha == Approx(alpha).margin(1e-3));
            if (std::abs(alpha - 1.0) <= 1e-2) {
                CHECK(rep.cls == CriticalityClass::Critical);
            } else if (alpha < 1.0) {
                CHECK(rep.cls == CriticalityClass::SubCritical);
                CHECK(rep.delta_star == Approx(1.0 - alpha).margin(1e-3));
            } else {
                CHECK(rep.cls == CriticalityClass::SuperCritical);
                CHECK(rep.delta_upper == Approx(alpha - 1.0).margin(1e-3));
            }
        }
    }
}

TEST_CASE("predicted rates honor theorem hypotheses") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 200.0);

    // Critical, small-data path: n = 1, p = 3, s = 2.
    {
        auto rep = classify(pair, 1, 3.0, 1.0, 200.0);
        auto derived = build_derived(pair, 1, 3.0, 1.0, 200.0);
        predicted_rates(rep, 1, 3.0, 2.0, {3.0, 0.0, -1.0}, derived);
        bool thm1_l2 = false;
        for (const auto& r : rep.predicted)
            if (r.theorem == "thm1" && r.norm == "L2" && r.applicable) {
                thm1_l2 = true;
                CHECK(r.exponent == Approx(-2.0 / (2.0 * 3.0)));  // -s/((p-1)(s+n))
            }
        CHECK(thm1_l2);
    }

    // s outside (n/2, p) disables theorem 1.
    {
        auto rep = classify(pair, 1, 3.0, 1.0, 200.0);
        auto derived = build_derived(pair, 1, 3.0, 1.0, 200.0);
        predicted_rates(rep, 1, 3.0, 3.5, {3.0, 0.0, -1.0}, derived);
        for (const auto& r : rep.predicted)
            if (r.theorem == "thm1") CHECK_FALSE(r.applicable);
    }

    // No strong dissipation disables theorem 2.
    {
        auto rep = classify(pair, 1, 2.0, 1.0, 200.0);
        auto derived = build_derived(pair, 1, 2.0, 1.0, 200.0);
        predicted_rates(rep, 1, 2.0, 1.2, {2.0, 2.0, -0.1}, derived);
        for (const auto& r : rep.predicted)
            if (r.theorem == "thm2") {
                CHECK_FALSE(r.applicable);
                CHECK(r.reason == "strong dissipation fails");
            }
    }
}

TEST_CASE("sigma = 0 branch selection in theorem 3") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 200.0);
    auto derived = build_derived(pair, 1, 2.5, 1.0, 200.0);

    // p = 2.5 lies in [p*(1), 3): first branch with exponent -2 delta*/(3(p-1)).
    auto rep = classify(pair, 1, 2.5, 1.0, 200.0);
    predicted_rates(rep, 1, 2.5, 1.5, {2.5, 0.0, -1.0}, derived);
    bool found = false;
    for (const auto& r : rep.predicted)
        if (r.theorem == "thm3" && r.applicable) {
            found = true;
            const double dstar = 1.0 - 0.5 * (2.5 - 1.0);
            CHECK(r.exponent == Approx(-2.0 * dstar / (1.5 * 3.0)));
        }
    CHECK(found);
}
