#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tdnls/oscillator.hpp"
#include "tdnls/fitting.hpp"
#include "tdnls/quadrature.hpp"

using namespace tdnls;
using Catch::Approx;

namespace {

// Log-log slope oracle for power-law growth.
double fitted_exponent(const FundamentalPair& pair, bool second, double a, double b) {
    std::vector<double> lt, ly;
    for (int i = 0; i < 200; ++i) {
        const double t = a * std::pow(b / a, i / 199.0);
        const auto s = pair.eval(t);
        lt.push_back(std::log(t));
        ly.push_back(std::log(std::abs(second ? s.y2 : s.y1)));
    }
    return fit_line(lt, ly).slope;
}

}  // namespace

TEST_CASE("zero model closed form is exact") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 100.0);
    CHECK(pair.method() == PairMethod::ClosedForm);
    CHECK(pair.y1(3.7) == 1.0);
    CHECK(pair.dy1(3.7) == 0.0);
    CHECK(pair.y2(3.7) == 3.7);
    CHECK(pair.dy2(3.7) == 1.0);
    CHECK(pair.wronskian(41.0) == 1.0);
}

TEST_CASE("wronskian stays pinned at one for every built-in model") {
    std::vector<OscillatorModel> models = {
        OscillatorModel::zero(),
        OscillatorModel::inverse_square_attractive(3.0 / 16.0),
        OscillatorModel::inverse_square_attractive(0.24),
        OscillatorModel::inverse_square_repulsive(1.0),
        OscillatorModel::sub_quadratic(1.0, 3.0),
        OscillatorModel::tabulated({0.0, 5.0, 20.0, 100.0}, {0.3, 0.05, 0.01, 0.0}),
    };
    for (const auto& m : models) {
        auto pair = solve_fundamental(m, 100.0, 1e-10, PairMethod::NumericODE);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = 100.0 * i / 1000.0;
            worst = std::max(worst, std::abs(pair.wronskian(t) - 1.0));
        }
        INFO("model " << m.kind_name());
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("attractive inverse-square power exponents (sigma0 = 3/16)") {
    auto model = OscillatorModel::inverse_square_attractive(3.0 / 16.0);
    CHECK(model.power_exponent().value() == Approx(0.25).epsilon(1e-14));

    auto numeric = solve_fundamental(model, 2000.0, 1e-10, PairMethod::NumericODE);
    // Large-t slopes of y1 and y2 fitted from the numeric solution.  y2 keeps
    // a subdominant t^mu component, so the fit window sits far out.
    CHECK(fitted_exponent(numeric, false, 50.0, 2000.0) == Approx(0.25).margin(2e-3));
    CHECK(fitted_exponent(numeric, true, 500.0, 2000.0) == Approx(0.75).margin(1e-2));
}

TEST_CASE("closed form matches the numeric pair on [T0, 10 T0]") {
    for (auto model : {OscillatorModel::inverse_square_attractive(3.0 / 16.0),
                       OscillatorModel::inverse_square_repulsive(1.0)}) {
        auto cf = solve_fundamental(model, 20.0);
        auto nm = solve_fundamental(model, 20.0, 1e-10, PairMethod::NumericODE);
        REQUIRE(cf.method() == PairMethod::ClosedForm);
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = model.T0 + (10.0 * model.T0 - model.T0) * i / 400.0;
            const auto a = cf.eval(t);
            const auto b = nm.eval(t);
            worst = std::max(worst, std::abs(a.y1 - b.y1) / std::abs(a.y1));
            worst = std::max(worst, std::abs(a.y2 - b.y2) / std::abs(a.y2));
        }
        INFO("model " << model.kind_name());
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("ode residual of the dense output is small") {
    auto model = OscillatorModel::inverse_square_attractive(0.2);
    auto pair = solve_fundamental(model, 50.0, 1e-10, PairMethod::NumericODE);
    CHECK(max_ode_residual(pair, 0.0, 50.0) <= 1e-8);
    auto cf = solve_fundamental(model, 50.0);
    CHECK(max_ode_residual(cf, 0.0, 50.0) <= 1e-12);
}

TEST_CASE("conditions report for the zero model") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 100.0);
    auto rep = check_conditions(pair, 1.0, 100.0);
    CHECK(rep.ok_A);
    CHECK(rep.ok_B);
    CHECK(rep.ok_C);
    CHECK(rep.c0 == Approx(1.0));             // min |y2| over [1, 100]
    CHECK(rep.delta == Approx(1.0).margin(1e-10));  // |y1/y2| = 1/t exactly
}

TEST_CASE("example-1 conditions give delta = 1 - 2 mu") {
    const double sigma0 = 3.0 / 16.0;  // mu = 1/4, delta = 1/2
    auto pair = solve_fundamental(OscillatorModel::inverse_square_attractive(sigma0), 400.0);
    auto rep = check_conditions(pair, 1.0, 400.0);
    CHECK(rep.ok_C);
    CHECK(rep.delta == Approx(0.5).margin(0.02));
}

TEST_CASE("example-2 conditions give delta = 1 - 2 theta_minus") {
    const double rho = 1.0;  // theta_- = (1 - sqrt 5)/2, delta = sqrt 5
    auto pair = solve_fundamental(OscillatorModel::inverse_square_repulsive(rho), 400.0);
    auto rep = check_conditions(pair, 1.0, 400.0);
    const double delta_expected = std::sqrt(5.0);
    CHECK(rep.ok_C);
    CHECK(rep.delta == Approx(delta_expected).margin(0.05));
}

TEST_CASE("sub-quadratic sigma has y2/t approaching a constant") {
    auto pair = solve_fundamental(OscillatorModel::sub_quadratic(1.0, 3.0), 1600.0,
                                  1e-10, PairMethod::NumericODE);
    // Convergence of y2/t is O(1/t) for this tail, so compare far out.
    const double r1 = pair.y2(800.0) / 800.0;
    const double r2 = pair.y2(1600.0) / 1600.0;
    CHECK(std::abs(r1 - r2) / std::abs(r2) < 5e-3);
    CHECK(fitted_exponent(pair, true, 400.0, 1600.0) == Approx(1.0).margin(1e-2));
}

TEST_CASE("Y2 for the zero model at the borderline power is log t") {
    // n(p-1)/2 = 1 at p = 1 + 2/n; oracle: adaptive quadrature of 1/t.
    auto pair = solve_fundamental(OscillatorModel::zero(), 100.0);
    auto derived = build_derived(pair, 2, 2.0, 1.0, 100.0);
    for (double t : {2.0, 10.0, 50.0, 100.0}) {
        const double oracle =
            adaptive_simpson([](double tau) { return 1.0 / tau; }, 1.0, t, 1e-10);
        CHECK(derived.Y2(t) == Approx(oracle).margin(1e-7));
        CHECK(derived.Y2(t) == Approx(std::log(t)).margin(1e-6));
    }
}

TEST_CASE("Y is y2 / (2 y1) and integrates 1/(2 y1^2)") {
    auto pair = solve_fundamental(OscillatorModel::zero(), 50.0);
    auto derived = build_derived(pair, 1, 3.0, 1.0, 50.0);
    CHECK(derived.Y(7.0) == Approx(3.5));

    auto model = OscillatorModel::inverse_square_attractive(3.0 / 16.0);
    auto pair2 = solve_fundamental(model, 50.0);
    auto derived2 = build_derived(pair2, 1, 3.0, 1.0, 50.0);
    // Finite-difference check of Y' = 1/(2 y1^2).
    for (double t : {2.0, 5.0, 20.0, 40.0}) {
        const double h = 1e-5;
        const double fd = (derived2.Y(t + h) - derived2.Y(t - h)) / (2.0 * h);
        CHECK(fd * 2.0 * std::pow(pair2.y1(t), 2) == Approx(1.0).margin(1e-7));
    }
}

TEST_CASE("Y2 is nondecreasing and converges in the super-critical regime") {
    // Example 1 with mu = 1/4: y2 ~ t^{3/4}; n = 1, p = 6 makes the exponent
    // -(3/4)(5/2) = -15/8 < -1, so the tail integral converges.
    auto model = OscillatorModel::inverse_square_attractive(3.0 / 16.0);
    auto pair = solve_fundamental(model, 2000.0);
    auto derived = build_derived(pair, 1, 6.0, 1.0, 2000.0);
    double prev = 0.0;
    for (double t = 1.0; t <= 2000.0; t += 25.0) {
        const double v = derived.Y2(t);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    // Quadrature oracle for the analytic tail: both evaluations near the
    // horizon agree to the tail remainder scale.
    const double far = derived.Y2(2000.0);
    const double near = derived.Y2(1000.0);
    CHECK(far - near < 2e-2 * far);
}

TEST_CASE("build_derived rejects vanishing y1") {
    // Constant sigma = 1 makes y1 = cos t vanish at pi/2.
    auto model = OscillatorModel::tabulated({0.0, 10.0}, {1.0, 1.0}, 0.0);
    auto pair = solve_fundamental(model, 10.0, 1e-10, PairMethod::NumericODE);
    CHECK_THROWS_AS(build_derived(pair, 1, 3.0, 0.0, 10.0), SingularY1);
}

TEST_CASE("errors surface for bad inputs") {
    CHECK_THROWS_AS(OscillatorModel::inverse_square_attractive(0.3), DomainError);
    CHECK_THROWS_AS(OscillatorModel::sub_quadratic(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(solve_fundamental(OscillatorModel::zero(), -1.0), DomainError);
    auto pair = solve_fundamental(OscillatorModel::zero(), 10.0);
    CHECK_THROWS_AS(check_conditions(pair, 5.0, 4.0), DomainError);
    CHECK_THROWS_AS(build_derived(pair, 1, 0.5, 1.0, 10.0), DomainError);
}
