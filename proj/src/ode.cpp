#include "tdnls/ode.hpp"

#include <algorithm>
#include <cmath>

namespace tdnls {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Embedded 4th-order weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

std::size_t Rk45DenseSolution::locate(double t) const {
    if (t <= knots_.front().t) return 0;
    if (t >= knots_.back().t) return knots_.size() - 2;
    std::size_t lo = 0, hi = knots_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (knots_[mid].t <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double Rk45DenseSolution::interp(double t, std::size_t comp, int order) const {
    const std::size_t k = locate(t);
    const Knot& a = knots_[k];
    const Knot& b = knots_[k + 1];
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;

    // Quintic Hermite basis in s with matching value/slope/curvature at both ends.
    const double y0 = a.y[comp], d0 = a.dy[comp] * h, c0 = a.ddy[comp] * h * h;
    const double y1 = b.y[comp], d1 = b.dy[comp] * h, c1 = b.ddy[comp] * h * h;

    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double H3 = 10 * s3 - 15 * s4 + 6 * s5;
    const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double H5 = 0.5 * s3 - s4 + 0.5 * s5;
    if (order == 0) {
        return y0 * H0 + d0 * H1 + c0 * H2 + y1 * H3 + d1 * H4 + c1 * H5;
    }
    if (order == 1) {
        const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
        const double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
        const double dH2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
        const double dH3 = 30 * s2 - 60 * s3 + 30 * s4;
        const double dH4 = -12 * s2 + 28 * s3 - 15 * s4;
        const double dH5 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
        return (y0 * dH0 + d0 * dH1 + c0 * dH2 + y1 * dH3 + d1 * dH4 + c1 * dH5) / h;
    }
    const double g0 = -60 * s + 180 * s2 - 120 * s3;
    const double g1 = -36 * s + 96 * s2 - 60 * s3;
    const double g2 = 1 - 9 * s + 18 * s2 - 10 * s3;
    const double g3 = 60 * s - 180 * s2 + 120 * s3;
    const double g4 = -24 * s + 84 * s2 - 60 * s3;
    const double g5 = 3 * s - 12 * s2 + 10 * s3;
    return (y0 * g0 + d0 * g1 + c0 * g2 + y1 * g3 + d1 * g4 + c1 * g5) / (h * h);
}

Rk45DenseSolution integrate_rk45(const OdeRhs& f,
                                 const OdeRhs& second_derivative,
                                 std::vector<double> y0,
                                 double t0,
                                 double t1,
                                 const Rk45Options& opts) {
    if (!(t1 > t0)) throw DomainError("integrate_rk45: need t1 > t0");
    const std::size_t dim = y0.size();

    std::vector<double> stops(opts.breakpoints);
    stops.push_back(t1);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::remove_if(stops.begin(), stops.end(),
                               [&](double s) { return s <= t0 + 1e-300 || s > t1; }),
                stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    Rk45DenseSolution sol;
    std::vector<double> y = std::move(y0), dy(dim), ddy(dim);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), yerr(dim), y5(dim);

    double t = t0;
    f(t, y, k1);
    second_derivative(t, y, ddy);
    sol.push({t, y, k1, ddy});

    double h = std::min(opts.initial_step, opts.max_step);
    std::size_t nsteps = 0;
    std::size_t stop_idx = 0;

    while (t < t1) {
        if (++nsteps > opts.max_steps)
            throw NonConvergence("integrate_rk45: exceeded max step count");
        const double next_stop = stops[stop_idx];
        h = std::min({h, opts.max_step, next_stop - t});

        auto stage = [&](double ts, const std::vector<double>& ys, std::vector<double>& ks) {
            f(ts, ys, ks);
        };

        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        stage(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        stage(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        stage(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        stage(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        stage(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        stage(t + h, y5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                          e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double d = (y5[i] - y4) / sc;
            err += d * d;
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            second_derivative(t, y, ddy);
            sol.push({t, y, k1, ddy});
            if (t >= next_stop - 1e-14 * std::max(1.0, std::abs(next_stop))) {
                ++stop_idx;
                if (stop_idx >= stops.size()) break;
            }
        }
        const double factor =
            std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < opts.min_step)
            throw NonConvergence("integrate_rk45: step size underflow");
    }
    return sol;
}

}  // namespace tdnls
