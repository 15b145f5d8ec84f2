#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "tdnls/errors.hpp"

namespace tdnls {

// Adaptive Dormand-Prince RK5(4) for small systems, with the accepted steps
// kept so the solution can be evaluated anywhere afterwards.  Dense output is
// quintic Hermite per interval, built from (y, y', y'') at the interval ends;
// the second derivative comes from the caller-supplied rhs so the interpolant
// does not need extra stages.
class Rk45DenseSolution {
public:
    struct Knot {
        double t;
        std::vector<double> y;
        std::vector<double> dy;   // f(t, y)
        std::vector<double> ddy;  // df/dt along the trajectory, supplied by the driver
    };

    const std::vector<Knot>& knots() const { return knots_; }
    double t_begin() const { return knots_.front().t; }
    double t_end() const { return knots_.back().t; }
    std::size_t dimension() const { return knots_.front().y.size(); }

    // Value of component i at time t (quintic Hermite inside each step).
    double value(double t, std::size_t i) const { return interp(t, i, 0); }
    // Time derivative of component i at time t.
    double derivative(double t, std::size_t i) const { return interp(t, i, 1); }
    // Second time derivative of the interpolant (for residual checks).
    double second_derivative(double t, std::size_t i) const { return interp(t, i, 2); }

    void push(Knot k) { knots_.push_back(std::move(k)); }

private:
    double interp(double t, std::size_t comp, int order) const;
    std::size_t locate(double t) const;

    std::vector<Knot> knots_;
};

struct Rk45Options {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double initial_step = 1e-3;
    double min_step = 1e-14;
    std::size_t max_steps = 2000000;
    // Times the integrator must land on exactly (e.g. coefficient breakpoints).
    std::vector<double> breakpoints;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

// Integrates y' = f(t, y) over [t0, t1], t1 > t0.  second_derivative supplies
// d/dt f(t, y(t)) for the dense interpolant (for y'' + sigma y = 0 systems it
// is available in closed form).  Throws NonConvergence if step control stalls.
Rk45DenseSolution integrate_rk45(const OdeRhs& f,
                                 const OdeRhs& second_derivative,
                                 std::vector<double> y0,
                                 double t0,
                                 double t1,
                                 const Rk45Options& opts = {});

}  // namespace tdnls
