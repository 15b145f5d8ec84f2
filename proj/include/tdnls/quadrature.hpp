#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace tdnls {

// Composite adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-8, int max_depth = 24);

// Cumulative integral of f over [a, b].  A node table is precomputed once
// (geometric spacing, each panel integrated adaptively); evaluations add an
// adaptive tail integral from the nearest lower node, so the result carries
// the full absolute tolerance at every point.  Immutable after construction.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double a, double b,
                       double abs_tol = 1e-8, std::size_t panels = 1024);

    double operator()(double x) const;
    double a() const { return t_.front(); }
    double b() const { return t_.back(); }
    double total() const { return value_.back(); }

private:
    std::function<double(double)> f_;
    double tol_;
    std::vector<double> t_;
    std::vector<double> value_;  // integral from a to t_[i]
};

}  // namespace tdnls
