#include "tdnls/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "tdnls/errors.hpp"

namespace tdnls {

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    // A non-finite estimate means the integrand is singular in this panel;
    // refining cannot converge, so bail out with the best available value.
    if (depth <= 0 || !std::isfinite(delta) || std::abs(delta) <= 15.0 * tol) {
        return left + right + (std::isfinite(delta) ? delta / 15.0 : 0.0);
    }
    return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double sign = (b >= a) ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, fm, b, fb);
    return sign * adaptive_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double a, double b,
                                       double abs_tol, std::size_t panels)
    : f_(std::move(f)), tol_(abs_tol) {
    if (!(b > a)) throw DomainError("CumulativeIntegral: need b > a");
    panels = std::max<std::size_t>(panels, 8);
    t_.reserve(panels + 1);
    value_.reserve(panels + 1);
    // Geometric node layout when the interval spans decades, uniform otherwise.
    const double span = b - a;
    const bool geometric = a > 0.0 && b / a > 8.0;
    t_.push_back(a);
    for (std::size_t i = 1; i <= panels; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(panels);
        t_.push_back(geometric ? a * std::pow(b / a, s) : a + span * s);
    }
    t_.back() = b;
    value_.push_back(0.0);
    const double panel_tol = tol_ / static_cast<double>(panels);
    for (std::size_t i = 1; i < t_.size(); ++i) {
        value_.push_back(value_[i - 1] + adaptive_simpson(f_, t_[i - 1], t_[i], panel_tol));
    }
}

double CumulativeIntegral::operator()(double x) const {
    if (x <= t_.front()) return 0.0;
    if (x >= t_.back()) return value_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
    return value_[k] + adaptive_simpson(f_, t_[k], x, tol_ / static_cast<double>(t_.size()));
}

}  // namespace tdnls
