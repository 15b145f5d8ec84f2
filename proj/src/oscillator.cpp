#include "tdnls/oscillator.hpp"

#include <algorithm>
#include <cmath>

#include "tdnls/fitting.hpp"

namespace tdnls {

namespace {

// Root of k * tanh(k * ts) = r (r >= 0) in k >= 0, by bisection.
double solve_tanh_rate(double r, double ts) {
    if (r <= 0.0) return 0.0;
    double lo = 0.0, hi = std::max(1.0, 2.0 * r / ts);
    while (hi * std::tanh(hi * ts) < r) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::tanh(mid * ts) < r)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Root of w * tan(w * ts) = r (r >= 0) with w * ts in [0, pi/2).
double solve_tan_rate(double r, double ts) {
    if (r <= 0.0) return 0.0;
    double lo = 0.0, hi = (M_PI / 2.0 - 1e-9) / ts;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::tan(mid * ts) < r)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double tab_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return ys[k] * (1.0 - w) + ys[k + 1] * w;
}

}  // namespace

double OscillatorModel::sigma(double t) const {
    switch (kind) {
        case SigmaKind::Zero:
            return 0.0;
        case SigmaKind::InverseSquareAttractive:
            if (t < t_start) return glue_constant();
            return sigma0 / (t * t);
        case SigmaKind::InverseSquareRepulsive:
            if (t < t_start) return glue_constant();
            return -rho / (t * t);
        case SigmaKind::SubQuadratic:
            return c * std::pow(1.0 + std::abs(t), -q);
        case SigmaKind::Tabulated:
            return tab_interp(knots, sigma_vals, t);
    }
    return 0.0;
}

double OscillatorModel::glue_constant() const {
    if (kind == SigmaKind::InverseSquareAttractive) {
        // y1 = cosh(kappa t) on [0, ts] continues as t^mu iff
        // kappa tanh(kappa ts) = mu / ts.
        const double mu = power_exponent().value();
        const double kappa = solve_tanh_rate(mu / t_start, t_start);
        return -kappa * kappa;
    }
    if (kind == SigmaKind::InverseSquareRepulsive) {
        // y1 = cos(omega t) continues as t^{theta_-} iff
        // omega tan(omega ts) = |theta_-| / ts.
        const double th = power_exponent().value();
        const double omega = solve_tan_rate(-th / t_start, t_start);
        return omega * omega;
    }
    return 0.0;
}

std::optional<double> OscillatorModel::power_exponent() const {
    if (kind == SigmaKind::Zero) return 0.0;
    if (kind == SigmaKind::InverseSquareAttractive)
        return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * sigma0));
    if (kind == SigmaKind::InverseSquareRepulsive)
        return 0.5 * (1.0 - std::sqrt(1.0 + 4.0 * rho));
    return std::nullopt;
}

std::optional<double> OscillatorModel::y2_growth_exponent() const {
    if (kind == SigmaKind::Zero) return 1.0;
    if (auto m = power_exponent()) return 1.0 - *m;
    if (kind == SigmaKind::SubQuadratic) return 1.0;  // y2/t -> const
    return std::nullopt;
}

std::string OscillatorModel::kind_name() const {
    switch (kind) {
        case SigmaKind::Zero: return "zero";
        case SigmaKind::InverseSquareAttractive: return "inverse_square_attractive";
        case SigmaKind::InverseSquareRepulsive: return "inverse_square_repulsive";
        case SigmaKind::SubQuadratic: return "sub_quadratic";
        case SigmaKind::Tabulated: return "tabulated";
    }
    return "?";
}

void OscillatorModel::validate() const {
    if (t_start <= 0.0 && (kind == SigmaKind::InverseSquareAttractive ||
                           kind == SigmaKind::InverseSquareRepulsive))
        throw DomainError("oscillator: t_start must be positive for inverse-square kinds");
    if (T0 < 0.0) throw DomainError("oscillator: T0 must be >= 0");
    if (kind == SigmaKind::InverseSquareAttractive && (sigma0 < 0.0 || sigma0 >= 0.25))
        throw DomainError("oscillator: sigma0 must lie in [0, 1/4)");
    if (kind == SigmaKind::InverseSquareRepulsive && rho < 0.0)
        throw DomainError("oscillator: rho must be >= 0");
    if (kind == SigmaKind::SubQuadratic && q <= 2.0)
        throw DomainError("oscillator: sub-quadratic kind needs q > 2 so t^2 sigma -> 0");
    if (kind == SigmaKind::Tabulated) {
        if (knots.size() < 2 || knots.size() != sigma_vals.size())
            throw DomainError("oscillator: tabulated model needs matched knots/values");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1]))
                throw DomainError("oscillator: tabulated knots must be strictly increasing");
    }
}

OscillatorModel OscillatorModel::zero(double T0) {
    OscillatorModel m;
    m.kind = SigmaKind::Zero;
    m.T0 = T0;
    m.t_start = T0;
    return m;
}

OscillatorModel OscillatorModel::inverse_square_attractive(double sigma0, double t_start,
                                                           double T0) {
    OscillatorModel m;
    m.kind = SigmaKind::InverseSquareAttractive;
    m.sigma0 = sigma0;
    m.t_start = t_start;
    m.T0 = T0;
    m.validate();
    return m;
}

OscillatorModel OscillatorModel::inverse_square_repulsive(double rho, double t_start,
                                                          double T0) {
    OscillatorModel m;
    m.kind = SigmaKind::InverseSquareRepulsive;
    m.rho = rho;
    m.t_start = t_start;
    m.T0 = T0;
    m.validate();
    return m;
}

OscillatorModel OscillatorModel::sub_quadratic(double c, double q, double T0) {
    OscillatorModel m;
    m.kind = SigmaKind::SubQuadratic;
    m.c = c;
    m.q = q;
    m.T0 = T0;
    m.t_start = T0;
    m.validate();
    return m;
}

OscillatorModel OscillatorModel::tabulated(std::vector<double> knots,
                                           std::vector<double> vals, double T0) {
    OscillatorModel m;
    m.kind = SigmaKind::Tabulated;
    m.knots = std::move(knots);
    m.sigma_vals = std::move(vals);
    m.T0 = T0;
    m.t_start = T0;
    m.validate();
    return m;
}

// Closed-form representation: on [0, ts] the glue solution, on [ts, inf) a
// combination a * t^{m1} + b * t^{m2} per fundamental solution.
struct FundamentalPair::ClosedFormData {
    double ts = 0.0;         // power law begins here (0 for the Zero kind)
    double glue = 0.0;       // constant sigma on [0, ts]
    double m1 = 0.0, m2 = 1.0;  // power exponents (m1 = decaying branch)
    // coefficients: y_j(t) = a[j] t^{m1} + b[j] t^{m2}
    double a[2] = {0.0, 0.0};
    double b[2] = {0.0, 0.0};

    Sample eval(double t) const {
        Sample s{};
        if (t < ts && ts > 0.0) {
            // Constant glue: cos/cosh pair with exact initial conditions.
            if (glue > 0.0) {
                const double w = std::sqrt(glue);
                s.y1 = std::cos(w * t);
                s.dy1 = -w * std::sin(w * t);
                s.y2 = std::sin(w * t) / w;
                s.dy2 = std::cos(w * t);
            } else if (glue < 0.0) {
                const double k = std::sqrt(-glue);
                s.y1 = std::cosh(k * t);
                s.dy1 = k * std::sinh(k * t);
                s.y2 = std::sinh(k * t) / k;
                s.dy2 = std::cosh(k * t);
            } else {
                s.y1 = 1.0;
                s.dy1 = 0.0;
                s.y2 = t;
                s.dy2 = 1.0;
            }
            return s;
        }
        const double t1 = std::pow(t, m1), t2 = std::pow(t, m2);
        const double d1 = m1 * t1 / t, d2 = m2 * t2 / t;
        s.y1 = a[0] * t1 + b[0] * t2;
        s.dy1 = a[0] * d1 + b[0] * d2;
        s.y2 = a[1] * t1 + b[1] * t2;
        s.dy2 = a[1] * d1 + b[1] * d2;
        return s;
    }
};

FundamentalPair::FundamentalPair(OscillatorModel model, double horizon, double wtol,
                                 std::shared_ptr<const ClosedFormData> cf)
    : model_(std::move(model)),
      horizon_(horizon),
      wronskian_tol_(wtol),
      method_(PairMethod::ClosedForm),
      closed_(std::move(cf)) {}

FundamentalPair::FundamentalPair(OscillatorModel model, double horizon, double wtol,
                                 std::shared_ptr<const Rk45DenseSolution> dense)
    : model_(std::move(model)),
      horizon_(horizon),
      wronskian_tol_(wtol),
      method_(PairMethod::NumericODE),
      dense_(std::move(dense)) {}

FundamentalPair::Sample FundamentalPair::eval(double t) const {
    if (method_ == PairMethod::ClosedForm) {
        if (model_.kind == SigmaKind::Zero) return {1.0, 0.0, t, 1.0};
        return closed_->eval(t);
    }
    // Derivatives come from the quintic of y itself, which carries exact
    // slope and curvature at the knots; the raw y' component is only the
    // integration state.
    Sample s;
    s.y1 = dense_->value(t, 0);
    s.dy1 = dense_->derivative(t, 0);
    s.y2 = dense_->value(t, 2);
    s.dy2 = dense_->derivative(t, 2);
    return s;
}

FundamentalPair::Curvature FundamentalPair::eval_ypp(double t) const {
    if (method_ == PairMethod::ClosedForm) {
        if (model_.kind == SigmaKind::Zero) return {0.0, 0.0};
        const auto& cf = *closed_;
        if (t < cf.ts && cf.ts > 0.0) {
            const auto s = cf.eval(t);
            return {-cf.glue * s.y1, -cf.glue * s.y2};
        }
        const double p1 = cf.m1 * (cf.m1 - 1.0) * std::pow(t, cf.m1 - 2.0);
        const double p2 = cf.m2 * (cf.m2 - 1.0) * std::pow(t, cf.m2 - 2.0);
        return {cf.a[0] * p1 + cf.b[0] * p2, cf.a[1] * p1 + cf.b[1] * p2};
    }
    return {dense_->second_derivative(t, 0), dense_->second_derivative(t, 2)};
}

namespace {

// Match a * t^{m1} + b * t^{m2} to value v and slope d at ts.
void match_power_coeffs(double ts, double m1, double m2, double v, double d, double& a,
                        double& b) {
    const double t1 = std::pow(ts, m1), t2 = std::pow(ts, m2);
    const double d1 = m1 * t1 / ts, d2 = m2 * t2 / ts;
    const double det = t1 * d2 - t2 * d1;  // = (m2 - m1) t1 t2 / ts, nonzero for m1 != m2
    a = (v * d2 - d * t2) / det;
    b = (d * t1 - v * d1) / det;
}

}  // namespace

FundamentalPair solve_fundamental(const OscillatorModel& model, double horizon, double tol,
                                  std::optional<PairMethod> force_method) {
    model.validate();
    if (!(horizon > 0.0)) throw DomainError("solve_fundamental: horizon must be positive");

    const bool closed_available = model.kind == SigmaKind::Zero ||
                                  model.kind == SigmaKind::InverseSquareAttractive ||
                                  model.kind == SigmaKind::InverseSquareRepulsive;
    const PairMethod method =
        force_method.value_or(closed_available ? PairMethod::ClosedForm
                                               : PairMethod::NumericODE);

    if (method == PairMethod::ClosedForm) {
        if (!closed_available)
            throw DomainError("solve_fundamental: no closed form for " + model.kind_name());
        auto cf = std::make_shared<FundamentalPair::ClosedFormData>();
        if (model.kind == SigmaKind::Zero) {
            cf->ts = 0.0;
            cf->m1 = 0.0;
            cf->m2 = 1.0;
            cf->a[0] = 1.0;
            cf->b[1] = 1.0;
        } else {
            const double mu = model.power_exponent().value();
            cf->ts = model.t_start;
            cf->glue = model.glue_constant();
            cf->m1 = mu;
            cf->m2 = 1.0 - mu;
            // Interface values of the glue solution at ts.
            FundamentalPair::ClosedFormData glue_only;
            glue_only.ts = model.t_start * 2.0;  // force the glue branch
            glue_only.glue = cf->glue;
            const auto s = glue_only.eval(model.t_start);
            match_power_coeffs(cf->ts, cf->m1, cf->m2, s.y1, s.dy1, cf->a[0], cf->b[0]);
            match_power_coeffs(cf->ts, cf->m1, cf->m2, s.y2, s.dy2, cf->a[1], cf->b[1]);
        }
        return FundamentalPair(model, horizon, tol, std::move(cf));
    }

    auto rhs = [&model](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        const double s = model.sigma(t);
        dydt[0] = y[1];
        dydt[1] = -s * y[0];
        dydt[2] = y[3];
        dydt[3] = -s * y[2];
    };
    // Curvature of the y-components for the dense interpolant; the y'
    // components are never interpolated so their entries stay zero.
    auto rhs2 = [&model](double t, const std::vector<double>& y, std::vector<double>& dd) {
        const double s = model.sigma(t);
        dd[0] = -s * y[0];
        dd[1] = 0.0;
        dd[2] = -s * y[2];
        dd[3] = 0.0;
    };
    Rk45Options opts;
    opts.rel_tol = std::min(tol, 1e-12);
    opts.abs_tol = std::min(tol, 1e-12);
    opts.max_step = 0.1;
    if (model.kind == SigmaKind::InverseSquareAttractive ||
        model.kind == SigmaKind::InverseSquareRepulsive)
        opts.breakpoints.push_back(model.t_start);
    if (model.kind == SigmaKind::Tabulated)
        opts.breakpoints = model.knots;

    auto dense = std::make_shared<Rk45DenseSolution>(
        integrate_rk45(rhs, rhs2, {1.0, 0.0, 0.0, 1.0}, 0.0, horizon, opts));
    return FundamentalPair(model, horizon, tol, std::move(dense));
}

double max_ode_residual(const FundamentalPair& pair, double t0, double t1,
                        std::size_t samples) {
    double worst = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / samples;
        const double s = pair.model().sigma(t);
        const auto m = pair.eval(t);
        const auto c = pair.eval_ypp(t);
        worst = std::max({worst, std::abs(c.ypp1 + s * m.y1), std::abs(c.ypp2 + s * m.y2)});
    }
    return worst;
}

ConditionsReport check_conditions(const FundamentalPair& pair, double T0, double horizon,
                                  const ConditionsOptions& opts) {
    if (!(horizon > T0)) throw DomainError("check_conditions: need horizon > T0");
    if (opts.samples < opts.min_samples)
        throw InsufficientRange("check_conditions: fewer samples than the configured minimum");

    ConditionsReport rep;
    rep.ok_B = true;

    // c0 = min |y2| over the whole window, dense uniform scan.
    double c0 = std::numeric_limits<double>::infinity();
    const std::size_t scan = std::max<std::size_t>(4 * opts.samples, 2048);
    for (std::size_t i = 0; i <= scan; ++i) {
        const double t = T0 + (horizon - T0) * static_cast<double>(i) / scan;
        const auto s = pair.eval(t);
        if (!std::isfinite(s.y1) || !std::isfinite(s.y2) || !std::isfinite(s.dy1) ||
            !std::isfinite(s.dy2))
            rep.ok_B = false;
        c0 = std::min(c0, std::abs(s.y2));
    }
    rep.c0 = c0;
    rep.ok_A = c0 > opts.c0_floor;

    // delta from a log-log fit over the last half of [T0, horizon].
    const double lo = 0.5 * (T0 + horizon);
    std::vector<double> lt, lr;
    for (std::size_t i = 0; i < opts.samples; ++i) {
        const double s = static_cast<double>(i) / (opts.samples - 1);
        const double t = lo * std::pow(horizon / lo, s);
        const auto sm = pair.eval(t);
        if (std::abs(sm.y2) <= opts.c0_floor) continue;
        const double ratio = std::abs(sm.y1 / sm.y2);
        if (ratio <= 0.0) continue;
        lt.push_back(std::log(t));
        lr.push_back(std::log(ratio));
    }
    if (lt.size() < opts.min_samples)
        throw InsufficientRange("check_conditions: not enough usable samples for the fit");
    const LineFit lf = fit_line(lt, lr);
    rep.delta = -lf.slope;
    rep.prefactor = std::exp(lf.intercept);
    rep.fit_residual = lf.rms_residual;
    rep.ok_C = rep.ok_A && (-lf.slope >= opts.delta_min);
    return rep;
}

OscillatorDerived::OscillatorDerived(const FundamentalPair& pair, int n, double p, double T0,
                                     double horizon, double quad_tol)
    : pair_(pair), n_(n), p_(p), T0_(T0), horizon_(horizon) {
    if (p <= 1.0) throw DomainError("build_derived: need p > 1");
    if (n < 1) throw DomainError("build_derived: need n >= 1");
    if (!(horizon > T0)) throw DomainError("build_derived: need horizon > T0");

    // Lens frame is undefined where y1 vanishes; Y2 is undefined where y2
    // does.  Sign changes on the scan grid betray zero crossings that a
    // min-of-samples check would miss.
    double min_y1 = std::numeric_limits<double>::infinity();
    double min_y2 = std::numeric_limits<double>::infinity();
    bool y1_flips = false, y2_flips = false;
    double prev_y1 = 0.0, prev_y2 = 0.0;
    const std::size_t scan = 4096;
    for (std::size_t i = 0; i <= scan; ++i) {
        const double t = T0 + (horizon - T0) * static_cast<double>(i) / scan;
        const auto s = pair_.eval(t);
        min_y1 = std::min(min_y1, std::abs(s.y1));
        min_y2 = std::min(min_y2, std::abs(s.y2));
        if (i > 0 && s.y1 * prev_y1 <= 0.0) y1_flips = true;
        if (i > 0 && s.y2 * prev_y2 <= 0.0) y2_flips = true;
        prev_y1 = s.y1;
        prev_y2 = s.y2;
    }
    if (y1_flips || min_y1 < 1e-10)
        throw SingularY1("build_derived: y1 vanishes on [T0, horizon]");
    if (y2_flips || min_y2 < 1e-12)
        throw DomainError("build_derived: y2 vanishes on [T0, horizon] (condition (A) fails)");
    c0_ = min_y2;

    const double expo = 0.5 * static_cast<double>(n) * (p - 1.0);
    auto weight = [pair = pair_, expo](double t) {
        return std::pow(std::abs(pair.y2(t)), -expo);
    };
    y2_integral_ = std::make_shared<CumulativeIntegral>(weight, T0, horizon, quad_tol, 2048);

    try {
        delta_ = check_conditions(pair_, T0, horizon).delta;
    } catch (const InsufficientRange&) {
        delta_ = 0.0;
    }
}

double OscillatorDerived::Y(double t) const {
    const auto s = pair_.eval(t);
    if (std::abs(s.y1) < 1e-300) throw SingularY1("Y(t): y1 vanished");
    return s.y2 / (2.0 * s.y1);
}

double OscillatorDerived::dY(double t) const {
    const double y1 = pair_.y1(t);
    return 1.0 / (2.0 * y1 * y1);
}

double OscillatorDerived::dissipation_weight(double t) const {
    const double expo = 0.5 * static_cast<double>(n_) * (p_ - 1.0);
    return std::pow(std::abs(pair_.y2(t)), -expo);
}

OscillatorDerived build_derived(const FundamentalPair& pair, int n, double p, double T0,
                                double horizon, double quad_tol) {
    return OscillatorDerived(pair, n, p, T0, horizon, quad_tol);
}

}  // namespace tdnls
