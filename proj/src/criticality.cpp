#include "tdnls/criticality.hpp"

#include <cmath>

#include "tdnls/fitting.hpp"

namespace tdnls {

bool strong_dissipation(const Nonlinearity& nl) {
    nl.validate();
    return (nl.p - 1.0) / (2.0 * std::sqrt(nl.p)) * std::abs(nl.lambda_re) <=
           std::abs(nl.lambda_im);
}

ThresholdExponents threshold_exponents(int n) {
    if (n < 1) throw DomainError("threshold_exponents: need n >= 1");
    const double nd = static_cast<double>(n);
    ThresholdExponents out{};
    out.p_n = (n == 1) ? 1.0 + std::sqrt(2.0)
                       : (3.0 + std::sqrt(nd * nd + 2.0 * nd + 9.0)) / (nd + 2.0);
    out.p_star = (nd * nd + 3.0 * nd + 6.0 + std::sqrt(9.0 * nd * nd + 28.0 * nd + 36.0)) /
                 ((nd + 2.0) * (nd + 2.0));
    if (n == 1)
        out.p_star_star = 2.0;
    else if (n == 2)
        out.p_star_star = 1.0;
    else
        out.p_star_star = (4.0 + nd) / (2.0 + nd);
    return out;
}

std::string to_string(CriticalityClass c) {
    switch (c) {
        case CriticalityClass::Critical: return "critical";
        case CriticalityClass::SubCritical: return "sub_critical";
        case CriticalityClass::SuperCritical: return "super_critical";
        case CriticalityClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

double gamma_of_n(int n) { return n == 1 ? 0.5 : 1.0; }

CriticalityReport classify(const FundamentalPair& pair, int n, double p, double T0,
                           double horizon, const ClassifyOptions& opts) {
    if (!(p > 1.0)) throw DomainError("classify: need p > 1");
    if (!(horizon > T0)) throw DomainError("classify: need horizon > T0");

    CriticalityReport rep;
    rep.n = n;
    rep.p = p;
    const double expo = 0.5 * static_cast<double>(n) * (p - 1.0);

    // Tail fit of w(t) = |y2(t)|^{-n(p-1)/2} ~ c t^{-alpha}.
    const double lo = 0.5 * (T0 + horizon);
    std::vector<double> lt, lw;
    for (std::size_t i = 0; i < opts.samples; ++i) {
        const double s = static_cast<double>(i) / (opts.samples - 1);
        const double t = lo * std::pow(horizon / lo, s);
        const double y2 = std::abs(pair.y2(t));
        if (y2 <= 0.0) continue;
        lt.push_back(std::log(t));
        lw.push_back(-expo * std::log(y2));
    }
    const LineFit lf = fit_line(lt, lw);
    rep.alpha = -lf.slope;
    rep.c_plus = std::exp(lf.intercept);
    rep.fit_residual = lf.rms_residual;

    if (lf.rms_residual > opts.residual_threshold) {
        rep.cls = CriticalityClass::Indeterminate;
    } else if (std::abs(rep.alpha - 1.0) <= opts.tol_class) {
        rep.cls = CriticalityClass::Critical;
    } else if (rep.alpha < 1.0) {
        rep.cls = CriticalityClass::SubCritical;
        rep.delta_star = 1.0 - rep.alpha;
    } else {
        rep.cls = CriticalityClass::SuperCritical;
        rep.delta_upper = rep.alpha - 1.0;
    }

    // p solving alpha(p) = 1; closed form when y2 has a known power law,
    // otherwise from the fitted growth exponent of y2 itself.
    double beta;  // y2 ~ t^beta
    if (auto g = pair.model().y2_growth_exponent())
        beta = *g;
    else
        beta = rep.alpha / expo;
    rep.p_critical = 1.0 + 2.0 / (static_cast<double>(n) * beta);

    rep.gamma = gamma_of_n(n);
    rep.theta_max = 0.5 * static_cast<double>(n) * (1.0 - p) + rep.gamma * p;
    rep.theta_default = std::min(0.9 * rep.theta_max, 0.95);
    try {
        rep.delta = check_conditions(pair, T0, horizon).delta;
    } catch (const std::exception&) {
        rep.delta = 0.0;
    }
    return rep;
}

void predicted_rates(CriticalityReport& rep, int n, double p, double s,
                     const Nonlinearity& nl, const OscillatorDerived& derived) {
    rep.s = s;
    rep.s1 = std::min(s - 0.5 * static_cast<double>(n), 1.0);
    rep.strong_dissipation = strong_dissipation(nl);
    rep.predicted.clear();
    const double nd = static_cast<double>(n);

    const bool thm1_range = (n >= 1 && n <= 3) && (s > nd / 2.0) && (s < p);
    std::string thm1_reason;
    if (!(n >= 1 && n <= 3)) thm1_reason = "needs 1 <= n <= 3";
    else if (!(s > nd / 2.0 && s < p)) thm1_reason = "needs n/2 < s < p";

    // Theorem 1 (small data), critical case: Linf and L2 envelopes in Y2.
    {
        RatePrediction linf;
        linf.theorem = "thm1";
        linf.norm = "Linf";
        linf.abscissa = "y2_Y2";  // C |y2|^{-n/2} Y2^{-1/(p-1)}
        linf.exponent = -1.0 / (p - 1.0);
        linf.applicable = thm1_range && rep.cls == CriticalityClass::Critical;
        if (!linf.applicable)
            linf.reason = !thm1_range ? thm1_reason : "requires the critical class";
        rep.predicted.push_back(linf);

        RatePrediction l2;
        l2.theorem = "thm1";
        l2.norm = "L2";
        l2.abscissa = "Y2";
        l2.exponent = -s / ((p - 1.0) * (s + nd));
        l2.applicable = linf.applicable;
        l2.reason = linf.reason;
        rep.predicted.push_back(l2);

        RatePrediction lower;
        lower.theorem = "thm1";
        lower.norm = "L2";
        lower.abscissa = "plateau";  // exp(-C |Im lambda| |u0|^p) |u0| <= |u(t)| <= |u0|
        lower.exponent = 0.0;
        lower.applicable = thm1_range && rep.cls == CriticalityClass::SuperCritical;
        if (!lower.applicable)
            lower.reason = !thm1_range ? thm1_reason : "requires the super-critical class";
        rep.predicted.push_back(lower);
    }

    // Theorem 2 (large data under strong dissipation).
    {
        const bool window_ok = rep.theta_max > 0.0;
        const bool sub_ok = rep.cls == CriticalityClass::SubCritical &&
                            rep.delta_star < 0.5 * rep.delta * rep.theta_default;
        std::string why;
        if (!rep.strong_dissipation) why = "strong dissipation fails";
        else if (!window_ok) why = "empty theta window";

        RatePrediction branch1;
        branch1.theorem = "thm2";
        branch1.norm = "L2";
        branch1.abscissa = "t";
        branch1.exponent = -2.0 * rep.delta_star / ((p - 1.0) * (2.0 + nd));
        branch1.applicable = rep.strong_dissipation && window_ok &&
                             rep.cls == CriticalityClass::SubCritical && sub_ok;
        if (!branch1.applicable)
            branch1.reason = !why.empty() ? why : "requires sub-critical with delta* < delta theta/2";
        rep.predicted.push_back(branch1);

        RatePrediction branch2 = branch1;
        branch2.exponent = rep.delta_star - 0.5 * rep.delta * rep.theta_default;
        rep.predicted.push_back(branch2);

        RatePrediction crit;
        crit.theorem = "thm2";
        crit.norm = "L2";
        crit.abscissa = "Y2";
        crit.exponent = -2.0 / ((p - 1.0) * (2.0 + nd));
        crit.applicable = rep.strong_dissipation && window_ok &&
                          rep.cls == CriticalityClass::Critical;
        if (!crit.applicable)
            crit.reason = !why.empty() ? why : "requires the critical class";
        rep.predicted.push_back(crit);
    }

    // Theorem 3 (sigma == 0), branch chosen by comparing p to p*, p**.
    if (derived.pair().model().kind == SigmaKind::Zero) {
        const auto th = threshold_exponents(n);
        const double delta_star0 = 1.0 - 0.5 * nd * (p - 1.0);
        RatePrediction r;
        r.theorem = "thm3";
        r.norm = "L2";
        r.abscissa = "t";
        if (p >= th.p_star && p < 1.0 + 2.0 / nd) {
            r.exponent = -2.0 * delta_star0 / ((p - 1.0) * (2.0 + nd));
            r.applicable = rep.strong_dissipation;
            if (!r.applicable) r.reason = "strong dissipation fails";
        } else if (p > th.p_star_star && p < th.p_star) {
            r.exponent = delta_star0 - 0.5 * rep.theta_default;  // delta = 1 here
            r.applicable = rep.strong_dissipation;
            if (!r.applicable) r.reason = "strong dissipation fails";
        } else {
            r.applicable = false;
            r.reason = "p outside (p**, 1 + 2/n)";
        }
        rep.predicted.push_back(r);
    }
}

}  // namespace tdnls
