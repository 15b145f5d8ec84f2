#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdnls/oscillator.hpp"

namespace tdnls {

struct Nonlinearity {
    double p = 3.0;
    double lambda_re = 0.0;
    double lambda_im = -1.0;

    double abs_im() const { return std::abs(lambda_im); }
    void validate() const {
        if (!(p > 1.0)) throw DomainError("nonlinearity: need p > 1");
        if (lambda_re == 0.0 && lambda_im == 0.0)
            throw DomainError("nonlinearity: lambda must be nonzero");
    }
};

// (p-1)/(2 sqrt(p)) |Re lambda| <= |Im lambda|
bool strong_dissipation(const Nonlinearity& nl);

struct ThresholdExponents {
    double p_n;          // decay threshold from the large-data theory
    double p_star;       // branch-equilibrium exponent
    double p_star_star;  // lower bound for any decay
};

ThresholdExponents threshold_exponents(int n);

enum class CriticalityClass { Critical, SubCritical, SuperCritical, Indeterminate };

std::string to_string(CriticalityClass c);

// One predicted decay envelope.  `exponent` applies to the abscissa named by
// `abscissa` ("t", "Y2", or "none" for plateau-type bounds); the prefactor is
// calibrated against measured data downstream, never here.
struct RatePrediction {
    std::string theorem;    // "thm1" | "thm2" | "thm3"
    std::string norm;       // "Linf" | "L2"
    std::string abscissa;   // "t" | "Y2" | "plateau" | "y2_Y2" (composite Linf envelope)
    double exponent = 0.0;
    bool applicable = false;
    std::string reason;     // why not applicable, empty otherwise
};

struct CriticalityReport {
    CriticalityClass cls = CriticalityClass::Indeterminate;
    double c_plus = 0.0;
    double alpha = 0.0;        // fitted tail exponent of |y2|^{-n(p-1)/2} ~ c t^{-alpha}
    double fit_residual = 0.0;
    double delta_star = 0.0;   // sub-critical surplus (1 - alpha when alpha < 1)
    double delta_upper = 0.0;  // super-critical surplus (alpha - 1 when alpha > 1)
    double p_critical = 0.0;   // p solving alpha(p) = 1 for this sigma
    bool strong_dissipation = false;
    double theta_max = 0.0;    // upper end of the admissible theta window
    double theta_default = 0.0;
    double gamma = 0.0;        // gamma(n)
    double s1 = 0.0;           // min{s - n/2, 1}
    double delta = 0.0;        // condition (C) exponent of the oscillator
    int n = 1;
    double p = 0.0;
    double s = 0.0;
    std::vector<RatePrediction> predicted;
};

struct ClassifyOptions {
    double tol_class = 1e-2;
    double residual_threshold = 0.05;  // RMS log residual above which the fit is distrusted
    std::size_t samples = 400;
};

// Fits the tail of |y2(t)|^{-n(p-1)/2} over the last half of [T0, horizon]
// and classifies against the critical / sub / super trichotomy.
CriticalityReport classify(const FundamentalPair& pair, int n, double p, double T0,
                           double horizon, const ClassifyOptions& opts = {});

double gamma_of_n(int n);

// Populates report.predicted from the three theorems, marking each entry
// applicable or not according to its hypotheses.
void predicted_rates(CriticalityReport& report, int n, double p, double s,
                     const Nonlinearity& nl, const OscillatorDerived& derived);

}  // namespace tdnls
