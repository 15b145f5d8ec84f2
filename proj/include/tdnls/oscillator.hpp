#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdnls/errors.hpp"
#include "tdnls/ode.hpp"
#include "tdnls/quadrature.hpp"

namespace tdnls {

// Time-dependent harmonic coefficient sigma(t).  The inverse-square families
// are singular at t = 0, so they carry a constant coefficient on [0, t_start]
// glued to the power law on [t_start, inf).  The glue constant is solved so
// that y1 continues as a pure power for t >= t_start; that choice is what
// keeps |y1/y2| decaying (condition (C)) instead of saturating at a constant.
enum class SigmaKind {
    Zero,
    InverseSquareAttractive,  // sigma(t) = sigma0 / t^2, sigma0 in [0, 1/4)
    InverseSquareRepulsive,   // sigma(t) = -rho / t^2,   rho >= 0
    SubQuadratic,             // sigma(t) = c / (1 + t)^q, q > 2
    Tabulated,
};

struct OscillatorModel {
    SigmaKind kind = SigmaKind::Zero;
    double sigma0 = 0.0;  // InverseSquareAttractive
    double rho = 0.0;     // InverseSquareRepulsive
    double c = 1.0;       // SubQuadratic strength
    double q = 3.0;       // SubQuadratic power
    std::vector<double> knots;       // Tabulated
    std::vector<double> sigma_vals;  // Tabulated
    double t_start = 1.0;
    double T0 = 1.0;

    double sigma(double t) const;
    // Glue constant used on [0, t_start] for the inverse-square kinds.
    double glue_constant() const;
    // Exponent of the decaying fundamental solution on [t_start, inf):
    // mu for Example-1 kind, theta_- for Example-2 kind, 0 for Zero.
    std::optional<double> power_exponent() const;
    // Exponent of the growing branch (1 - mu etc.), when closed form exists.
    std::optional<double> y2_growth_exponent() const;

    std::string kind_name() const;
    void validate() const;

    static OscillatorModel zero(double T0 = 1.0);
    static OscillatorModel inverse_square_attractive(double sigma0, double t_start = 1.0,
                                                     double T0 = 1.0);
    static OscillatorModel inverse_square_repulsive(double rho, double t_start = 1.0,
                                                    double T0 = 1.0);
    static OscillatorModel sub_quadratic(double c, double q, double T0 = 1.0);
    static OscillatorModel tabulated(std::vector<double> knots, std::vector<double> vals,
                                     double T0 = 1.0);
};

enum class PairMethod { ClosedForm, NumericODE };

// Fundamental solutions of y'' + sigma(t) y = 0 with y1(0)=1, y1'(0)=0,
// y2(0)=0, y2'(0)=1.  Immutable after construction; cheap to copy.
class FundamentalPair {
public:
    struct Sample {
        double y1, dy1, y2, dy2;
    };

    Sample eval(double t) const;
    // Second derivatives of y1, y2 (analytic for closed forms, interpolant
    // curvature for the numeric pair).
    struct Curvature {
        double ypp1, ypp2;
    };
    Curvature eval_ypp(double t) const;
    double y1(double t) const { return eval(t).y1; }
    double dy1(double t) const { return eval(t).dy1; }
    double y2(double t) const { return eval(t).y2; }
    double dy2(double t) const { return eval(t).dy2; }
    double wronskian(double t) const {
        const Sample s = eval(t);
        return s.y1 * s.dy2 - s.dy1 * s.y2;
    }

    PairMethod method() const { return method_; }
    double horizon() const { return horizon_; }
    double wronskian_tol() const { return wronskian_tol_; }
    const OscillatorModel& model() const { return model_; }

    // Construction goes through solve_fundamental below.
    struct ClosedFormData;
    FundamentalPair(OscillatorModel model, double horizon, double wronskian_tol,
                    std::shared_ptr<const ClosedFormData> cf);
    FundamentalPair(OscillatorModel model, double horizon, double wronskian_tol,
                    std::shared_ptr<const Rk45DenseSolution> dense);

private:
    OscillatorModel model_;
    double horizon_ = 0.0;
    double wronskian_tol_ = 1e-8;
    PairMethod method_ = PairMethod::NumericODE;
    std::shared_ptr<const ClosedFormData> closed_;
    std::shared_ptr<const Rk45DenseSolution> dense_;
};

// Closed form is returned when the model supports it (Zero and the glued
// inverse-square families); otherwise the pair is integrated numerically.
FundamentalPair solve_fundamental(const OscillatorModel& model, double horizon,
                                  double tol = 1e-10,
                                  std::optional<PairMethod> force_method = std::nullopt);

// Largest |y'' + sigma y| sampled over [t0, t1] via the dense interpolant
// (finite differences of the evaluated pair).
double max_ode_residual(const FundamentalPair& pair, double t0, double t1,
                        std::size_t samples = 400);

struct ConditionsReport {
    double c0 = 0.0;      // min |y2| on [T0, horizon]
    double delta = 0.0;   // fitted decay exponent of |y1/y2|
    double prefactor = 0.0;  // fitted C in |y1/y2| ~ C t^{-delta}
    double fit_residual = 0.0;
    bool ok_A = false;
    bool ok_B = false;
    bool ok_C = false;
};

struct ConditionsOptions {
    std::size_t min_samples = 32;
    std::size_t samples = 512;
    double delta_min = 0.05;
    double c0_floor = 1e-10;
};

ConditionsReport check_conditions(const FundamentalPair& pair, double T0, double horizon,
                                  const ConditionsOptions& opts = {});

// Y(t) = y2/(2 y1) and Y2(t) = int_T0^t |y2|^{-n(p-1)/2}.  Immutable and
// thread-safe; construction scans [T0, horizon] for vanishing y1.
class OscillatorDerived {
public:
    OscillatorDerived(const FundamentalPair& pair, int n, double p, double T0,
                      double horizon, double quad_tol = 1e-8);

    double Y(double t) const;
    double Y2(double t) const { return (*y2_integral_)(t); }
    double dY(double t) const;  // 1/(2 y1^2)
    double c0() const { return c0_; }
    double delta() const { return delta_; }
    double T0() const { return T0_; }
    double horizon() const { return horizon_; }
    int n() const { return n_; }
    double p() const { return p_; }
    const FundamentalPair& pair() const { return pair_; }
    double dissipation_weight(double t) const;  // |y2(t)|^{-n(p-1)/2}

private:
    FundamentalPair pair_;
    int n_;
    double p_;
    double T0_;
    double horizon_;
    double c0_ = 0.0;
    double delta_ = 0.0;
    std::shared_ptr<const CumulativeIntegral> y2_integral_;
};

OscillatorDerived build_derived(const FundamentalPair& pair, int n, double p, double T0,
                                double horizon, double quad_tol = 1e-8);

}  // namespace tdnls
