#pragma once

#include <vector>

#include "tdnls/criticality.hpp"
#include "tdnls/grid.hpp"
#include "tdnls/oscillator.hpp"

namespace tdnls {

// Fourier profile of a lens-frame field: tilde v = F[U_Y(t)^{-1} v], realized
// as the multiplier e^{+i Y |xi|^2} on the DFT.  Unitary.
ProfileState extract_profile(const WaveState& v, double Y);

struct RemainderField {
    std::vector<cplx> values;
    double linf = 0.0;
    double l2 = 0.0;
};

// Exact defect of the profile equation:
//   R = lambda |y1|^{-n(p-1)/2} F[U_Y^{-1}(|v|^{p-1} v)]
//     - lambda |y2|^{-n(p-1)/2} |tilde v|^{p-1} tilde v,
// so that i d/dt tilde v = lambda |y2|^{-n(p-1)/2} |tilde v|^{p-1} tilde v + R
// holds identically along the flow.
RemainderField remainder_field(const WaveState& v, const Nonlinearity& nl,
                               const OscillatorDerived& derived, double t);

// Exact solution of the dissipative amplitude law
//   d rho / dt = -|Im lambda| w(t) rho^p with int w = dY2:
// rho = rho0 (1 + (p-1)|Im lambda| rho0^{p-1} dY2)^{-1/(p-1)}.
double amplitude_closed_form(double rho0, double p, double abs_im_lambda, double dY2);

struct ProfileTrack {
    std::vector<double> times;
    std::vector<std::size_t> tracked;      // flat frequency indices
    std::vector<double> tracked_freq;      // |xi| at those indices
    std::vector<std::vector<double>> amp_pde;  // [time][tracked]
    std::vector<std::vector<double>> abs_R;    // [time][tracked]
    std::vector<double> remainder_linf;
    std::vector<double> remainder_l2;
};

struct ProfileComparison {
    std::vector<double> sup_discrepancy;  // per tracked frequency
    std::vector<double> budget;           // per tracked frequency: int |R(xi)| dt
    std::vector<std::vector<double>> amp_ode;  // [time][tracked]
    double budget_linf = 0.0;             // int |R|_inf dt
};

// Tracked frequencies: xi = 0, the spectral peak of the first snapshot, and
// the first half-power frequency beyond the peak.
std::vector<std::size_t> select_tracked_indices(const ProfileState& first);

ProfileComparison compare_pde_vs_ode(const ProfileTrack& track,
                                     const OscillatorDerived& derived, double p,
                                     double abs_im_lambda);

}  // namespace tdnls
