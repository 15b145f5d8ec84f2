#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdnls/criticality.hpp"
#include "tdnls/grid.hpp"
#include "tdnls/oscillator.hpp"
#include "tdnls/spectral.hpp"

namespace tdnls {

enum class InitialKind { Gaussian, FourierBump, RandomField, FromFile };
enum class Splitting { Strang, Lie };

struct InitialData {
    InitialKind kind = InitialKind::Gaussian;
    double width = 1.0;
    double amplitude = 1.0;  // target L2 norm of u0
    double center = 0.0;
    double chirp = 0.0;      // quadratic phase e^{i chirp |x - c|^2 / 2}
    double bump_k0 = 2.0;    // FourierBump: ring radius
    double bump_width = 0.5;
    std::string path;        // FromFile
    std::uint64_t seed = 1;  // RandomField
};

struct SimConfig {
    Grid grid;
    OscillatorModel model;
    Nonlinearity nl;
    InitialData initial;
    double t0 = 1.0;
    double t_end = 50.0;
    double dt = 0.005;
    FrameTag frame = FrameTag::Lens;
    Splitting splitting = Splitting::Strang;
    int record_every = 20;
    double s = 2.0;        // Sobolev diagnostic parameter
    double epsilon1 = 0.1; // X-norm weight exponent
    bool adaptive = true;
    double step_ledger_tol = 1e-6;  // per-step relative ledger mismatch trigger
    double dt_min = 1e-7;
    bool dealias = false;           // 2/3-rule mask on the nonlinear substep input
    bool record_profile = false;
    bool record_x_norm = true;
    double linf_ceiling = 1e9;
    double boundary_warn = 1e-10;   // relative boundary amplitude warning level
    int save_fields_every = 0;      // dump every K-th record as a binary field
    std::string fields_dir;

    void validate() const;
};

struct MassLedger {
    double initial_mass_sq = 0.0;
    double dissipated = 0.0;      // |Im lambda| int |u|_{p+1}^{p+1}
    double current_mass_sq = 0.0;

    // The dissipative identity carries the factor 2:
    //   |u(t)|_2^2 + 2 |Im lambda| int_0^t |u|_{p+1}^{p+1} = |u0|_2^2.
    double residual() const {
        if (initial_mass_sq <= 0.0) return 0.0;
        return std::abs(current_mass_sq + 2.0 * dissipated - initial_mass_sq) /
               initial_mass_sq;
    }
};

struct RunRecord {
    std::vector<double> times;
    std::vector<double> l2;             // |u(t)|_2 (frame-invariant)
    std::vector<double> linf;           // |u(t)|_inf in the original frame
    std::vector<double> ledger_residual;
    std::vector<double> hs_half;        // |u(t)|_{H^{s/2}}
    std::vector<double> x_norm;         // X_{T1} integrand at t
    std::vector<double> lp1;            // |u(t)|_{p+1}^{p+1} (ledger integrand)
    std::vector<double> y2_integral;    // Y2(t) at record times
    std::vector<ProfileState> profiles; // when record_profile is set
    std::vector<std::vector<cplx>> remainder_values;  // with profiles
    std::vector<double> remainder_linf;
    std::vector<double> remainder_l2;
    MassLedger ledger;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
    std::size_t steps = 0;
    double initial_l2 = 0.0;
};

// Exact pointwise flow of i u_t = coeff * lambda |u|^{p-1} u over dt.
WaveState nonlinear_substep(const WaveState& state, const Nonlinearity& nl, double dt,
                            double coeff);

// Strang-composed kinetic/potential step for H0(t) with sigma frozen at the
// substep midpoint.
WaveState linear_substep_original(const WaveState& state, const OscillatorModel& model,
                                  double t, double dt);

// Exact lens-frame linear step: multiplier e^{-i (Y(t+dt) - Y(t)) |xi|^2}.
WaveState linear_substep_lens(const WaveState& state, const OscillatorDerived& derived,
                              double t, double dt);

RunRecord evolve(const SimConfig& config);

// Builds u0 on config.grid at t = config.t0 in the original frame.
WaveState make_initial_state(const SimConfig& config);

struct CrossValidation {
    std::vector<double> times;
    std::vector<double> l2_discrepancy;    // relative to |u0|_2
    std::vector<double> linf_discrepancy;  // relative to |u0|_inf
    RunRecord original_run;
    RunRecord lens_run;
};

CrossValidation cross_validate(const SimConfig& config, int checkpoints = 6);

}  // namespace tdnls
