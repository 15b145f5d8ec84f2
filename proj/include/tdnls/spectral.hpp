#pragma once

#include <functional>

#include "tdnls/grid.hpp"
#include "tdnls/oscillator.hpp"

namespace tdnls {

// Unitary DFT with the symmetric (2 pi)^{-n/2} normalization mapped to the
// periodic grid: hat f(xi_k) = (2 pi)^{-n/2} dx^n sum_j f(x_j) e^{-i x_j xi_k}.
ProfileState dft(const WaveState& state);
WaveState idft(const ProfileState& profile, FrameInfo frame = {});

// Applies a Fourier multiplier m(xi) in place (normalization-free path).
void apply_multiplier(WaveState& state, const std::function<cplx(double xi2)>& m);
// Multiplier that depends on the frequency vector, for directional operators.
void apply_multiplier_vec(WaveState& state,
                          const std::function<cplx(const double* xi, int dim)>& m);

struct MdfmResult {
    WaveState out;               // multiplier-path result, e^{i s Delta / 2} f
    double l2_discrepancy = 0.0; // |path_i - path_ii|_2 / |f|_2
    bool chirp_aliasing = false;
    bool factorization_checked = false;
};

// Free half-group e^{i s Delta / 2} computed by the exact Fourier multiplier;
// when check_factorization is set the chirp-dilation-Fourier-chirp route is
// evaluated as well (O(N^2) per axis) and the L2 gap recorded.
MdfmResult mdfm_apply(const WaveState& state, double s, bool check_factorization = false);

enum class LensDirection { ToLens, ToOriginal };

// v(x) = e^{-i y1 y1' |x|^2/2} |y1|^{n/2} u(y1 x), realized as a chirp times a
// metadata rescale of the grid; the discrete L2 sum is preserved exactly.
WaveState lens_transform(const WaveState& state, const FundamentalPair& pair, double t,
                         LensDirection direction, double y1_floor = 1e-10);

// True when the lens chirp phase y1 y1' |x|^2 / 2 advances by more than pi
// across one cell of the lens grid.
bool lens_chirp_aliasing(const Grid& lens_grid, double y1, double dy1);

struct JResult {
    WaveState out;
    bool chirp_aliasing = false;
};

// gamma = 1: (x + i Y grad) f for one-dimensional states.
// gamma in (0,1): the chirp-factorized fractional power M(Y) |Y|^g |D|^g M(Y)^{-1} f.
JResult j_operator(const WaveState& state, double Y, double gamma);

// |J|^s(t) L2 norm, |U_Y |x|^s U_Y^{-1} f|_2 via the chirp factorization;
// valid for any s >= 0 and any dimension.  Used by the X-norm diagnostic.
double j_fractional_norm(const WaveState& state, double Y, double s);

// | |xi|^order hat f |_2 on the discrete frequency grid.
double sobolev_seminorm(const WaveState& state, double order);
// Full H^s norm | <xi>^s hat f |_2.
double h_norm(const WaveState& state, double s);

// Band-limited evaluation of the trigonometric interpolant on another grid.
// Points outside the source box map to zero.  Diagnostic utility for
// cross-frame comparison; O(N_src * N_dst) per axis.
WaveState resample_to_grid(const WaveState& src, const Grid& dst);

}  // namespace tdnls
