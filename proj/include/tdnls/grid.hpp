#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tdnls/errors.hpp"

namespace tdnls {

using cplx = std::complex<double>;

// Uniform periodic grid on [-L, L)^n.  `scale` records the cumulative
// coordinate dilation relative to the original frame (1 there); the lens
// transform rescales it together with L, so the array is never resampled.
struct Grid {
    int dim = 1;
    int points = 64;       // per axis, power of two
    double half_width = 1;  // L, in this frame's coordinates
    double scale = 1.0;

    void validate() const;
    std::size_t size() const;
    double dx() const { return 2.0 * half_width / points; }
    double dxi() const;  // frequency spacing pi / L
    double cell_volume() const;
    double freq_cell_volume() const;
    double coord(int j) const { return -half_width + j * dx(); }
    // Frequency for FFT-natural index k in [0, points).
    double freq(int k) const {
        const int kk = (k <= points / 2 - 1) ? k : k - points;
        return kk * dxi();
    }
    bool compatible(const Grid& other) const {
        return dim == other.dim && points == other.points &&
               half_width == other.half_width;
    }
};

enum class FrameTag { Original, Lens };

struct FrameInfo {
    FrameTag tag = FrameTag::Original;
    double y1 = 1.0;   // lens metadata at the state's current time
    double dy1 = 0.0;
};

// Complex field over a grid.  Values are stored row-major over the n-dim
// index, matching the FFT layout.
struct WaveState {
    Grid grid;
    std::vector<cplx> values;
    FrameInfo frame;
    double t = 0.0;

    double l2_norm() const;
    double linf_norm() const;
    double lp_norm_pow(double p) const;  // integral of |u|^p (not the root)
    double boundary_amplitude() const;   // max |u| on the outermost cells
};

// Fourier-side field: values indexed like the FFT of a WaveState, carrying
// the same grid metadata (frequencies follow from it).
struct ProfileState {
    Grid grid;
    std::vector<cplx> values;
    double t = 0.0;

    double l2_norm() const;
    double linf_norm() const;
};

// Iterates the flat index decomposition; fills idx[0..dim-1].
inline void unflatten(std::size_t flat, int dim, int points, int* idx) {
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points);
        flat /= points;
    }
}

}  // namespace tdnls
