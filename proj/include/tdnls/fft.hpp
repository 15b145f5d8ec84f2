#pragma once

#include <complex>
#include <vector>

namespace tdnls {

// Unnormalized FFTs over an n-dimensional row-major array, `points` per axis.
// Forward uses kernel e^{-2 pi i jk/N}, backward e^{+2 pi i jk/N}; neither
// divides by N.  Plans are cached and reused; safe to call from worker
// threads (plan creation is serialized).
void fft_forward(std::vector<std::complex<double>>& data, int dim, int points);
void fft_backward(std::vector<std::complex<double>>& data, int dim, int points);

}  // namespace tdnls
