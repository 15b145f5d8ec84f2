#include "tdnls/profile.hpp"

#include <algorithm>
#include <cmath>

#include "tdnls/spectral.hpp"

namespace tdnls {

ProfileState extract_profile(const WaveState& v, double Y) {
    ProfileState hat = dft(v);
    const Grid& g = hat.grid;
    int idx[3];
    for (std::size_t f = 0; f < hat.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double xi2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xi = g.freq(idx[a]);
            xi2 += xi * xi;
        }
        hat.values[f] *= std::polar(1.0, Y * xi2);
    }
    return hat;
}

RemainderField remainder_field(const WaveState& v, const Nonlinearity& nl,
                               const OscillatorDerived& derived, double t) {
    const auto s = derived.pair().eval(t);
    if (std::abs(s.y2) == 0.0)
        throw DomainError("remainder_field: y2(t) vanishes");
    const int n = v.grid.dim;
    const double p = nl.p;
    const double expo = 0.5 * n * (p - 1.0);
    const double c1 = std::pow(std::abs(s.y1), -expo);
    const double c2 = std::pow(std::abs(s.y2), -expo);
    const double Y = s.y2 / (2.0 * s.y1);
    const cplx lambda(nl.lambda_re, nl.lambda_im);

    WaveState nonlin = v;
    for (std::size_t f = 0; f < nonlin.values.size(); ++f) {
        const double r = std::abs(v.values[f]);
        nonlin.values[f] = (r == 0.0) ? cplx(0.0)
                                      : std::pow(r, p - 1.0) * v.values[f];
    }
    ProfileState term1 = extract_profile(nonlin, Y);
    ProfileState tv = extract_profile(v, Y);

    RemainderField out;
    out.values.resize(tv.values.size());
    for (std::size_t f = 0; f < tv.values.size(); ++f) {
        const double r = std::abs(tv.values[f]);
        const cplx cubic = (r == 0.0) ? cplx(0.0) : std::pow(r, p - 1.0) * tv.values[f];
        out.values[f] = lambda * (c1 * term1.values[f] - c2 * cubic);
        out.linf = std::max(out.linf, std::abs(out.values[f]));
    }
    double acc = 0.0;
    for (const cplx& z : out.values) acc += std::norm(z);
    out.l2 = std::sqrt(acc * v.grid.freq_cell_volume());
    return out;
}

double amplitude_closed_form(double rho0, double p, double abs_im_lambda, double dY2) {
    if (rho0 <= 0.0) return 0.0;
    if (abs_im_lambda == 0.0) return rho0;
    const double z = (p - 1.0) * abs_im_lambda * std::pow(rho0, p - 1.0) * dY2;
    return rho0 * std::pow(1.0 + z, -1.0 / (p - 1.0));
}

std::vector<std::size_t> select_tracked_indices(const ProfileState& first) {
    const auto& vals = first.values;
    std::vector<std::size_t> picks;
    picks.push_back(0);  // xi = 0 sits at flat index 0 in FFT order

    std::size_t peak = 0;
    double best = 0.0;
    for (std::size_t f = 0; f < vals.size(); ++f) {
        const double a = std::abs(vals[f]);
        if (a > best) {
            best = a;
            peak = f;
        }
    }
    if (std::find(picks.begin(), picks.end(), peak) == picks.end()) picks.push_back(peak);

    // First index past the peak whose amplitude drops below peak / sqrt(2);
    // scans the flat order, which walks the positive-frequency axis first.
    const double half_power = best / std::sqrt(2.0);
    for (std::size_t f = peak; f < vals.size() / 2; ++f) {
        if (std::abs(vals[f]) <= half_power) {
            if (std::find(picks.begin(), picks.end(), f) == picks.end()) picks.push_back(f);
            break;
        }
    }
    return picks;
}

ProfileComparison compare_pde_vs_ode(const ProfileTrack& track,
                                     const OscillatorDerived& derived, double p,
                                     double abs_im_lambda) {
    const std::size_t nt = track.times.size();
    const std::size_t nf = track.tracked.size();
    if (nt == 0 || nf == 0) throw GridMismatch("compare_pde_vs_ode: empty track");
    for (const auto& row : track.amp_pde)
        if (row.size() != nf) throw GridMismatch("compare_pde_vs_ode: ragged track");

    ProfileComparison cmp;
    cmp.amp_ode.assign(nt, std::vector<double>(nf, 0.0));
    cmp.sup_discrepancy.assign(nf, 0.0);
    cmp.budget.assign(nf, 0.0);

    const double t0 = track.times.front();
    const double Y2_0 = derived.Y2(t0);
    for (std::size_t i = 0; i < nt; ++i) {
        const double dY2 = derived.Y2(track.times[i]) - Y2_0;
        for (std::size_t k = 0; k < nf; ++k) {
            cmp.amp_ode[i][k] =
                amplitude_closed_form(track.amp_pde[0][k], p, abs_im_lambda, dY2);
            cmp.sup_discrepancy[k] = std::max(
                cmp.sup_discrepancy[k], std::abs(cmp.amp_ode[i][k] - track.amp_pde[i][k]));
        }
    }
    // Trapezoid budgets of |R| in time.
    for (std::size_t i = 1; i < nt; ++i) {
        const double h = track.times[i] - track.times[i - 1];
        for (std::size_t k = 0; k < nf; ++k)
            cmp.budget[k] += 0.5 * h * (track.abs_R[i][k] + track.abs_R[i - 1][k]);
        cmp.budget_linf +=
            0.5 * h * (track.remainder_linf[i] + track.remainder_linf[i - 1]);
    }
    return cmp;
}

}  // namespace tdnls
