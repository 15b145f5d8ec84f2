#include "tdnls/spectral.hpp"

#include <cmath>

#include "tdnls/fft.hpp"

namespace tdnls {

namespace {

int parity_sign(int dim, const int* idx) {
    int s = 0;
    for (int a = 0; a < dim; ++a) s += idx[a];
    return (s & 1) ? -1 : 1;
}

// Separable application of per-axis dense transforms: out[j...] =
// sum_m prod_a E_a[j_a, m_a] in[m...].  Each E is n_out x n_in row-major.
// Contracts the fastest axis, then cycles it to the front, so after `dim`
// rounds every original axis has been contracted once and the axis order is
// back where it started.
std::vector<cplx> separable_apply(std::vector<cplx> cur, int dim, int n_in, int n_out,
                                  const std::vector<std::vector<cplx>>& mats) {
    for (int axis = dim - 1; axis >= 0; --axis) {
        const std::size_t rest = cur.size() / static_cast<std::size_t>(n_in);
        const auto& E = mats[axis];
        std::vector<cplx> next(rest * n_out);
        for (std::size_t r = 0; r < rest; ++r) {
            const cplx* src = cur.data() + r * n_in;
            for (int j = 0; j < n_out; ++j) {
                cplx acc = 0.0;
                const cplx* row = E.data() + static_cast<std::size_t>(j) * n_in;
                for (int m = 0; m < n_in; ++m) acc += row[m] * src[m];
                next[r * n_out + j] = acc;
            }
        }
        std::vector<cplx> rot(next.size());
        for (std::size_t r = 0; r < rest; ++r)
            for (int j = 0; j < n_out; ++j)
                rot[static_cast<std::size_t>(j) * rest + r] = next[r * n_out + j];
        cur = std::move(rot);
    }
    return cur;
}

}  // namespace

ProfileState dft(const WaveState& state) {
    const Grid& g = state.grid;
    g.validate();
    ProfileState out;
    out.grid = g;
    out.t = state.t;
    out.values = state.values;
    fft_forward(out.values, g.dim, g.points);
    const double scale = std::pow(2.0 * M_PI, -0.5 * g.dim) * g.cell_volume();
    int idx[3];
    for (std::size_t f = 0; f < out.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        out.values[f] *= scale * parity_sign(g.dim, idx);
    }
    return out;
}

WaveState idft(const ProfileState& profile, FrameInfo frame) {
    const Grid& g = profile.grid;
    WaveState out;
    out.grid = g;
    out.t = profile.t;
    out.frame = frame;
    out.values = profile.values;
    int idx[3];
    for (std::size_t f = 0; f < out.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        out.values[f] *= static_cast<double>(parity_sign(g.dim, idx));
    }
    fft_backward(out.values, g.dim, g.points);
    const double scale = std::pow(2.0 * M_PI, -0.5 * g.dim) * g.freq_cell_volume();
    for (cplx& v : out.values) v *= scale;
    return out;
}

void apply_multiplier(WaveState& state, const std::function<cplx(double xi2)>& m) {
    const Grid& g = state.grid;
    fft_forward(state.values, g.dim, g.points);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    int idx[3];
    for (std::size_t f = 0; f < state.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double xi2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xi = g.freq(idx[a]);
            xi2 += xi * xi;
        }
        state.values[f] *= m(xi2) * inv_n;
    }
    fft_backward(state.values, g.dim, g.points);
}

void apply_multiplier_vec(WaveState& state,
                          const std::function<cplx(const double* xi, int dim)>& m) {
    const Grid& g = state.grid;
    fft_forward(state.values, g.dim, g.points);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    int idx[3];
    double xi[3];
    for (std::size_t f = 0; f < state.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        for (int a = 0; a < g.dim; ++a) xi[a] = g.freq(idx[a]);
        state.values[f] *= m(xi, g.dim) * inv_n;
    }
    fft_backward(state.values, g.dim, g.points);
}

MdfmResult mdfm_apply(const WaveState& state, double s, bool check_factorization) {
    MdfmResult res;
    res.out = state;
    if (s == 0.0) return res;

    apply_multiplier(res.out, [s](double xi2) {
        return std::polar(1.0, -0.5 * s * xi2);
    });
    res.out.t = state.t;

    const Grid& g = state.grid;
    res.chirp_aliasing = (g.half_width * g.dx() / std::abs(s)) > M_PI;
    if (!check_factorization) return res;
    res.factorization_checked = true;

    // Factorized route: M(s) D(s) F M(s) with M(s) = e^{i|x|^2/(2s)} and
    // (D(s) h)(x) = (is)^{-n/2} h(x/s).  The dilation lands off the xi grid,
    // so hat(M f) is evaluated as a dense nonuniform sum, axis-separably.
    std::vector<cplx> chirped = state.values;
    {
        int idx[3];
        for (std::size_t f = 0; f < chirped.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double x2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double x = g.coord(idx[a]);
                x2 += x * x;
            }
            chirped[f] *= std::polar(1.0, 0.5 * x2 / s);
        }
    }
    // Per-axis kernel E[j, m] = e^{-i x_m * (x_j / s)}.
    std::vector<std::vector<cplx>> mats(g.dim);
    for (int a = 0; a < g.dim; ++a) {
        auto& E = mats[a];
        E.resize(static_cast<std::size_t>(g.points) * g.points);
        for (int j = 0; j < g.points; ++j) {
            const double eta = g.coord(j) / s;
            for (int m = 0; m < g.points; ++m)
                E[static_cast<std::size_t>(j) * g.points + m] =
                    std::polar(1.0, -g.coord(m) * eta);
        }
    }
    std::vector<cplx> hat = separable_apply(chirped, g.dim, g.points, g.points, mats);
    const double fscale = std::pow(2.0 * M_PI, -0.5 * g.dim) * g.cell_volume();
    // (is)^{-n/2} on the principal branch.
    const cplx is_pow = std::pow(cplx(0.0, s), -0.5 * g.dim);
    std::vector<cplx> path2(hat.size());
    {
        int idx[3];
        for (std::size_t f = 0; f < hat.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double x2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double x = g.coord(idx[a]);
                x2 += x * x;
            }
            path2[f] = std::polar(1.0, 0.5 * x2 / s) * is_pow * fscale * hat[f];
        }
    }
    double diff2 = 0.0;
    for (std::size_t f = 0; f < path2.size(); ++f) diff2 += std::norm(path2[f] - res.out.values[f]);
    const double ref = state.l2_norm();
    res.l2_discrepancy = std::sqrt(diff2 * g.cell_volume()) / (ref > 0 ? ref : 1.0);
    return res;
}

WaveState lens_transform(const WaveState& state, const FundamentalPair& pair, double t,
                         LensDirection direction, double y1_floor) {
    const auto s = pair.eval(t);
    if (!(s.y1 > y1_floor))
        throw SingularY1("lens_transform: y1(t) at or below the configured floor");
    const double y1 = s.y1, dy1 = s.dy1;
    const Grid& g = state.grid;
    const double amp = std::pow(y1, 0.5 * g.dim);

    WaveState out;
    out.t = t;
    out.values.resize(state.values.size());

    if (direction == LensDirection::ToLens) {
        if (state.frame.tag != FrameTag::Original)
            throw DomainError("lens_transform: ToLens expects an original-frame state");
        out.grid = g;
        out.grid.half_width = g.half_width / y1;
        out.grid.scale = g.scale / y1;
        out.frame = FrameInfo{FrameTag::Lens, y1, dy1};
        int idx[3];
        for (std::size_t f = 0; f < state.values.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double xl2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double xl = out.grid.coord(idx[a]);
                xl2 += xl * xl;
            }
            out.values[f] =
                std::polar(1.0, -0.5 * y1 * dy1 * xl2) * amp * state.values[f];
        }
        return out;
    }

    if (state.frame.tag != FrameTag::Lens)
        throw DomainError("lens_transform: ToOriginal expects a lens-frame state");
    out.grid = g;
    out.grid.half_width = g.half_width * y1;
    out.grid.scale = g.scale * y1;
    out.frame = FrameInfo{FrameTag::Original, 1.0, 0.0};
    int idx[3];
    for (std::size_t f = 0; f < state.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double xl2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xl = g.coord(idx[a]);
            xl2 += xl * xl;
        }
        out.values[f] = std::polar(1.0, 0.5 * y1 * dy1 * xl2) / amp * state.values[f];
    }
    return out;
}

JResult j_operator(const WaveState& state, double Y, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw DomainError("j_operator: gamma must lie in (0, 1]");
    const Grid& g = state.grid;
    JResult res;
    res.chirp_aliasing =
        Y != 0.0 && (g.half_width * g.dx() / std::abs(Y)) > M_PI;

    if (gamma == 1.0) {
        if (g.dim != 1)
            throw DomainError("j_operator: gamma = 1 form is one-dimensional");
        WaveState grad = state;
        apply_multiplier_vec(grad, [](const double* xi, int) {
            return cplx(0.0, xi[0]);
        });
        res.out = state;
        for (std::size_t f = 0; f < state.values.size(); ++f) {
            const double x = g.coord(static_cast<int>(f));
            res.out.values[f] = x * state.values[f] + cplx(0.0, Y) * grad.values[f];
        }
        return res;
    }

    // Fractional power via the chirp factorization; Y = 0 degenerates to
    // multiplication by |x|^gamma.
    res.out = state;
    if (Y == 0.0) {
        int idx[3];
        for (std::size_t f = 0; f < state.values.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double x2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double x = g.coord(idx[a]);
                x2 += x * x;
            }
            res.out.values[f] = std::pow(std::sqrt(x2), gamma) * state.values[f];
        }
        return res;
    }
    int idx[3];
    for (std::size_t f = 0; f < res.out.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double x2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(idx[a]);
            x2 += x * x;
        }
        res.out.values[f] *= std::polar(1.0, -0.5 * x2 / Y);
    }
    apply_multiplier(res.out, [gamma](double xi2) {
        return cplx(std::pow(std::sqrt(xi2), gamma), 0.0);
    });
    const double yg = std::pow(std::abs(Y), gamma);
    for (std::size_t f = 0; f < res.out.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double x2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(idx[a]);
            x2 += x * x;
        }
        res.out.values[f] *= yg * std::polar(1.0, 0.5 * x2 / Y);
    }
    return res;
}

double j_fractional_norm(const WaveState& state, double Y, double s) {
    if (s < 0.0) throw DomainError("j_fractional_norm: need s >= 0");
    const Grid& g = state.grid;
    if (s == 0.0) return state.l2_norm();
    if (Y == 0.0) {
        double acc = 0.0;
        int idx[3];
        for (std::size_t f = 0; f < state.values.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double x2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double x = g.coord(idx[a]);
                x2 += x * x;
            }
            acc += std::pow(x2, s) * std::norm(state.values[f]);
        }
        return std::sqrt(acc * g.cell_volume());
    }
    // |M |Y|^s |D|^s M^{-1} f|_2 = |Y|^s | |xi|^s F[M^{-1} f] |_2.
    WaveState tmp = state;
    int idx[3];
    for (std::size_t f = 0; f < tmp.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double x2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(idx[a]);
            x2 += x * x;
        }
        tmp.values[f] *= std::polar(1.0, -0.5 * x2 / Y);
    }
    return std::pow(std::abs(Y), s) * sobolev_seminorm(tmp, s);
}

double sobolev_seminorm(const WaveState& state, double order) {
    if (order < 0.0) throw DomainError("sobolev_seminorm: need order >= 0");
    const ProfileState hat = dft(state);
    const Grid& g = state.grid;
    double acc = 0.0;
    int idx[3];
    for (std::size_t f = 0; f < hat.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double xi2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xi = g.freq(idx[a]);
            xi2 += xi * xi;
        }
        acc += std::pow(xi2, order) * std::norm(hat.values[f]);
    }
    return std::sqrt(acc * g.freq_cell_volume());
}

double h_norm(const WaveState& state, double s) {
    const ProfileState hat = dft(state);
    const Grid& g = state.grid;
    double acc = 0.0;
    int idx[3];
    for (std::size_t f = 0; f < hat.values.size(); ++f) {
        unflatten(f, g.dim, g.points, idx);
        double xi2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xi = g.freq(idx[a]);
            xi2 += xi * xi;
        }
        acc += std::pow(1.0 + xi2, s) * std::norm(hat.values[f]);
    }
    return std::sqrt(acc * g.freq_cell_volume());
}

WaveState resample_to_grid(const WaveState& src, const Grid& dst) {
    if (src.grid.dim != dst.dim)
        throw GridMismatch("resample_to_grid: dimension mismatch");
    const Grid& g = src.grid;
    // Fourier coefficients of the trigonometric interpolant.
    std::vector<cplx> hat = src.values;
    fft_forward(hat, g.dim, g.points);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (cplx& v : hat) v *= inv_n;
    // Per-axis evaluation matrix at the destination nodes; out-of-box points
    // evaluate to zero afterwards.
    std::vector<std::vector<cplx>> mats(g.dim);
    for (int a = 0; a < g.dim; ++a) {
        auto& E = mats[a];
        E.resize(static_cast<std::size_t>(dst.points) * g.points);
        for (int j = 0; j < dst.points; ++j) {
            const double x = dst.coord(j);
            for (int k = 0; k < g.points; ++k) {
                // Interpolant uses x + L so the FFT phases line up with the
                // index convention (values start at -L).
                E[static_cast<std::size_t>(j) * g.points + k] =
                    std::polar(1.0, 2.0 * M_PI * g.freq(k) / g.dxi() *
                                        (x + g.half_width) / (2.0 * g.half_width));
            }
        }
    }
    std::vector<cplx> vals = separable_apply(hat, g.dim, g.points, dst.points, mats);
    WaveState out;
    out.grid = dst;
    out.frame = src.frame;
    out.t = src.t;
    out.values = std::move(vals);
    // Zero outside the source box.
    int idx[3];
    for (std::size_t f = 0; f < out.values.size(); ++f) {
        unflatten(f, dst.dim, dst.points, idx);
        for (int a = 0; a < dst.dim; ++a) {
            const double x = dst.coord(idx[a]);
            if (x < -g.half_width || x >= g.half_width) {
                out.values[f] = 0.0;
                break;
            }
        }
    }
    return out;
}

}  // namespace tdnls
