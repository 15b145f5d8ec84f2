#include "tdnls/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <random>

#include "tdnls/io.hpp"
#include "tdnls/profile.hpp"

namespace tdnls {

void SimConfig::validate() const {
    grid.validate();
    model.validate();
    nl.validate();
    if (!(dt > 0.0)) throw DomainError("run: dt must be positive");
    if (!(t_end > t0)) throw DomainError("run: need t_end > t0");
    if (record_every < 1) throw DomainError("run: record_every must be >= 1");
    if (frame == FrameTag::Lens && t0 < model.T0)
        throw DomainError("run: lens frame requires t0 >= T0");
    if (!(s > 0.0)) throw DomainError("run: need s > 0");
}

WaveState nonlinear_substep(const WaveState& state, const Nonlinearity& nl, double dt,
                            double coeff) {
    WaveState out = state;
    if (dt == 0.0) return out;
    const double p = nl.p;
    const double sig = -nl.lambda_im;  // > 0 in the dissipative regime
    const double re = nl.lambda_re;

    for (cplx& u : out.values) {
        const double rho0 = std::abs(u);
        if (rho0 == 0.0) continue;
        const double rp = std::pow(rho0, p - 1.0);
        double ratio, dtheta;
        if (sig != 0.0) {
            // rho' = Im(l) c rho^p integrates to
            // rho = rho0 (1 + (p-1)(-Im l) c dt rho0^{p-1})^{-1/(p-1)}.
            // For Im l > 0 the denominator can cross zero: finite-time blowup,
            // surfaced as inf and caught by the Linf ceiling.
            const double z = (p - 1.0) * sig * coeff * dt * rp;
            if (1.0 + z <= 0.0) {
                ratio = std::numeric_limits<double>::infinity();
                dtheta = 0.0;
            } else {
                ratio = std::pow(1.0 + z, -1.0 / (p - 1.0));
                // theta' = -Re l c rho^{p-1}; the integral is logarithmic in z.
                dtheta = -(re / ((p - 1.0) * sig)) * std::log1p(z);
            }
        } else {
            ratio = 1.0;
            dtheta = -re * coeff * rp * dt;
        }
        u *= ratio * std::polar(1.0, dtheta);
    }
    out.t = state.t + dt;
    return out;
}

WaveState linear_substep_original(const WaveState& state, const OscillatorModel& model,
                                  double t, double dt) {
    WaveState out = state;
    if (dt == 0.0) return out;
    const double sig = model.sigma(t + 0.5 * dt);
    const Grid& g = out.grid;

    auto potential_half = [&](WaveState& st) {
        if (sig == 0.0) return;
        int idx[3];
        for (std::size_t f = 0; f < st.values.size(); ++f) {
            unflatten(f, g.dim, g.points, idx);
            double x2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const double x = g.coord(idx[a]);
                x2 += x * x;
            }
            st.values[f] *= std::polar(1.0, -0.5 * sig * x2 * (0.5 * dt));
        }
    };

    potential_half(out);
    apply_multiplier(out, [dt](double xi2) { return std::polar(1.0, -0.5 * dt * xi2); });
    potential_half(out);
    out.t = t + dt;
    return out;
}

WaveState linear_substep_lens(const WaveState& state, const OscillatorDerived& derived,
                              double t, double dt) {
    WaveState out = state;
    if (dt == 0.0) return out;
    const double dY = derived.Y(t + dt) - derived.Y(t);
    if (dY != 0.0)
        apply_multiplier(out, [dY](double xi2) { return std::polar(1.0, -dY * xi2); });
    out.t = t + dt;
    return out;
}

WaveState make_initial_state(const SimConfig& config) {
    const Grid& g = config.grid;
    WaveState u;
    u.grid = g;
    u.frame = FrameInfo{FrameTag::Original, 1.0, 0.0};
    u.t = config.t0;
    u.values.assign(g.size(), cplx(0.0));
    const InitialData& d = config.initial;

    switch (d.kind) {
        case InitialKind::Gaussian: {
            int idx[3];
            for (std::size_t f = 0; f < u.values.size(); ++f) {
                unflatten(f, g.dim, g.points, idx);
                double r2 = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const double x = g.coord(idx[a]) - d.center;
                    r2 += x * x;
                }
                u.values[f] = std::exp(-0.5 * r2 / (d.width * d.width)) *
                              std::polar(1.0, 0.5 * d.chirp * r2);
            }
            break;
        }
        case InitialKind::FourierBump: {
            std::vector<cplx> hat(g.size());
            int idx[3];
            for (std::size_t f = 0; f < hat.size(); ++f) {
                unflatten(f, g.dim, g.points, idx);
                double xi2 = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const double xi = g.freq(idx[a]);
                    xi2 += xi * xi;
                }
                const double r = std::sqrt(xi2) - d.bump_k0;
                hat[f] = std::exp(-0.5 * r * r / (d.bump_width * d.bump_width));
            }
            ProfileState ps{g, std::move(hat), config.t0};
            u = idft(ps, FrameInfo{FrameTag::Original, 1.0, 0.0});
            u.t = config.t0;
            break;
        }
        case InitialKind::RandomField: {
            // Random smooth field: seeded Gaussian Fourier coefficients under a
            // decaying envelope.  Box-Muller keeps the stream implementation-
            // independent.
            std::mt19937_64 rng(d.seed);
            auto uniform = [&rng]() {
                return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
            };
            std::vector<cplx> hat(g.size());
            int idx[3];
            for (std::size_t f = 0; f < hat.size(); ++f) {
                unflatten(f, g.dim, g.points, idx);
                double xi2 = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const double xi = g.freq(idx[a]);
                    xi2 += xi * xi;
                }
                const double u1 = uniform(), u2 = uniform();
                const double mag = std::sqrt(-2.0 * std::log(u1));
                hat[f] = std::exp(-0.5 * xi2) * mag *
                         cplx(std::cos(2.0 * M_PI * u2), std::sin(2.0 * M_PI * u2));
            }
            ProfileState ps{g, std::move(hat), config.t0};
            u = idft(ps, FrameInfo{FrameTag::Original, 1.0, 0.0});
            u.t = config.t0;
            break;
        }
        case InitialKind::FromFile: {
            u = read_field(d.path);
            if (!u.grid.compatible(g))
                throw GridMismatch("initial data file grid does not match the config grid");
            u.t = config.t0;
            break;
        }
    }

    const double norm = u.l2_norm();
    if (!(norm > 0.0)) throw DegenerateData("initial data has zero mass");
    const double scale = d.amplitude / norm;
    for (cplx& v : u.values) v *= scale;
    return u;
}

namespace {

struct FrameOps {
    const SimConfig* cfg;
    const FundamentalPair* pair;
    const OscillatorDerived* derived;  // may be null for original-frame runs

    double u_linf(const WaveState& st, double t) const {
        if (st.frame.tag == FrameTag::Lens)
            return std::pow(pair->y1(t), -0.5 * st.grid.dim) * st.linf_norm();
        return st.linf_norm();
    }
    double u_lp1(const WaveState& st, double t) const {
        const double p1 = cfg->nl.p + 1.0;
        if (st.frame.tag == FrameTag::Lens) {
            const double w =
                std::pow(pair->y1(t), -0.5 * st.grid.dim * (cfg->nl.p - 1.0));
            return w * st.lp_norm_pow(p1);
        }
        return st.lp_norm_pow(p1);
    }
    WaveState to_original(const WaveState& st, double t) const {
        if (st.frame.tag == FrameTag::Lens)
            return lens_transform(st, *pair, t, LensDirection::ToOriginal);
        return st;
    }
    WaveState to_lens(const WaveState& st, double t) const {
        if (st.frame.tag == FrameTag::Original)
            return lens_transform(st, *pair, t, LensDirection::ToLens);
        return st;
    }
};

void apply_dealias_mask(WaveState& st) {
    const Grid& g = st.grid;
    const double cutoff = (2.0 / 3.0) * (g.points / 2) * g.dxi();
    apply_multiplier_vec(st, [cutoff](const double* xi, int dim) {
        for (int a = 0; a < dim; ++a)
            if (std::abs(xi[a]) > cutoff) return cplx(0.0);
        return cplx(1.0);
    });
}

}  // namespace

RunRecord evolve(const SimConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    const double horizon = config.t_end + 1.0;
    FundamentalPair pair = solve_fundamental(config.model, horizon);

    std::optional<OscillatorDerived> derived;
    try {
        derived.emplace(pair, config.grid.dim, config.nl.p, config.model.T0, horizon);
    } catch (const SingularY1&) {
        if (config.frame == FrameTag::Lens) throw;
    }

    RunRecord rec;
    WaveState u0 = make_initial_state(config);
    rec.initial_l2 = u0.l2_norm();

    WaveState state = (config.frame == FrameTag::Lens)
                          ? lens_transform(u0, pair, config.t0, LensDirection::ToLens)
                          : u0;

    FrameOps ops{&config, &pair, derived ? &*derived : nullptr};

    MassLedger ledger;
    ledger.initial_mass_sq = rec.initial_l2 * rec.initial_l2;
    ledger.current_mass_sq = ledger.initial_mass_sq;

    const double abs_im = std::abs(config.nl.lambda_im);
    bool boundary_warned = false;

    auto record = [&](double t) {
        const double l2 = state.l2_norm();
        rec.times.push_back(t);
        rec.l2.push_back(l2);
        rec.linf.push_back(ops.u_linf(state, t));
        rec.ledger_residual.push_back(ledger.residual());
        rec.lp1.push_back(ops.u_lp1(state, t));
        rec.y2_integral.push_back(derived ? derived->Y2(t)
                                          : std::numeric_limits<double>::quiet_NaN());
        // H^{s/2} of u needs the original-frame field.
        WaveState u = ops.to_original(state, t);
        rec.hs_half.push_back(h_norm(u, 0.5 * config.s));
        if (config.record_x_norm && derived) {
            const WaveState v = ops.to_lens(state, t);
            const double Y = derived->Y(t);
            const double ay = std::sqrt(1.0 + Y * Y);
            const double xn =
                std::pow(ay, 0.5 * config.grid.dim) * v.linf_norm() +
                std::pow(ay, -config.epsilon1) *
                    (h_norm(v, config.s) + j_fractional_norm(v, Y, config.s));
            rec.x_norm.push_back(xn);
        } else {
            rec.x_norm.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        if (config.record_profile && derived) {
            const WaveState v = ops.to_lens(state, t);
            ProfileState tv = extract_profile(v, derived->Y(t));
            RemainderField rf = remainder_field(v, config.nl, *derived, t);
            rec.profiles.push_back(std::move(tv));
            rec.remainder_linf.push_back(rf.linf);
            rec.remainder_l2.push_back(rf.l2);
            rec.remainder_values.push_back(std::move(rf.values));
        }
        if (!boundary_warned) {
            const double peak = state.linf_norm();
            if (peak > 0.0 &&
                state.boundary_amplitude() > config.boundary_warn * peak) {
                rec.warnings.push_back(
                    "boundary amplitude exceeded the relative warning level; the "
                    "periodic box may be too small for this run");
                boundary_warned = true;
            }
        }
        if (config.save_fields_every > 0 && !config.fields_dir.empty()) {
            const std::size_t k = rec.times.size() - 1;
            if (k % static_cast<std::size_t>(config.save_fields_every) == 0) {
                char name[64];
                std::snprintf(name, sizeof(name), "state_%05zu.bin", k);
                write_field(path_join(config.fields_dir, name), state);
            }
        }
    };

    record(config.t0);

    double t = config.t0;
    double dt = config.dt;
    double g_prev = ops.u_lp1(state, t);
    const double linf0 = rec.linf.front();
    std::size_t accepted = 0;

    while (t < config.t_end - 1e-12 * std::max(1.0, std::abs(config.t_end))) {
        const double h = std::min(dt, config.t_end - t);
        WaveState saved = state;

        const double t_mid = t + 0.5 * h;
        const double coeff =
            (config.frame == FrameTag::Lens)
                ? std::pow(pair.y1(t_mid), -0.5 * config.grid.dim * (config.nl.p - 1.0))
                : 1.0;

        if (config.splitting == Splitting::Strang) {
            state = (config.frame == FrameTag::Lens)
                        ? linear_substep_lens(state, *derived, t, 0.5 * h)
                        : linear_substep_original(state, config.model, t, 0.5 * h);
            if (config.dealias) apply_dealias_mask(state);
            state = nonlinear_substep(state, config.nl, h, coeff);
            state = (config.frame == FrameTag::Lens)
                        ? linear_substep_lens(state, *derived, t + 0.5 * h, 0.5 * h)
                        : linear_substep_original(state, config.model, t + 0.5 * h, 0.5 * h);
        } else {
            if (config.dealias) apply_dealias_mask(state);
            state = nonlinear_substep(state, config.nl, h,
                                      (config.frame == FrameTag::Lens)
                                          ? std::pow(pair.y1(t), -0.5 * config.grid.dim *
                                                                      (config.nl.p - 1.0))
                                          : 1.0);
            state = (config.frame == FrameTag::Lens)
                        ? linear_substep_lens(state, *derived, t, h)
                        : linear_substep_original(state, config.model, t, h);
        }
        state.t = t + h;
        if (state.frame.tag == FrameTag::Lens) {
            state.frame.y1 = pair.y1(t + h);
            state.frame.dy1 = pair.dy1(t + h);
        }

        const double g_new = ops.u_lp1(state, t + h);
        const double step_diss = 0.5 * (g_prev + g_new) * h;
        const double new_mass_sq = std::pow(state.l2_norm(), 2);
        if (!std::isfinite(new_mass_sq))
            throw BlowupDetected("evolve: non-finite mass (check the sign of Im lambda)");
        const double step_resid =
            std::abs(new_mass_sq - ledger.current_mass_sq + 2.0 * abs_im * step_diss) /
            ledger.initial_mass_sq;

        if (config.adaptive && step_resid > config.step_ledger_tol && h > config.dt_min) {
            state = std::move(saved);
            dt = 0.5 * h;
            if (dt < config.dt_min)
                throw NonConvergence("evolve: dt underflow while chasing the ledger tolerance");
            continue;
        }

        t += h;
        ++accepted;
        ledger.current_mass_sq = new_mass_sq;
        ledger.dissipated += abs_im * step_diss;
        g_prev = g_new;

        const double linf_u = ops.u_linf(state, t);
        if (linf_u > config.linf_ceiling ||
            (linf0 > 0.0 && linf_u > 1e6 * linf0) || !std::isfinite(linf_u))
            throw BlowupDetected("evolve: Linf ceiling exceeded (check the sign of Im lambda)");

        if (accepted % static_cast<std::size_t>(config.record_every) == 0 ||
            t >= config.t_end - 1e-12)
            record(t);
    }

    rec.ledger = ledger;
    rec.steps = accepted;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

CrossValidation cross_validate(const SimConfig& config, int checkpoints) {
    SimConfig lens_cfg = config;
    lens_cfg.frame = FrameTag::Lens;
    SimConfig orig_cfg = config;
    orig_cfg.frame = FrameTag::Original;

    const double horizon = config.t_end + 1.0;
    FundamentalPair pair = solve_fundamental(config.model, horizon);
    OscillatorDerived derived(pair, config.grid.dim, config.nl.p, config.model.T0, horizon);

    // Walk the two solvers side by side so states can be compared at shared
    // checkpoint times without replumbing evolve().
    WaveState u0 = make_initial_state(config);
    WaveState u = u0;
    WaveState v = lens_transform(u0, pair, config.t0, LensDirection::ToLens);

    CrossValidation out;
    std::vector<double> stops;
    for (int k = 1; k <= checkpoints; ++k)
        stops.push_back(config.t0 +
                        (config.t_end - config.t0) * static_cast<double>(k) / checkpoints);

    const double u0_l2 = u0.l2_norm();
    const double u0_linf = u0.linf_norm();

    double t = config.t0;
    std::size_t next_stop = 0;
    const int dim = config.grid.dim;
    const double p = config.nl.p;

    while (next_stop < stops.size()) {
        const double target = stops[next_stop];
        while (t < target - 1e-12) {
            const double h = std::min(config.dt, target - t);
            const double t_mid = t + 0.5 * h;
            // Original frame step.
            u = linear_substep_original(u, config.model, t, 0.5 * h);
            u = nonlinear_substep(u, config.nl, h, 1.0);
            u = linear_substep_original(u, config.model, t + 0.5 * h, 0.5 * h);
            // Lens frame step.
            const double coeff = std::pow(pair.y1(t_mid), -0.5 * dim * (p - 1.0));
            v = linear_substep_lens(v, derived, t, 0.5 * h);
            v = nonlinear_substep(v, config.nl, h, coeff);
            v = linear_substep_lens(v, derived, t + 0.5 * h, 0.5 * h);
            t += h;
        }
        v.frame.y1 = pair.y1(t);
        v.frame.dy1 = pair.dy1(t);
        WaveState v_back = lens_transform(v, pair, t, LensDirection::ToOriginal);
        WaveState v_on_u = resample_to_grid(v_back, u.grid);
        double d2 = 0.0, dinf = 0.0;
        for (std::size_t f = 0; f < u.values.size(); ++f) {
            const double d = std::abs(v_on_u.values[f] - u.values[f]);
            dinf = std::max(dinf, d);
            d2 += d * d;
        }
        out.times.push_back(t);
        out.l2_discrepancy.push_back(std::sqrt(d2 * u.grid.cell_volume()) / u0_l2);
        out.linf_discrepancy.push_back(dinf / u0_linf);
        ++next_stop;
    }

    out.original_run = evolve(orig_cfg);
    out.lens_run = evolve(lens_cfg);
    return out;
}

}  // namespace tdnls
