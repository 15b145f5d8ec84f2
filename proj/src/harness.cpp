#include "tdnls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "tdnls/io.hpp"

namespace tdnls {

FitWindow default_window(const RunRecord& rec) {
    if (rec.times.size() < 2) throw DegenerateData("default_window: record too short");
    const double a = rec.times.front(), b = rec.times.back();
    return FitWindow{0.5 * (a + b), b};
}

FitResult fit_decay(const RunRecord& rec, FitQuantity quantity, FitModel model,
                    const FitWindow& window) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        const double t = rec.times[i];
        if (t < window.begin || t > window.end) continue;
        double x = t;
        if (model == FitModel::PowerOfY2) {
            x = rec.y2_integral[i];
            if (!(x > 0.0)) continue;  // Y2(T0) = 0 at the left endpoint
        }
        xs.push_back(x);
        ys.push_back(quantity == FitQuantity::L2 ? rec.l2[i] : rec.linf[i]);
    }
    if (xs.size() < 2) throw DegenerateData("fit_decay: too few samples in the window");
    FitResult res = fit_series(quantity, model, xs, ys);
    res.window_begin = window.begin;
    res.window_end = window.end;
    return res;
}

KorotyaevReport korotyaev_check(const OscillatorModel& model, const Grid& grid,
                                double horizon, double dt, double record_dt,
                                double gaussian_width) {
    grid.validate();
    FundamentalPair pair = solve_fundamental(model, horizon + 1.0);

    WaveState u;
    u.grid = grid;
    u.frame = FrameInfo{FrameTag::Original, 1.0, 0.0};
    u.t = 0.0;
    u.values.assign(grid.size(), cplx(0.0));
    int idx[3];
    for (std::size_t f = 0; f < u.values.size(); ++f) {
        unflatten(f, grid.dim, grid.points, idx);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            const double x = grid.coord(idx[a]);
            r2 += x * x;
        }
        u.values[f] = std::exp(-0.5 * r2 / (gaussian_width * gaussian_width));
    }
    // L1 normalization.
    double l1 = 0.0;
    for (const cplx& v : u.values) l1 += std::abs(v);
    l1 *= grid.cell_volume();
    for (cplx& v : u.values) v /= l1;

    KorotyaevReport rep;
    rep.s_mid = 0.5 * horizon;
    const int n = grid.dim;
    const bool zero_model = model.kind == SigmaKind::Zero;

    WaveState at_mid = u;  // placeholder until t reaches s_mid
    double l1_mid = 1.0;
    bool have_mid = false;

    double t = 0.0;
    double next_record = 0.0;
    std::vector<double> ts, r0, rmid;
    std::vector<WaveState> snapshots;
    std::vector<double> snapshot_times;

    auto record_now = [&](double tc) {
        const double linf = u.linf_norm();
        const auto s = pair.eval(tc);
        ts.push_back(tc);
        r0.push_back(linf * std::pow(std::abs(s.y2), 0.5 * n));
        snapshots.push_back(u);
        snapshot_times.push_back(tc);
    };

    record_now(0.0);
    next_record = record_dt;
    while (t < horizon - 1e-12) {
        const double h = std::min(dt, horizon - t);
        u = linear_substep_original(u, model, t, h);
        t += h;
        if (!have_mid && t >= rep.s_mid - 1e-12) {
            at_mid = u;
            double m = 0.0;
            for (const cplx& v : u.values) m += std::abs(v);
            l1_mid = m * grid.cell_volume();
            have_mid = true;
        }
        if (t >= next_record - 1e-12 || t >= horizon - 1e-12) {
            record_now(t);
            next_record += record_dt;
        }
    }

    // Interior-reference ratios, skipping the degenerate point t = s.
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double tc = ts[i];
        if (std::abs(tc - rep.s_mid) < 2.0 * dt) {
            rmid.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const auto st = pair.eval(tc);
        const auto ss = pair.eval(rep.s_mid);
        const double det = std::abs(st.y1 * ss.y2 - ss.y1 * st.y2);
        rmid.push_back(snapshots[i].linf_norm() * std::pow(det, 0.5 * n) / l1_mid);
    }

    // Free-Gaussian oracle for the zero model: u0 = A e^{-|x|^2/(2 w^2)} gives
    // |u(t)|_inf = A (1 + (t/w^2)^2)^{-n/4}.
    if (zero_model) {
        double worst = 0.0;
        const double A = snapshots.front().linf_norm();
        const double w2 = gaussian_width * gaussian_width;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double pred =
                A * std::pow(1.0 + (ts[i] / w2) * (ts[i] / w2), -0.25 * n);
            worst = std::max(worst, std::abs(snapshots[i].linf_norm() - pred) / pred);
        }
        rep.max_oracle_rel_err = worst;
    }

    rep.times = std::move(ts);
    rep.ratio_s0 = std::move(r0);
    rep.ratio_s_mid = std::move(rmid);
    for (double v : rep.ratio_s0) rep.sup_s0 = std::max(rep.sup_s0, v);
    for (double v : rep.ratio_s_mid)
        if (std::isfinite(v)) rep.sup_s_mid = std::max(rep.sup_s_mid, v);
    return rep;
}

RefinementStudy run_refinement_study(SimConfig cfg, int levels) {
    if (levels < 2) throw DomainError("run_refinement_study: need at least 2 levels");
    cfg.adaptive = false;  // fixed dt so the self-convergence ratio is clean
    RefinementStudy out;
    for (int k = 0; k < levels; ++k) {
        RunRecord rec = evolve(cfg);
        out.dts.push_back(cfg.dt);
        out.terminal_residuals.push_back(rec.ledger_residual.back());
        cfg.dt *= 0.5;
    }
    for (std::size_t k = 0; k + 1 < out.terminal_residuals.size(); ++k)
        out.ratios.push_back(out.terminal_residuals[k] /
                             std::max(out.terminal_residuals[k + 1], 1e-300));
    return out;
}

ProfileTrack build_profile_track(const RunRecord& rec) {
    if (rec.profiles.empty())
        throw DegenerateData("build_profile_track: run recorded no profiles");
    ProfileTrack track;
    track.times = rec.times;
    track.tracked = select_tracked_indices(rec.profiles.front());
    const Grid& g = rec.profiles.front().grid;
    int idx[3];
    for (std::size_t k : track.tracked) {
        unflatten(k, g.dim, g.points, idx);
        double xi2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double xi = g.freq(idx[a]);
            xi2 += xi * xi;
        }
        track.tracked_freq.push_back(std::sqrt(xi2));
    }
    for (std::size_t i = 0; i < rec.profiles.size(); ++i) {
        std::vector<double> amps, rs;
        for (std::size_t k : track.tracked) {
            amps.push_back(std::abs(rec.profiles[i].values[k]));
            rs.push_back(std::abs(rec.remainder_values[i][k]));
        }
        track.amp_pde.push_back(std::move(amps));
        track.abs_R.push_back(std::move(rs));
    }
    track.remainder_linf = rec.remainder_linf;
    track.remainder_l2 = rec.remainder_l2;
    return track;
}

nlohmann::ordered_json criticality_to_json(const CriticalityReport& rep) {
    nlohmann::ordered_json j;
    j["class"] = to_string(rep.cls);
    j["c_plus"] = rep.c_plus;
    j["alpha"] = rep.alpha;
    j["fit_residual"] = rep.fit_residual;
    j["delta_star"] = rep.delta_star;
    j["delta_upper"] = rep.delta_upper;
    j["p_critical"] = rep.p_critical;
    j["strong_dissipation"] = rep.strong_dissipation;
    j["theta_max"] = rep.theta_max;
    j["theta_default"] = rep.theta_default;
    j["gamma"] = rep.gamma;
    j["s1"] = rep.s1;
    j["delta"] = rep.delta;
    j["n"] = rep.n;
    j["p"] = rep.p;
    j["s"] = rep.s;
    nlohmann::ordered_json preds = nlohmann::ordered_json::array();
    for (const auto& r : rep.predicted) {
        nlohmann::ordered_json pj;
        pj["theorem"] = r.theorem;
        pj["norm"] = r.norm;
        pj["abscissa"] = r.abscissa;
        pj["exponent"] = r.exponent;
        pj["applicable"] = r.applicable;
        if (!r.reason.empty()) pj["reason"] = r.reason;
        preds.push_back(pj);
    }
    j["predicted"] = preds;
    return j;
}

nlohmann::ordered_json fit_to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["quantity"] = to_string(fit.quantity);
    j["model"] = to_string(fit.model);
    j["exponent"] = fit.fitted_value;
    j["level"] = fit.level;
    j["residual"] = fit.residual;
    j["window"] = {fit.window_begin, fit.window_end};
    return j;
}

namespace {

std::string run_label(const SimConfig& cfg, std::size_t index) {
    std::ostringstream os;
    os << "run_" << index << "_" << cfg.model.kind_name() << "_p" << cfg.nl.p << "_eps"
       << cfg.initial.amplitude;
    return os.str();
}

void execute_one(RunOutput& out) {
    try {
        out.record = evolve(out.config);
        const double horizon = out.config.t_end + 1.0;
        FundamentalPair pair = solve_fundamental(out.config.model, horizon);
        out.classification = classify(pair, out.config.grid.dim, out.config.nl.p,
                                      out.config.model.T0, out.config.t_end);
        try {
            OscillatorDerived derived(pair, out.config.grid.dim, out.config.nl.p,
                                      out.config.model.T0, horizon);
            predicted_rates(out.classification, out.config.grid.dim, out.config.nl.p,
                            out.config.s, out.config.nl, derived);
        } catch (const SingularY1&) {
        }
        const FitWindow w = default_window(out.record);
        for (FitModel m : {FitModel::PowerOfT, FitModel::PowerOfY2, FitModel::Plateau}) {
            try {
                out.fits.push_back(fit_decay(out.record, FitQuantity::L2, m, w));
            } catch (const std::exception&) {
            }
        }
        try {
            out.fits.push_back(fit_decay(out.record, FitQuantity::Linf, FitModel::PowerOfT, w));
        } catch (const std::exception&) {
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads) {
    ExperimentResult result;

    // Cartesian sweep over the populated axes.
    std::vector<SimConfig> configs;
    std::vector<double> amps =
        spec.amplitudes.empty() ? std::vector<double>{spec.base.initial.amplitude}
                                : spec.amplitudes;
    std::vector<double> ps =
        spec.p_values.empty() ? std::vector<double>{spec.base.nl.p} : spec.p_values;
    std::vector<OscillatorModel> models;
    if (spec.model_names.empty()) {
        models.push_back(spec.base.model);
    } else {
        ConfigMap empty;
        for (const auto& name : spec.model_names) models.push_back(model_by_name(name, empty));
    }
    for (const auto& model : models)
        for (double p : ps)
            for (double eps : amps) {
                SimConfig c = spec.base;
                c.model = model;
                c.nl.p = p;
                c.initial.amplitude = eps;
                c.initial.seed = spec.seed;
                configs.push_back(c);
            }

    result.runs.resize(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        result.runs[i].config = configs[i];
        result.runs[i].label = run_label(configs[i], i);
    }

    // Independent runs on a small pool; outputs land in pre-assigned slots so
    // the merge order never depends on scheduling.
    const unsigned pool = threads ? threads
                                  : std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                          8u));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= result.runs.size()) break;
            execute_one(result.runs[k]);
        }
    };
    if (pool <= 1 || result.runs.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> ts;
        for (unsigned i = 0; i < pool; ++i) ts.emplace_back(worker);
        for (auto& th : ts) th.join();
    }

    if (spec.refine_levels >= 2)
        result.refinement = run_refinement_study(spec.base, spec.refine_levels);

    // Summary JSON + text table.
    nlohmann::ordered_json j;
    j["seed"] = spec.seed;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    std::ostringstream rpt;
    rpt << "label                                   class          fitted(L2,t)   ledger\n";
    for (const auto& run : result.runs) {
        nlohmann::ordered_json rj;
        rj["label"] = run.label;
        rj["model"] = run.config.model.kind_name();
        rj["p"] = run.config.nl.p;
        rj["amplitude"] = run.config.initial.amplitude;
        if (!run.error.empty()) {
            rj["error"] = run.error;
            runs.push_back(rj);
            rpt << run.label << "  FAILED: " << run.error << "\n";
            continue;
        }
        rj["terminal_l2"] = run.record.l2.back();
        rj["terminal_ledger_residual"] = run.record.ledger_residual.back();
        rj["steps"] = run.record.steps;
        rj["warnings"] = run.record.warnings;
        rj["classification"] = criticality_to_json(run.classification);
        nlohmann::ordered_json fits = nlohmann::ordered_json::array();
        for (const auto& f : run.fits) fits.push_back(fit_to_json(f));
        rj["fits"] = fits;
        runs.push_back(rj);

        double l2_exp = std::numeric_limits<double>::quiet_NaN();
        for (const auto& f : run.fits)
            if (f.quantity == FitQuantity::L2 && f.model == FitModel::PowerOfT)
                l2_exp = f.fitted_value;
        rpt << run.label << "  " << to_string(run.classification.cls) << "  " << l2_exp
            << "  " << run.record.ledger_residual.back() << "\n";
        rpt << "    predicted:";
        for (const auto& pr : run.classification.predicted)
            if (pr.applicable)
                rpt << " [" << pr.theorem << " " << pr.norm << " ~ " << pr.abscissa << "^"
                    << pr.exponent << "]";
        rpt << "\n";
    }
    j["runs"] = runs;
    if (!result.refinement.dts.empty()) {
        j["refinement"] = {{"dts", result.refinement.dts},
                           {"terminal_residuals", result.refinement.terminal_residuals},
                           {"ratios", result.refinement.ratios}};
        rpt << "refinement ratios (expect ~4 per halving):";
        for (double r : result.refinement.ratios) rpt << " " << r;
        rpt << "\n";
    }
    result.summary = std::move(j);
    result.report_text = rpt.str();

    ensure_directory(spec.out_dir);
    ensure_directory(path_join(spec.out_dir, "series"));
    for (const auto& run : result.runs) {
        if (!run.error.empty()) continue;
        const auto& r = run.record;
        write_csv(path_join(path_join(spec.out_dir, "series"), run.label + ".csv"),
                  {"t", "l2", "linf", "ledger_residual", "hs_half", "x_norm"},
                  {&r.times, &r.l2, &r.linf, &r.ledger_residual, &r.hs_half, &r.x_norm});
    }
    write_text(path_join(spec.out_dir, "summary.json"), result.summary.dump(2) + "\n");
    write_text(path_join(spec.out_dir, "report.txt"), result.report_text);
    return result;
}

}  // namespace tdnls
