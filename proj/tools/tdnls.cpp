// Command-line front end: config-driven simulation, classification, lens
// cross-checks, profile studies, decay fits, sweeps, and the linear
// dispersive-bound probe.

#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdnls/harness.hpp"
#include "tdnls/io.hpp"

using namespace tdnls;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed for randomized initial data");
}

SimConfig load_sim(const CommonArgs& args) {
    ConfigMap cfg = ConfigMap::parse_file(args.config_path);
    SimConfig sc = build_sim_config(cfg);
    sc.initial.seed = args.seed;
    return sc;
}

void write_run_outputs(const std::string& out_dir, const std::string& label,
                       const RunRecord& rec, nlohmann::ordered_json extra) {
    ensure_directory(out_dir);
    ensure_directory(path_join(out_dir, "series"));
    write_csv(path_join(path_join(out_dir, "series"), label + ".csv"),
              {"t", "l2", "linf", "ledger_residual", "hs_half", "x_norm"},
              {&rec.times, &rec.l2, &rec.linf, &rec.ledger_residual, &rec.hs_half,
               &rec.x_norm});
    nlohmann::ordered_json j;
    j["label"] = label;
    j["terminal_l2"] = rec.l2.back();
    j["terminal_linf"] = rec.linf.back();
    j["terminal_ledger_residual"] = rec.ledger_residual.back();
    j["steps"] = rec.steps;
    j["wall_seconds"] = rec.wall_seconds;
    j["warnings"] = rec.warnings;
    if (!extra.is_null()) j["detail"] = extra;
    write_text(path_join(out_dir, "summary.json"), j.dump(2) + "\n");
}

int cmd_simulate(const CommonArgs& args) {
    SimConfig sc = load_sim(args);
    if (sc.save_fields_every > 0) {
        sc.fields_dir = path_join(args.out_dir, "fields");
        ensure_directory(sc.fields_dir);
    }
    RunRecord rec = evolve(sc);
    write_run_outputs(args.out_dir, "simulate", rec, nullptr);
    std::cout << "terminal l2 " << rec.l2.back() << ", ledger residual "
              << rec.ledger_residual.back() << ", steps " << rec.steps << "\n";
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    ConfigMap cfg = ConfigMap::parse_file(args.config_path);
    SimConfig sc = build_sim_config(cfg);
    const double horizon = cfg.get_double("run", "classify_horizon", sc.t_end);
    FundamentalPair pair = solve_fundamental(sc.model, horizon + 1.0);
    CriticalityReport rep =
        classify(pair, sc.grid.dim, sc.nl.p, sc.model.T0, horizon);
    try {
        OscillatorDerived derived(pair, sc.grid.dim, sc.nl.p, sc.model.T0, horizon + 1.0);
        predicted_rates(rep, sc.grid.dim, sc.nl.p, sc.s, sc.nl, derived);
    } catch (const SingularY1&) {
        std::cerr << "note: y1 vanishes on the window; predictions skipped\n";
    }
    ensure_directory(args.out_dir);
    write_text(path_join(args.out_dir, "classification.json"),
               criticality_to_json(rep).dump(2) + "\n");

    // Dense-output samples of the fundamental pair.
    {
        std::vector<double> ts, y1s, y2s, dy1s, dy2s, ws;
        const int samples = cfg.get_int("run", "oscillator_samples", 400);
        for (int i = 0; i <= samples; ++i) {
            const double t = horizon * i / samples;
            const auto s = pair.eval(t);
            ts.push_back(t);
            y1s.push_back(s.y1);
            y2s.push_back(s.y2);
            dy1s.push_back(s.dy1);
            dy2s.push_back(s.dy2);
            ws.push_back(s.y1 * s.dy2 - s.dy1 * s.y2);
        }
        write_csv(path_join(args.out_dir, "oscillator.csv"),
                  {"t", "y1", "y2", "dy1", "dy2", "wronskian"},
                  {&ts, &y1s, &y2s, &dy1s, &dy2s, &ws});
    }

    std::cout << "model " << sc.model.kind_name() << ", n=" << sc.grid.dim
              << ", p=" << sc.nl.p << "\n"
              << "  class            " << to_string(rep.cls) << "\n"
              << "  alpha            " << rep.alpha << "\n"
              << "  c_plus           " << rep.c_plus << "\n"
              << "  delta*           " << rep.delta_star << "\n"
              << "  delta^*          " << rep.delta_upper << "\n"
              << "  p_critical       " << rep.p_critical << "\n"
              << "  strong diss.     " << (rep.strong_dissipation ? "yes" : "no") << "\n"
              << "  theta window     (0, " << rep.theta_max << ")\n"
              << "  delta (cond C)   " << rep.delta << "\n";
    for (const auto& pr : rep.predicted)
        if (pr.applicable)
            std::cout << "  predicts " << pr.norm << " ~ " << pr.abscissa << "^"
                      << pr.exponent << "  [" << pr.theorem << "]\n";
    return 0;
}

int cmd_lens_check(const CommonArgs& args) {
    SimConfig sc = load_sim(args);
    CrossValidation cv = cross_validate(sc);
    ensure_directory(args.out_dir);
    write_csv(path_join(args.out_dir, "lens_check.csv"),
              {"t", "l2_discrepancy", "linf_discrepancy"},
              {&cv.times, &cv.l2_discrepancy, &cv.linf_discrepancy});
    std::cout << "terminal relative L2 discrepancy " << cv.l2_discrepancy.back() << "\n";
    return 0;
}

int cmd_profile(const CommonArgs& args) {
    SimConfig sc = load_sim(args);
    sc.record_profile = true;
    RunRecord rec = evolve(sc);
    const double horizon = sc.t_end + 1.0;
    FundamentalPair pair = solve_fundamental(sc.model, horizon);
    OscillatorDerived derived(pair, sc.grid.dim, sc.nl.p, sc.model.T0, horizon);
    ProfileTrack track = build_profile_track(rec);
    ProfileComparison cmp =
        compare_pde_vs_ode(track, derived, sc.nl.p, std::abs(sc.nl.lambda_im));

    ensure_directory(args.out_dir);
    std::vector<double> ts, xis, pde, ode, rlinf;
    for (std::size_t i = 0; i < track.times.size(); ++i)
        for (std::size_t k = 0; k < track.tracked.size(); ++k) {
            ts.push_back(track.times[i]);
            xis.push_back(track.tracked_freq[k]);
            pde.push_back(track.amp_pde[i][k]);
            ode.push_back(cmp.amp_ode[i][k]);
            rlinf.push_back(track.remainder_linf[i]);
        }
    write_csv(path_join(args.out_dir, "profile.csv"),
              {"t", "xi", "amp_pde", "amp_ode", "remainder_linf"},
              {&ts, &xis, &pde, &ode, &rlinf});
    nlohmann::ordered_json j;
    j["tracked_freqs"] = track.tracked_freq;
    j["sup_discrepancy"] = cmp.sup_discrepancy;
    j["budget"] = cmp.budget;
    j["budget_linf"] = cmp.budget_linf;
    write_text(path_join(args.out_dir, "summary.json"), j.dump(2) + "\n");
    std::cout << "tracked " << track.tracked.size() << " frequencies; max discrepancy "
              << *std::max_element(cmp.sup_discrepancy.begin(), cmp.sup_discrepancy.end())
              << "\n";
    return 0;
}

int cmd_fit(const CommonArgs& args) {
    ConfigMap cfg = ConfigMap::parse_file(args.config_path);
    SimConfig sc = build_sim_config(cfg);
    sc.initial.seed = args.seed;
    RunRecord rec = evolve(sc);
    FitWindow w = default_window(rec);
    w.begin = cfg.get_double("fit", "window_begin", w.begin);
    w.end = cfg.get_double("fit", "window_end", w.end);

    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    for (FitModel m :
         {FitModel::PowerOfT, FitModel::PowerOfY2, FitModel::LogPower, FitModel::Plateau}) {
        for (FitQuantity q : {FitQuantity::L2, FitQuantity::Linf}) {
            try {
                FitResult f = fit_decay(rec, q, m, w);
                fits.push_back(fit_to_json(f));
                std::cout << to_string(q) << " vs " << to_string(m) << ": exponent "
                          << f.fitted_value << " (residual " << f.residual << ")\n";
            } catch (const std::exception&) {
            }
        }
    }
    ensure_directory(args.out_dir);
    write_text(path_join(args.out_dir, "fits.json"), fits.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    ConfigMap cfg = ConfigMap::parse_file(args.config_path);
    ExperimentSpec spec = build_experiment_spec(cfg);
    spec.out_dir = args.out_dir;
    spec.seed = args.seed;
    ExperimentResult res = run_experiment(spec);
    std::cout << res.report_text;
    return 0;
}

int cmd_korotyaev(const CommonArgs& args) {
    ConfigMap cfg = ConfigMap::parse_file(args.config_path);
    SimConfig sc = build_sim_config(cfg);
    const double horizon = cfg.get_double("run", "t_end", 20.0);
    const double dt = cfg.get_double("run", "dt", 0.01);
    KorotyaevReport rep = korotyaev_check(sc.model, sc.grid, horizon, dt,
                                          cfg.get_double("run", "record_dt", 0.5),
                                          sc.initial.width);
    ensure_directory(args.out_dir);
    write_csv(path_join(args.out_dir, "korotyaev.csv"), {"t", "ratio_s0", "ratio_s_mid"},
              {&rep.times, &rep.ratio_s0, &rep.ratio_s_mid});
    nlohmann::ordered_json j;
    j["sup_ratio_s0"] = rep.sup_s0;
    j["sup_ratio_s_mid"] = rep.sup_s_mid;
    j["s_mid"] = rep.s_mid;
    if (rep.max_oracle_rel_err >= 0.0) j["max_oracle_rel_err"] = rep.max_oracle_rel_err;
    write_text(path_join(args.out_dir, "summary.json"), j.dump(2) + "\n");
    std::cout << "sup |u|_inf |y2|^{n/2} = " << rep.sup_s0;
    if (rep.max_oracle_rel_err >= 0.0)
        std::cout << ", oracle max rel err " << rep.max_oracle_rel_err;
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative NLS with a time-dependent harmonic potential"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* sim = app.add_subcommand("simulate", "run one simulation");
    add_common(sim, args);
    auto* cls = app.add_subcommand("classify", "criticality classification");
    add_common(cls, args);
    auto* lens = app.add_subcommand("lens-check", "original vs lens frame cross-check");
    add_common(lens, args);
    auto* prof = app.add_subcommand("profile", "Fourier profile study");
    add_common(prof, args);
    auto* fit = app.add_subcommand("fit", "decay-exponent fits");
    add_common(fit, args);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep / experiment bundle");
    add_common(sweep, args);
    auto* koro = app.add_subcommand("korotyaev", "linear dispersive-bound probe");
    add_common(koro, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (cls->parsed()) return cmd_classify(args);
        if (lens->parsed()) return cmd_lens_check(args);
        if (prof->parsed()) return cmd_profile(args);
        if (fit->parsed()) return cmd_fit(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (koro->parsed()) return cmd_korotyaev(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
