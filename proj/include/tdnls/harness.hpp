#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdnls/config.hpp"
#include "tdnls/fitting.hpp"
#include "tdnls/profile.hpp"
#include "tdnls/solver.hpp"

namespace tdnls {

struct FitWindow {
    double begin = 0.0;
    double end = 0.0;
};

// Default window: the last half of [t0, t_end].
FitWindow default_window(const RunRecord& rec);

FitResult fit_decay(const RunRecord& rec, FitQuantity quantity, FitModel model,
                    const FitWindow& window);

struct KorotyaevReport {
    std::vector<double> times;
    std::vector<double> ratio_s0;     // |u(t)|_inf |y2(t)|^{n/2} / |u0|_1
    std::vector<double> ratio_s_mid;  // with the interior reference time
    double s_mid = 0.0;
    double sup_s0 = 0.0;
    double sup_s_mid = 0.0;
    // For sigma == 0, pointwise relative gap of |u(t)|_inf against the free
    // Gaussian closed form (1 + t^2)^{-n/4} scaling; negative when unused.
    double max_oracle_rel_err = -1.0;
};

// Linear flow (lambda = 0) from t = 0 with L1-normalized data.
KorotyaevReport korotyaev_check(const OscillatorModel& model, const Grid& grid,
                                double horizon, double dt, double record_dt,
                                double gaussian_width = 1.0);

struct RefinementStudy {
    std::vector<double> dts;
    std::vector<double> terminal_residuals;
    std::vector<double> ratios;  // residual[k] / residual[k+1]
};

// Repeats the run with dt halved per level (adaptivity off) and reports the
// terminal ledger residuals; order-2 splitting should quarter them.
RefinementStudy run_refinement_study(SimConfig cfg, int levels);

// Builds the per-frequency track from a profile-recording run.
ProfileTrack build_profile_track(const RunRecord& rec);

struct RunOutput {
    std::string label;
    SimConfig config;
    RunRecord record;
    std::vector<FitResult> fits;
    CriticalityReport classification;
    std::string error;  // nonempty if the run failed
};

struct ExperimentResult {
    std::vector<RunOutput> runs;
    RefinementStudy refinement;
    nlohmann::ordered_json summary;
    std::string report_text;
};

// Executes the sweep (concurrently, deterministically merged), writes
// summary.json, series/*.csv and report.txt under spec.out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

nlohmann::ordered_json criticality_to_json(const CriticalityReport& rep);
nlohmann::ordered_json fit_to_json(const FitResult& fit);

}  // namespace tdnls
