#pragma once

#include <string>
#include <vector>

namespace tdnls {

enum class FitQuantity { L2, Linf };

enum class FitModel { PowerOfT, PowerOfY2, LogPower, Plateau };

std::string to_string(FitQuantity q);
std::string to_string(FitModel m);

// Result of a least-squares fit in transformed coordinates:
//   PowerOfT:  log y = log C + e * log t
//   PowerOfY2: log y = log C + e * log Y2(t)
//   LogPower:  log y = log C + e * log log t
//   Plateau:   log y = log C + e * log t, level = mean of terminal values
struct FitResult {
    FitQuantity quantity = FitQuantity::L2;
    FitModel model = FitModel::PowerOfT;
    double fitted_value = 0.0;  // the exponent (slope in transformed coords)
    double level = 0.0;         // exp(intercept); terminal mean for Plateau
    double residual = 0.0;      // RMS residual of the log-scale fit
    double window_begin = 0.0;
    double window_end = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fits `values` (strictly positive) against the transformed abscissa chosen by
// `model`.  For PowerOfY2 the caller passes the Y2 samples through `abscissa`;
// for the other models `abscissa` holds the times.  Throws DegenerateData when
// a log transform hits a non-positive value.
FitResult fit_series(FitQuantity quantity, FitModel model,
                     const std::vector<double>& abscissa,
                     const std::vector<double>& values);

}  // namespace tdnls
