#include "tdnls/fitting.hpp"

#include <cmath>
#include <numeric>

#include "tdnls/errors.hpp"

namespace tdnls {

std::string to_string(FitQuantity q) {
    return q == FitQuantity::L2 ? "L2" : "Linf";
}

std::string to_string(FitModel m) {
    switch (m) {
        case FitModel::PowerOfT: return "power_of_t";
        case FitModel::PowerOfY2: return "power_of_y2";
        case FitModel::LogPower: return "log_power";
        case FitModel::Plateau: return "plateau";
    }
    return "?";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DegenerateData("fit_line: need at least two matched samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DegenerateData("fit_line: abscissa has zero variance");
    LineFit r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (r.intercept + r.slope * x[i]);
        ss += d * d;
    }
    r.rms_residual = std::sqrt(ss / n);
    return r;
}

FitResult fit_series(FitQuantity quantity, FitModel model,
                     const std::vector<double>& abscissa,
                     const std::vector<double>& values) {
    if (abscissa.size() != values.size() || values.size() < 2)
        throw DegenerateData("fit_series: need at least two matched samples");
    std::vector<double> tx, ty;
    tx.reserve(values.size());
    ty.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw DegenerateData("fit_series: non-positive value in fit window");
        double a = abscissa[i];
        switch (model) {
            case FitModel::PowerOfT:
            case FitModel::Plateau:
                if (!(a > 0.0)) throw DegenerateData("fit_series: non-positive time");
                tx.push_back(std::log(a));
                break;
            case FitModel::PowerOfY2:
                if (!(a > 0.0)) throw DegenerateData("fit_series: non-positive Y2");
                tx.push_back(std::log(a));
                break;
            case FitModel::LogPower:
                if (!(a > 1.0)) throw DegenerateData("fit_series: need t > 1 for log log t");
                tx.push_back(std::log(std::log(a)));
                break;
        }
        ty.push_back(std::log(values[i]));
    }
    const LineFit lf = fit_line(tx, ty);
    FitResult out;
    out.quantity = quantity;
    out.model = model;
    out.fitted_value = lf.slope;
    out.level = std::exp(lf.intercept);
    out.residual = lf.rms_residual;
    out.window_begin = abscissa.front();
    out.window_end = abscissa.back();
    if (model == FitModel::Plateau) {
        // Terminal mean over the last quarter of the window.
        const std::size_t k = values.size() - std::max<std::size_t>(1, values.size() / 4);
        double m = 0.0;
        for (std::size_t i = k; i < values.size(); ++i) m += values[i];
        out.level = m / static_cast<double>(values.size() - k);
    }
    return out;
}

}  // namespace tdnls
