#include "tdnls/grid.hpp"

#include <cmath>

namespace tdnls {

void Grid::validate() const {
    if (dim < 1 || dim > 3) throw DomainError("grid: dim must be 1, 2, or 3");
    if (points < 16) throw DomainError("grid: need at least 16 points per axis");
    if ((points & (points - 1)) != 0) throw DomainError("grid: points must be a power of two");
    if (!(half_width > 0.0)) throw DomainError("grid: half_width must be positive");
    if (dim == 3 && points > 128) throw DomainError("grid: 3-D capped at 128^3 points");
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(points);
    return s;
}

double Grid::dxi() const { return M_PI / half_width; }

double Grid::cell_volume() const { return std::pow(dx(), dim); }

double Grid::freq_cell_volume() const { return std::pow(dxi(), dim); }

double WaveState::l2_norm() const {
    double s = 0.0;
    for (const cplx& v : values) s += std::norm(v);
    return std::sqrt(s * grid.cell_volume());
}

double WaveState::linf_norm() const {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

double WaveState::lp_norm_pow(double p) const {
    double s = 0.0;
    for (const cplx& v : values) s += std::pow(std::abs(v), p);
    return s * grid.cell_volume();
}

double WaveState::boundary_amplitude() const {
    const int n = grid.points;
    double m = 0.0;
    int idx[3] = {0, 0, 0};
    for (std::size_t f = 0; f < values.size(); ++f) {
        unflatten(f, grid.dim, n, idx);
        bool boundary = false;
        for (int a = 0; a < grid.dim; ++a)
            if (idx[a] == 0 || idx[a] == n - 1) boundary = true;
        if (boundary) m = std::max(m, std::abs(values[f]));
    }
    return m;
}

double ProfileState::l2_norm() const {
    double s = 0.0;
    for (const cplx& v : values) s += std::norm(v);
    return std::sqrt(s * grid.freq_cell_volume());
}

double ProfileState::linf_norm() const {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace tdnls
