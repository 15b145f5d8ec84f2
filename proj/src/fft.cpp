#include "tdnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "tdnls/errors.hpp"

namespace tdnls {

namespace {

struct PlanKey {
    int dim;
    int points;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (dim != o.dim) return dim < o.dim;
        if (points != o.points) return points < o.points;
        return sign < o.sign;
    }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(int dim, int points, int sign, fftw_complex* buf) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    const PlanKey key{dim, points, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int ns[3] = {points, points, points};
    // FFTW_UNALIGNED so the cached plan applies to any caller buffer.
    fftw_plan p = fftw_plan_dft(dim, ns, buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NonConvergence("fftw plan creation failed");
    cache.emplace(key, p);
    return p;
}

void run(std::vector<std::complex<double>>& data, int dim, int points, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan p = get_plan(dim, points, sign, buf);
    fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data, int dim, int points) {
    run(data, dim, points, FFTW_FORWARD);
}

void fft_backward(std::vector<std::complex<double>>& data, int dim, int points) {
    run(data, dim, points, FFTW_BACKWARD);
}

}  // namespace tdnls
