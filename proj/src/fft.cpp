#include "ghost/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace ghost::detail {

namespace {

struct PlanCache {
    std::mutex lock;
    std::map<std::tuple<std::size_t, std::size_t, bool>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, p] : plans) fftw_destroy_plan(p);
    }

    fftw_plan get(std::size_t rows, std::size_t cols, bool inverse) {
        std::scoped_lock g(lock);
        auto key = std::make_tuple(rows, cols, inverse);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        // Plan on a probe buffer with FFTW_UNALIGNED so the plan can later be
        // executed on any caller buffer. FFTW_ESTIMATE keeps planning
        // deterministic run-to-run.
        std::vector<std::complex<double>> probe(rows * cols);
        auto* p = reinterpret_cast<fftw_complex*>(probe.data());
        fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), p, p,
                                          inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft2(ComplexGrid& g, bool inverse) {
    fftw_plan plan = cache().get(g.rows(), g.cols(), inverse);
    auto* p = reinterpret_cast<fftw_complex*>(g.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace ghost::detail
