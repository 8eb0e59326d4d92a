#include "persym/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace persym::detail {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;
    // Plans are created against fftw_malloc'd scratch, so alignment matches
    // any later fftw_malloc'd execution buffers.
    fftw_plan get(int rank, int n, int sign, fftw_complex* in, fftw_complex* out) {
        std::scoped_lock lock(mu);
        auto key = std::make_tuple(rank, n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<int> dims(static_cast<std::size_t>(rank), n);
        fftw_plan p = fftw_plan_dft(rank, dims.data(), in, out, sign, FFTW_ESTIMATE);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft_nd(std::vector<cplx>& data, int rank, int npoints, int sign) {
    std::size_t total = 1;
    for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(npoints);
    if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

    fftw_complex* buf = fftw_alloc_complex(total);
    if (!buf) throw std::bad_alloc();
    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(static_cast<void*>(buf), static_cast<const void*>(data.data()),
                total * sizeof(cplx));
    fftw_plan plan = cache().get(rank, npoints, sign, buf, buf);
    fftw_execute_dft(plan, buf, buf);
    std::memcpy(static_cast<void*>(data.data()), static_cast<const void*>(buf),
                total * sizeof(cplx));
    fftw_free(buf);
}

}  // namespace persym::detail
