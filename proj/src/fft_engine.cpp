#include "fft_engine.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace helesim::detail {
namespace {

std::mutex plan_mutex;

fftw_plan get_plan(int n0, int n1, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::size_t n = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // FFTW_UNALIGNED lets the cached plan execute on any caller buffer.
    fftw_plan p = (n1 > 0)
        ? fftw_plan_dft_2d(n0, n1, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_1d(n0, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

} // namespace

void fft_forward(int n0, int n1, std::complex<double>* data) {
    fftw_plan p = get_plan(n0, n1, FFTW_FORWARD);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

void fft_inverse(int n0, int n1, std::complex<double>* data) {
    fftw_plan p = get_plan(n0, n1, FFTW_BACKWARD);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

} // namespace helesim::detail
