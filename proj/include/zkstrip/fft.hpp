#pragma once

// Thin wrapper over FFTW3 complex transforms. Plans are cached per length
// and direction behind a mutex (FFTW planning is not thread-safe, execution
// with the new-array interface is). Plans carry FFTW_UNALIGNED so they can
// run on any std::vector buffer.

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace zkstrip {
using cplx = std::complex<double>;
}

namespace zkstrip::fft {

using cplx = std::complex<double>;

namespace detail {

inline fftw_plan plan_for(int n, int sign) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> scratch(n);
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(scratch.data()),
                                   reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

inline void execute(int n, int sign, cplx* data) {
    fftw_plan p = plan_for(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

} // namespace detail

/// In-place DFT, X_m = sum_j x_j e^{-2 pi i j m / n} (no scaling).
inline void forward(cplx* data, int n) { detail::execute(n, FFTW_FORWARD, data); }

/// In-place inverse DFT including the 1/n factor.
inline void inverse(cplx* data, int n) {
    detail::execute(n, FFTW_BACKWARD, data);
    double s = 1.0 / n;
    for (int i = 0; i < n; ++i) data[i] *= s;
}

inline void forward(std::vector<cplx>& v) { forward(v.data(), static_cast<int>(v.size())); }
inline void inverse(std::vector<cplx>& v) { inverse(v.data(), static_cast<int>(v.size())); }

} // namespace zkstrip::fft
