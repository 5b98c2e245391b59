#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "slowlight/errors.hpp"

// Thin FFTW wrapper. Plans are cached per (size, direction) behind a mutex
// (FFTW planning is not thread-safe); execution uses the new-array interface
// with FFTW_UNALIGNED so plain std::vector storage is fine. Transforms are
// unnormalized, matching FFTW's convention:
//   forward:  X_k = sum_n x_n e^{-2 pi i k n / N}
//   backward: X_k = sum_n x_n e^{+2 pi i k n / N}

namespace slowlight::fft {

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> in(n), out(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw numerical_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void execute(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) throw config_error("fft: empty input");
    fftw_plan p = PlanCache::instance().get(data.size(), sign);
    std::vector<std::complex<double>> out(data.size());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    data.swap(out);
}

} // namespace detail

inline void forward(std::vector<std::complex<double>>& data) {
    detail::execute(data, FFTW_FORWARD);
}

inline void backward(std::vector<std::complex<double>>& data) {
    detail::execute(data, FFTW_BACKWARD);
}

// smallest power of two >= n
inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace slowlight::fft
