#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace maba {

// Runs fn(0..n-1) on up to `threads` workers. Callers write results into
// per-index slots, so the outcome does not depend on scheduling; with
// threads == 1 the loop is strictly sequential.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

// Relative error with the scale floored at 1 (geometric mean of the two
// magnitudes), so identities spanning many orders of magnitude compare
// consistently.
inline double rel_err(std::complex<double> a, std::complex<double> b) {
    double scale = std::max(1.0, std::sqrt(std::abs(a) * std::abs(b)));
    return std::abs(a - b) / scale;
}

}  // namespace maba
