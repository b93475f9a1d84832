#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heatctl {

inline int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Splits [0, n) into contiguous blocks and runs f(begin, end) on each.
// Every index is processed by exactly one worker, so elementwise maps are
// bitwise independent of the thread count. Reductions must be done by the
// caller in a fixed order afterwards.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (n == 0) return;
    const std::size_t nthreads =
        std::min<std::size_t>(std::max(threads, 1), n);
    if (nthreads <= 1) {
        f(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f, &first_error, &error_mutex] {
            try {
                f(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace heatctl
