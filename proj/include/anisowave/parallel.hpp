#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace aniso {

// Thread cap: ANISOWAVE_THREADS env var, else hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("ANISOWAVE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Static block split; results must be written to preallocated slots so the
// outcome is independent of the schedule.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned nt = std::min<std::size_t>(thread_budget(), count ? count : 1);
    if (nt <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (count + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Index-ascending pairwise summation; deterministic independent of threading.
inline double pairwise_sum(const double* a, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& a) {
    return pairwise_sum(a.data(), a.size());
}

}  // namespace aniso
