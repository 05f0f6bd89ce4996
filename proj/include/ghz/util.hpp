#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ghz {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    if (count == 1) { v[0] = lo; return v; }
    for (int i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return v;
}

// Resolves the worker count: explicit request > GHZPULSE_WORKERS > hardware.
int worker_count(int requested = 0);

// Runs fn(i) for i in [0, count) on a small thread pool. Results must be
// written by index; the dispatch order is unspecified but each index runs
// exactly once, so index-addressed output is deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int workers = 0);

} // namespace ghz
