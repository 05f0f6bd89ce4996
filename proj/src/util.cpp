#include "ghz/util.hpp"

#include <cstdlib>
#include <string>

namespace ghz {

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GHZPULSE_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int workers) {
    const int nw = std::min<std::size_t>(worker_count(workers), count);
    if (nw <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ghz
