#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randsum {

/// Resolve the worker count: RANDSUM_WORKERS overrides the requested value,
/// 0 means "use hardware concurrency".
inline int resolve_workers(int requested) {
    if (const char* env = std::getenv("RANDSUM_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(begin, end) over disjoint chunks of [0, total). Results must not
/// depend on the chunking: callers write to per-index slots or reduce later
/// in index order.
template <typename Fn>
void parallel_chunks(std::int64_t total, int workers, Fn&& fn) {
    workers = std::max(1, workers);
    if (total <= 0) return;
    if (workers == 1 || total < 2 * workers) {
        fn(std::int64_t{0}, total);
        return;
    }
    const std::int64_t chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t b = w * chunk;
        const std::int64_t e = std::min(total, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace randsum
