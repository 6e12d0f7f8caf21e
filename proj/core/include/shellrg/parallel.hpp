#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace shellrg {

inline int resolveWorkers(int requested, size_t jobs) {
    int w = requested;
    if (w <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        w = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (static_cast<size_t>(w) > jobs) w = static_cast<int>(jobs);
    return w < 1 ? 1 : w;
}

/// Runs fn(0..count-1) on a bounded pool. Results must be written by index so
/// the aggregation is order-independent. The first exception (if any) is
/// rethrown after all workers join; job-level fault isolation is done by the
/// caller catching inside fn.
inline void parallelFor(size_t count, int workers, const std::function<void(size_t)>& fn) {
    if (count == 0) return;
    const int w = resolveWorkers(workers, count);
    if (w == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr firstError;
    std::mutex errMutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(w));
    for (int k = 0; k < w; ++k) {
        pool.emplace_back([&] {
            while (true) {
                const size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(errMutex);
                    if (!firstError) firstError = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

} // namespace shellrg
