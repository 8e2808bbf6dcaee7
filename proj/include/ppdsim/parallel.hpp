#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ppdsim {

/// Worker-pool width: PPDSIM_WORKERS env var if set, hardware concurrency
/// otherwise.
int worker_count();

/// Runs f(i) for i in [0, n) on the worker pool. Work items must be
/// independent; results should be written to pre-sized slots so the outcome
/// does not depend on completion order. The first exception thrown by a
/// worker is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    if (n == 0)
        return;
    int workers = worker_count();
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed))
                return;
            try {
                f(i);
            } catch (...) {
                if (!error_claimed.test_and_set())
                    error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int spawn = static_cast<int>(std::min(static_cast<std::size_t>(workers), n));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 1; w < spawn; ++w)
        pool.emplace_back(body);
    body();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace ppdsim
