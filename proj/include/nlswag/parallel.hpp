// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_PARALLEL_HPP
#define NLSWAG_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nlswag {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs fn(job) for job in [0, jobs) on `threads` workers pulling from an
// atomic counter.  Jobs must write disjoint outputs; results then do not
// depend on the schedule or the thread count.  Exceptions are rethrown.
inline void parallel_jobs(int threads, int jobs, const std::function<void(int)>& fn) {
    threads = std::min(resolve_threads(threads), jobs);
    if (threads <= 1) {
        for (int j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int j = next.fetch_add(1, std::memory_order_relaxed);
            if (j >= jobs) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads) - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace nlswag

#endif
