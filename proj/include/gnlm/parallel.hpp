#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gnlm {

inline unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(task, worker) for task in [0, tasks) on up to `threads` workers.
/// Tasks are claimed dynamically, so fn must only write task-private state;
/// callers merge per-task results in task order to stay deterministic.
/// The first exception thrown by any task is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t tasks, unsigned threads, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(resolve_thread_count(threads), std::max<std::size_t>(tasks, 1)));
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks; ++t)
            fn(t, 0u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&](unsigned worker) {
        for (;;) {
            if (failed.load(std::memory_order_relaxed))
                return;
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks)
                return;
            try {
                fn(t, worker);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
    }
    if (error)
        std::rethrow_exception(error);
}

}  // namespace gnlm
