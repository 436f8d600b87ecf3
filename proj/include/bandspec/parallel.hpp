#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bandspec::detail {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; callers write results into per-index slots and
// reduce afterwards in index order, so the result is worker-count independent.
template <class Body>
void parallel_for(long count, int workers, Body&& body) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max(1L, count))));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace bandspec::detail
