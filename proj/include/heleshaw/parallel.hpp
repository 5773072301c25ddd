#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace heleshaw {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is dealt by
/// index stride and results must be written to index-addressed slots by the
/// caller, so the outcome is identical for any thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = int(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([=, &fn] {
            for (long i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace heleshaw
