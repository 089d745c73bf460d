#pragma once

// Mode-parallel map: read-only shared inputs, one writer per mode slot,
// join before any cross-mode reduction. Reductions stay serial in fixed
// mode order so results are bit-stable across thread counts.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace zkstrip {

inline std::atomic<int>& thread_budget() {
    static std::atomic<int> budget{1};
    return budget;
}

inline void set_thread_budget(int n) { thread_budget().store(n < 1 ? 1 : n); }

/// Applies fn(k) for k = 1..K, splitting modes over the thread budget.
template <typename Fn>
void for_each_mode(int K, Fn&& fn) {
    int nthreads = thread_budget().load();
    if (nthreads <= 1 || K <= 1) {
        for (int k = 1; k <= K; ++k) fn(k);
        return;
    }
    if (nthreads > K) nthreads = K;
    std::atomic<int> next{1};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&]() {
            for (int k = next.fetch_add(1); k <= K; k = next.fetch_add(1)) fn(k);
        });
    for (auto& th : pool) th.join();
}

} // namespace zkstrip
