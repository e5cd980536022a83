#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace fracsheet {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [begin, end) into `threads` contiguous chunks and runs
/// fn(chunk_index, chunk_begin, chunk_end) on each. Callers merge
/// per-chunk results in chunk order so output does not depend on
/// scheduling.
inline void parallel_chunks(int begin, int end, int threads,
                            const std::function<void(int, int, int)>& fn) {
    const int total = end - begin;
    if (total <= 0) return;
    const int n = std::min(resolve_threads(threads), total);
    if (n == 1) {
        fn(0, begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int c = 0; c < n; ++c) {
        const int lo = begin + static_cast<int>(static_cast<long long>(total) * c / n);
        const int hi = begin + static_cast<int>(static_cast<long long>(total) * (c + 1) / n);
        pool.emplace_back([=, &fn] { fn(c, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fracsheet
