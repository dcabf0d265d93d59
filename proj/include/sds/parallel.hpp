#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace sds {

/// Runs fn(i) for i in [0, count) over `threads` workers on contiguous
/// chunks. Results must be written to pre-sized slots so the outcome is
/// identical for any thread count.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    size_t workers = std::min<size_t>(threads, count);
    std::vector<std::thread> pool;
    size_t chunk = (count + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        size_t lo = w * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace sds
