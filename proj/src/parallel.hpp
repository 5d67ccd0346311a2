#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hwmat::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers, contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
}

} // namespace hwmat::detail
