#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace cocyclelab {

// Runs f(i) for i in [0, n). Each index must write only to its own output
// slot; reductions happen after the join, in index order, so the worker
// count never affects results.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cocyclelab
