#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace msd {

/// MSD_RELAX_THREADS overrides the requested count; 0 means hardware.
inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("MSD_RELAX_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Static block partition; fn(i) must only write to slot i of preallocated
/// output, which keeps results independent of the thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([=, &fn]() {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace msd
