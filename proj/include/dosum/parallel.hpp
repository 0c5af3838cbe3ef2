#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dosum {

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static sharding of [0, total) over `workers` threads. fn(shard, lo, hi)
// must write only shard-local state; callers merge shard results in shard
// order so the final outcome is independent of the worker count. The first
// exception thrown inside a shard is rethrown on the calling thread.
inline void parallel_shards(std::uint64_t total, int workers,
                            const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    if (workers < 1) workers = 1;
    if (total == 0) return;
    auto nshards = static_cast<std::uint64_t>(workers);
    if (nshards > total) nshards = total;
    if (nshards == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nshards);
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (std::uint64_t sh = 0; sh < nshards; ++sh) {
        std::uint64_t lo = total / nshards * sh + std::min<std::uint64_t>(sh, total % nshards);
        std::uint64_t hi = lo + total / nshards + (sh < total % nshards ? 1 : 0);
        pool.emplace_back([&, sh, lo, hi] {
            try {
                fn(static_cast<int>(sh), lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dosum
