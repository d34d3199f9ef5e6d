#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "hasseq/arith.hpp"

namespace hasseq {

// Splits [lo, hi] into blocks of `block` values, evaluates `fn(blo, bhi)` on
// up to `jobs` worker threads, and hands each result to `consume` in block
// order on the calling thread. Numeric output therefore never depends on the
// worker count.
template <typename R, typename Fn, typename Consume>
void run_blocks(u64 lo, u64 hi, u64 block, int jobs, Fn&& fn, Consume&& consume) {
    if (lo > hi) return;
    if (block == 0) throw std::invalid_argument("run_blocks: block must be positive");
    if (jobs < 1) throw std::invalid_argument("run_blocks: jobs must be >= 1");
    if (jobs == 1) {
        for (u64 blo = lo; blo <= hi; blo += block) {
            const u64 bhi = std::min(hi, blo + block - 1);
            R r = fn(blo, bhi);
            consume(r);
            if (bhi == hi) break;  // guard blo overflow when hi is near the type max
        }
        return;
    }
    const u64 nblocks = (hi - lo) / block + 1;
    const u64 round = static_cast<u64>(jobs) * 4;
    std::vector<R> results;
    for (u64 first = 0; first < nblocks; first += round) {
        const u64 count = std::min(round, nblocks - first);
        results.assign(count, R{});
        std::vector<std::thread> pool;
        std::atomic<u64> next{0};
        const int nthreads = static_cast<int>(std::min<u64>(jobs, count));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    const u64 i = next.fetch_add(1);
                    if (i >= count) return;
                    const u64 blo = lo + (first + i) * block;
                    const u64 bhi = std::min(hi, blo + block - 1);
                    results[i] = fn(blo, bhi);
                }
            });
        }
        for (auto& th : pool) th.join();
        for (u64 i = 0; i < count; ++i) consume(results[i]);
    }
}

} // namespace hasseq
