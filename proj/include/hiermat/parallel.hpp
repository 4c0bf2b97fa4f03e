#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hiermat {

/// Worker count: APP_THREADS overrides hardware concurrency (clamped to at
/// least 1). APP_THREADS=1 disables threading entirely.
inline unsigned thread_count() {
    if (const char* env = std::getenv("APP_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Run `fn(block_index, begin, end)` over [0, n) split into fixed-size
/// blocks. Blocks are claimed atomically by worker threads; callers that
/// need determinism must write into per-block slots and merge in block
/// order afterwards. The block size is independent of the thread count.
template <typename Fn>
void for_each_block(std::uint64_t n, std::uint64_t block_size, Fn&& fn) {
    const std::uint64_t n_blocks = (n + block_size - 1) / block_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), n_blocks));

    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b)
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace hiermat
