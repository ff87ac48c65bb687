#ifndef QFC_PARALLEL_HPP
#define QFC_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace qfc {

/// Global worker count for chunked loops (set from the CLI --threads flag).
int worker_count();
void set_worker_count(int n);

/// Runs fn(chunk_index, begin, end) over a fixed partition of [0, n) into
/// `chunks` pieces. The partition depends only on (n, chunks), never on the
/// worker count, so per-chunk results combined in chunk order are bit-identical
/// for any number of threads.
inline void for_each_chunk(std::size_t n, std::size_t chunks,
                           const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunks == 0) chunks = 1;
    if (chunks > n) chunks = n;
    auto bounds = [&](std::size_t c) {
        return std::pair<std::size_t, std::size_t>(n * c / chunks, n * (c + 1) / chunks);
    };
    int workers = worker_count();
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            auto [lo, hi] = bounds(c);
            fn(c, lo, hi);
        }
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t c = cursor.fetch_add(1);
                if (c >= chunks) break;
                auto [lo, hi] = bounds(c);
                fn(c, lo, hi);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace qfc

#endif
