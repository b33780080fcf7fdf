#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace c2v {

/// Runs fn(worker_id, begin, end) over `threads` contiguous chunks of
/// [0, count). threads <= 1 runs inline on the calling thread.
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count == 0) {
        fn(0, std::size_t{0}, count);
        return;
    }
    auto n = static_cast<std::size_t>(threads);
    if (n > count) n = count;
    std::vector<std::thread> pool;
    pool.reserve(n);
    std::size_t chunk = count / n;
    std::size_t extra = count % n;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < n; ++w) {
        std::size_t end = begin + chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&fn, w, begin, end] { fn(static_cast<int>(w), begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

} // namespace c2v
