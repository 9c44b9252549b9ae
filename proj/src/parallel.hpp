#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hardcore::detail {

inline unsigned worker_count(unsigned requested = 0) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return requested == 0 ? hw : std::min(requested, hw);
}

/// Runs body(i) for i in [0, count) over contiguous chunks, one per worker.
/// The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned threads = 0) {
    const std::size_t workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(count, (w + 1) * chunk);
                for (std::size_t i = w * chunk; i < end; ++i)
                    body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace hardcore::detail
