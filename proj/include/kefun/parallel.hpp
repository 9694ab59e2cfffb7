#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kefun {

/// Calls fn(i) for i in [0, n) on up to `workers` threads, in contiguous blocks.
/// fn must only write state owned by index i. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t w = std::clamp<std::size_t>(workers < 1 ? 1 : static_cast<std::size_t>(workers), 1, std::max<std::size_t>(n, 1));
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t begin = n * k / w;
        const std::size_t end = n * (k + 1) / w;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace kefun
