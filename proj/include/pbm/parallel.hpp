#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pbm {

inline unsigned default_workers() noexcept {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

/// Splits [0, n) into contiguous chunks and runs fn(begin, end, chunk) on each,
/// one thread per chunk. Returns the number of chunks. Callers keep one result
/// slot per chunk and merge them in chunk order, so the merged output does
/// not depend on scheduling. The first exception in chunk order is rethrown.
template <class Fn>
std::size_t parallel_chunks(std::size_t n, unsigned workers, Fn&& fn) {
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers == 0 ? 1 : workers, n));
    if (chunks == 1) {
        fn(std::size_t{0}, n, std::size_t{0});
        return 1;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> threads;
    threads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        threads.emplace_back([&, begin, end, c] {
            try {
                fn(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return chunks;
}

}  // namespace pbm
