#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace glemb {

/// Worker count for internal data parallelism; 0 means hardware concurrency.
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

namespace detail {
// Set on worker threads so nested parallel regions run inline.
inline thread_local bool in_worker = false;
} // namespace detail

/// Runs `fn(worker, begin, end)` over [0, n) in dynamically claimed chunks.
/// `worker` indexes per-worker scratch state in [0, workers).
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>((n + chunk - 1) / std::max<std::size_t>(chunk, 1))));
    if (workers <= 1 || detail::in_worker) {
        if (n) fn(0u, std::size_t{0}, n);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&](unsigned w) {
        const bool outer = detail::in_worker;
        detail::in_worker = true;
        try {
            for (;;) {
                std::size_t b = next.fetch_add(chunk);
                if (b >= n) break;
                fn(w, b, std::min(n, b + chunk));
            }
        } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
        }
        detail::in_worker = outer;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body, w);
    body(0);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace glemb
