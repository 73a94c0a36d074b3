#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace debtgame {

/// Worker count from DEBTGAME_THREADS, else the hardware count.
int default_threads();

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0 selects
/// default_threads()).  The first exception thrown is rethrown after all
/// workers finish.  Callers write results by index, so output order never
/// depends on completion order.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(
        n, static_cast<std::size_t>(threads > 0 ? threads : default_threads())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace debtgame
