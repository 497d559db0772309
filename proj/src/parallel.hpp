#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qnr::detail {

/// Runs work(i) for i in [0, n) on `jobs` threads. Indices are handed out
/// one at a time, so expensive items balance across workers. The first
/// exception thrown by any item is rethrown after all workers stop.
template <class Work>
void parallel_for(std::uint64_t n, unsigned jobs,
                  const std::function<void(std::uint64_t, std::uint64_t)>& progress, Work&& work) {
    jobs = std::max(1u, jobs);
    std::atomic<std::uint64_t> next{0}, done{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
                failed.store(true);
                next.store(n);
            }
            done.fetch_add(1, std::memory_order_release);
        }
    };
    if (jobs == 1 && !progress) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
        if (progress) {
            while (done.load(std::memory_order_acquire) < n && !failed.load()) {
                std::this_thread::sleep_for(std::chrono::milliseconds(250));
                progress(std::min(done.load(std::memory_order_acquire), n), n);
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace qnr::detail
