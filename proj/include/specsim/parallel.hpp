#pragma once

// Replicate fan-out. Workers pull disjoint replicate indices and write into
// caller-owned per-replicate slots, so the result is independent of the worker
// count and of scheduling.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace specsim {

inline void run_replicates(std::uint64_t count, int workers,
                           const std::function<void(std::uint64_t)>& body) {
    if (workers < 1) workers = 1;
    if (workers == 1 || count < 2) {
        for (std::uint64_t r = 0; r < count; ++r) body(r);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= count) return;
            try {
                body(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace specsim
