#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace f2ext::detail {

/// Runs fn(worker) on `workers` threads (inline when workers <= 1) and
/// rethrows the first exception.
template <class Fn>
void run_workers(unsigned workers, Fn&& fn) {
    if (workers <= 1) {
        fn(0U);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    fn(w);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!err) err = std::current_exception();
                }
            });
        }
    }
    if (err) std::rethrow_exception(err);
}

/// Lowest index i in [0, n) for which probe(i) yields a value. Workers claim
/// indices in increasing order and skip anything above the best hit, so the
/// answer does not depend on the worker count.
template <class R, class Probe>
std::optional<std::pair<std::uint64_t, R>> find_first(std::uint64_t n, unsigned workers, Probe&& probe) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    std::optional<std::pair<std::uint64_t, R>> result;
    std::mutex mu;
    run_workers(std::max(1U, workers), [&](unsigned) {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n || i > best.load()) return;
            std::optional<R> r = probe(i);
            if (!r) continue;
            std::lock_guard lock(mu);
            if (!result || i < result->first) {
                result.emplace(i, std::move(*r));
                best.store(i);
            }
        }
    });
    return result;
}

} // namespace f2ext::detail
