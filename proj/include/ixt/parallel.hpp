#pragma once

// Bounded worker pool over an index range. Results land in input order, so
// output never depends on completion order; if several tasks throw, the
// exception of the lowest index is rethrown.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace ixt {

template <class F>
auto parallel_map(std::size_t n, int jobs, F&& fn) {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(n);
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace ixt
