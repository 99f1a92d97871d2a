/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace arithdyn {

/// Apply fn to every item on `workers` threads; results keep input order, so
/// output never depends on scheduling. The first exception is rethrown.
template <class In, class Fn>
auto parallel_map(const std::vector<In> &items, Fn fn, unsigned workers)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    std::vector<Out> out(items.size());
    if (workers <= 1 || items.size() < 2) {
        for (std::size_t i = 0; i < items.size(); ++i)
            out[i] = fn(items[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= items.size() || failed.load())
                return;
            try {
                out[i] = fn(items[i]);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace arithdyn
