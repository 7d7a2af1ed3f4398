#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace enroll {

// Runs task(i) for i in [0, count) on up to `threads` workers (threads <= 1
// runs inline). Results land in index order, so output never depends on
// scheduling. The first exception by index is rethrown after all workers
// finish.
template <class Result, class Task>
std::vector<Result> parallel_map(std::size_t count, unsigned threads, Task&& task)
{
    std::vector<Result> out(count);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = task(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(count);
    const auto workers = std::min<std::size_t>(threads, count);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += workers) {
                    try {
                        out[i] = task(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace enroll
