#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nlg {

int thread_count();

// Splits [0, n) into contiguous chunks, one per worker. Chunk boundaries only
// depend on n and the worker count; callers merge chunk results in order.
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& work) {
    std::size_t workers = static_cast<std::size_t>(thread_count());
    if (workers > n) workers = n == 0 ? 1 : n;
    if (workers <= 1) {
        work(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                work(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Compensated (Neumaier) accumulator.
struct KahanSum {
    double sum = 0;
    double carry = 0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace nlg
