#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace sysrisk {

// Runs body(i) for i in [0, n) across `jobs` workers. Jobs are immutable and
// write only to their own index, so scheduling order cannot affect results;
// jobs <= 1 degenerates to a plain loop.
template <typename Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace sysrisk
