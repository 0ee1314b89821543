#include "support/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdmpstop {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
    int n = g_max_threads.load();
    if (n == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return n;
}

void parallel_chunks(std::size_t total, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) return;
    const std::size_t nchunks = kReductionChunks;
    auto chunk_range = [&](std::size_t c) {
        std::size_t b = total * c / nchunks;
        std::size_t e = total * (c + 1) / nchunks;
        return std::pair<std::size_t, std::size_t>{b, e};
    };

    int nthreads = max_threads();
    if (nthreads <= 1 || total < 2) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            auto [b, e] = chunk_range(c);
            if (b < e) fn(c, b, e);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            auto [b, e] = chunk_range(c);
            if (b >= e) continue;
            try {
                fn(c, b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
    };

    std::size_t pool = static_cast<std::size_t>(nthreads);
    if (pool > nchunks) pool = nchunks;
    std::vector<std::thread> threads;
    threads.reserve(pool - 1);
    for (std::size_t i = 0; i + 1 < pool; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace pdmpstop
