#include "wsc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wsc {

namespace {
unsigned g_override = 0;

unsigned default_threads() {
    if (const char* env = std::getenv("WSCOUNT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}
}  // namespace

unsigned thread_count() { return g_override ? g_override : default_threads(); }

void set_thread_count(unsigned n) { g_override = n; }

void parallel_blocks(u64 n_blocks, const std::function<void(u64)>& fn) {
    if (n_blocks == 0) return;
    unsigned workers = thread_count();
    if (workers > n_blocks) workers = static_cast<unsigned>(n_blocks);
    if (workers <= 1) {
        for (u64 b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<u64> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                u64 b = next.fetch_add(1);
                if (b >= n_blocks || failed.load()) return;
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

}  // namespace wsc
