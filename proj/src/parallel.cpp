#include "torenv/parallel.hpp"

namespace torenv {

int& thread_count() {
    static int n = 1;
    return n;
}

void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    const int nt = thread_count();
    if (nt <= 1 || count < 4096) {
        fn(0, count);
        return;
    }
    const std::size_t chunk = (count + nt - 1) / nt;
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const std::size_t b = std::min(count, t * chunk);
        const std::size_t e = std::min(count, b + chunk);
        if (b >= e) break;
        workers.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& w : workers) w.join();
}

void parallel_nodes(std::size_t count, const std::function<void(std::size_t)>& fn) {
    parallel_blocks(count, [&fn](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

}  // namespace torenv
