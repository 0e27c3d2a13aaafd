#include "colorizer/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace colorizer {

int thread_count() {
    static const int count = [] {
        if (const char* env = std::getenv("COLORIZER_THREADS")) {
            try {
                const int n = std::stoi(env);
                if (n > 0) return n;
            } catch (...) {
            }
        }
        return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }();
    return count;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(thread_count(), (count + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
    if (workers <= 1) {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(0, std::min(count, chunk));
}

}  // namespace colorizer
