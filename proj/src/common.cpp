#include "tilab/common.hpp"

namespace tilab {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 0) workers = default_workers();
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (w <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t b = k * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([=, &fn] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tilab
