#include "lspline/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lspline::detail {

int assembly_threads(int jobs) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int cap = hw;
    if (const char* env = std::getenv("LSPLINE_THREADS")) {
        try {
            cap = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            cap = 1;
        }
    }
    return std::clamp(std::min(cap, hw), 1, std::max(1, jobs));
}

void parallel_for(int n, const std::function<void(int, int)>& chunk_body) {
    if (n <= 0) return;
    const int nthreads = assembly_threads(n);
    if (nthreads == 1) {
        chunk_body(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    const int chunk = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&chunk_body, lo, hi] { chunk_body(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace lspline::detail
