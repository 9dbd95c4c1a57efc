#include "leray/parallel.hpp"

namespace leray {

namespace {
constexpr std::size_t kChunk = 2048;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    workers = std::max(1, workers);
    if (workers == 1 || count < 2 * kChunk) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t lo = next.fetch_add(kChunk);
            if (lo >= count) return;
            std::size_t hi = std::min(lo + kChunk, count);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

std::vector<cplx> parallel_accumulate(std::size_t count, std::size_t width, int workers,
                                      const std::function<void(std::size_t, cplx*)>& fn) {
    const std::size_t nchunks = (count + kChunk - 1) / kChunk;
    std::vector<cplx> chunk_sums(std::max<std::size_t>(nchunks, 1) * width, cplx(0.0));

    parallel_for(nchunks, workers, [&](std::size_t c) {
        std::size_t lo = c * kChunk, hi = std::min(lo + kChunk, count);
        std::vector<cplx> acc(width, cplx(0.0));
        std::vector<cplx> node(width);
        for (std::size_t i = lo; i < hi; ++i) {
            std::fill(node.begin(), node.end(), cplx(0.0));
            fn(i, node.data());
            for (std::size_t k = 0; k < width; ++k) acc[k] += node[k];
        }
        std::copy(acc.begin(), acc.end(), chunk_sums.begin() + c * width);
    });

    // Strided gather per output, then a fixed-order pairwise reduce.
    std::vector<cplx> out(width), column(nchunks);
    for (std::size_t k = 0; k < width; ++k) {
        for (std::size_t c = 0; c < nchunks; ++c) column[c] = chunk_sums[c * width + k];
        out[k] = pairwise_sum(column);
    }
    return out;
}

}  // namespace leray
