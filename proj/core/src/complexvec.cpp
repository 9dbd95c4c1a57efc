#include "leray/complexvec.hpp"

#include <cmath>

namespace leray {

cplx det(std::span<const cplx> matrix, int dim) {
    if ((int)matrix.size() != dim * dim) throw std::invalid_argument("det: size mismatch");
    CVec a(matrix.begin(), matrix.end());
    cplx d = 1.0;
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        double best = std::abs(a[col * dim + col]);
        for (int r = col + 1; r < dim; ++r) {
            double m = std::abs(a[r * dim + col]);
            if (m > best) { best = m; piv = r; }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int c = col; c < dim; ++c) std::swap(a[piv * dim + c], a[col * dim + c]);
            d = -d;
        }
        cplx p = a[col * dim + col];
        d *= p;
        for (int r = col + 1; r < dim; ++r) {
            cplx f = a[r * dim + col] / p;
            if (f == 0.0) continue;
            for (int c = col + 1; c < dim; ++c) a[r * dim + c] -= f * a[col * dim + c];
        }
    }
    return d;
}

cplx pairwise_sum(std::span<const cplx> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        cplx s = 0.0;
        for (const cplx& v : values) s += v;
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

}  // namespace leray
