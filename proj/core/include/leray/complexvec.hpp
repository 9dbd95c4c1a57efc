#ifndef LERAY_COMPLEXVEC_HPP
#define LERAY_COMPLEXVEC_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace leray {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

/// <xi, (1, z)> with xi of length n+1 and z the affine point of length n.
inline cplx dual_pairing(std::span<const cplx> xi, std::span<const cplx> z) {
    if (xi.size() != z.size() + 1)
        throw std::invalid_argument("dual_pairing: dimension mismatch");
    cplx s = xi[0];
    for (std::size_t j = 0; j < z.size(); ++j) s += xi[j + 1] * z[j];
    return s;
}

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

/// Determinant of a dense complex matrix (row-major, dim x dim), LU with
/// partial pivoting. Destroys its working copy, not the argument.
cplx det(std::span<const cplx> matrix, int dim);

/// Pairwise (binary-tree) summation with a fixed association order, so the
/// result depends only on the values, not on partitioning across workers.
cplx pairwise_sum(std::span<const cplx> values);

}  // namespace leray

#endif
