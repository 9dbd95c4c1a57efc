#ifndef LERAY_ROOTS_HPP
#define LERAY_ROOTS_HPP

#include <functional>
#include <span>
#include <vector>

#include "leray/complexvec.hpp"

namespace leray {

struct RootFindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All roots of a univariate polynomial with ascending coefficients.
/// Durand-Kerner iteration with deterministic initialization, Newton polish.
CVec poly_roots(std::span<const cplx> coeffs);

/// Evaluates p and p' at w (ascending coefficients).
void poly_eval_deriv(std::span<const cplx> coeffs, cplx w, cplx& value, cplx& deriv);

/// Taylor coefficients of p around w0 up to and including order `upto`
/// (synthetic recentering; exact in floating point up to roundoff).
CVec poly_taylor(std::span<const cplx> coeffs, cplx w0, int upto);

struct RootCluster {
    cplx center;       // centroid of the clustered roots
    int multiplicity;  // number of roots in the cluster
};

/// Groups roots whose mutual distance is below `radius` into multiplicity
/// clusters (greedy union by proximity, deterministic order).
std::vector<RootCluster> cluster_roots(std::span<const cplx> roots, double radius = 1e-8);

/// Residue at a multiplicity-r cluster of denominator P (ascending coeffs),
/// numer given by its holomorphic Taylor coefficients at the center up to
/// order r-1: Res = sum_{k<r} numer_k q_{r-1-k}, q the series inverse of
/// P(w)/(w - c)^r. Returns the residue itself (caller supplies the 2 pi i).
cplx cluster_residue(std::span<const cplx> denom_coeffs, const RootCluster& cluster,
                     std::span<const cplx> numer_taylor);

/// Holomorphic Wirtinger derivatives of a smooth black-box function by
/// central differences: out[k] = (d/dw)^k f at w, k = 0..upto. Used when a
/// residue numerator is only available as an evaluator. upto <= 2.
CVec wirtinger_derivs(const std::function<cplx(cplx)>& f, cplx w, int upto, double step = 1e-5);

}  // namespace leray

#endif
