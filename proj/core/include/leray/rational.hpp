#ifndef LERAY_RATIONAL_HPP
#define LERAY_RATIONAL_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "leray/complexvec.hpp"
#include "leray/polynomial.hpp"

namespace leray {

struct PoleProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonIntegrable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One pole element coeff * (xi_0 + xi' . base)^(-order), homogeneous of
/// degree -order on the dual space.
struct PoleElement {
    cplx coeff;
    CVec base;  // affine point a in C^n
    int order;  // k >= 1
};

/// Finite sums of pole elements: the closed function class on which the
/// operators d/dxi_j, the xi_0-antiderivative, D_j and P~(d/dxi) act exactly.
class RationalSum {
  public:
    RationalSum() = default;
    RationalSum(int nvars, std::vector<PoleElement> elements);
    static RationalSum zero(int nvars) { return RationalSum(nvars, {}); }
    static RationalSum single(cplx coeff, CVec base, int order);

    int nvars() const { return nvars_; }
    const std::vector<PoleElement>& elements() const { return elements_; }
    bool empty() const { return elements_.empty(); }

    RationalSum operator+(const RationalSum& o) const;
    RationalSum operator*(cplx c) const;

    /// Exact evaluation at xi (length n+1). Throws PoleProximity if any
    /// denominator has modulus below pole_tol.
    cplx eval(std::span<const cplx> xi, double pole_tol = 1e-9) const;

    /// d/dxi_j for j in [0, n]: c s^{-k} -> -k c a~_j s^{-k-1}, a~ = (1, a).
    RationalSum d_xi(int j) const;

    /// Unique homogeneous antiderivative in xi_0; requires every order >= 2
    /// (order 1 would leave the class through a logarithm).
    RationalSum antiderivative0() const;

    /// D_j = -(d/dxi_0)^{-1} d/dxi_j. Closed form: multiplication by -a_j
    /// per element.
    RationalSum apply_D(int j) const;

    /// R(D) for a polynomial R in n variables: per element multiply by R(-a).
    RationalSum apply_poly_D(const MultiPoly& r) const;

    /// P~(d/dxi) for homogeneous P~ in n+1 variables, degree d:
    /// c s^{-k} -> (-1)^d k(k+1)...(k+d-1) P~(1,a) c s^{-k-d}.
    /// Elements with |P~(1,a)| < on_variety_tol are dropped, so the result is
    /// the zero sum exactly when every base lies on the variety.
    RationalSum apply_system(const MultiPoly& ptilde, double on_variety_tol = 1e-12) const;

    /// r-fold d/dxi_0: c s^{-k} -> (-1)^r k(k+1)...(k+r-1) c s^{-k-r}.
    RationalSum eta0_deriv(int r) const;

  private:
    int nvars_ = 0;
    std::vector<PoleElement> elements_;
    void canonicalize();
};

}  // namespace leray

#endif
