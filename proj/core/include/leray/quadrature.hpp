#ifndef LERAY_QUADRATURE_HPP
#define LERAY_QUADRATURE_HPP

#include <span>
#include <vector>

#include "leray/complexvec.hpp"

namespace leray {

/// Product quadrature rule over a parameter box; nodes stored point-major
/// (dim doubles per node). Weights are plain parameter-measure weights: any
/// geometric Jacobian enters through chart tangent frames, not the weights.
struct QuadratureRule {
    int dim = 1;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
    std::span<const double> point(std::size_t i) const {
        return {nodes.data() + i * dim, (std::size_t)dim};
    }
    double weight_sum() const;
};

/// Gauss-Legendre rule with n points on [a, b]. Nodes by Newton iteration,
/// deterministic to the last bit.
QuadratureRule gauss_legendre(int n, double a, double b);

/// Equispaced periodic rule on [a, b) (spectral accuracy for smooth periodic
/// integrands).
QuadratureRule trapezoid_periodic(int n, double a, double b);

/// Tensor product of rules.
QuadratureRule tensor(const QuadratureRule& a, const QuadratureRule& b);

/// Angle-box rule for the sphere chart of C^n (dim 2n-1): Gauss-Legendre in
/// the n-1 polar angles on [0, pi/2], periodic trapezoid with `res` points in
/// the n azimuthal angles. res >= 4.
QuadratureRule sphere_rule(int n, int res);

/// Rule on the simplex { mu in R+^m : sum mu_k <= 1 }, exact for polynomials
/// up to the given total degree, positive weights summing to 1/m!. Built by
/// the collapsed (Duffy) map from a Gauss-Legendre product, which keeps the
/// requested exactness with positive weights.
QuadratureRule simplex_rule(int m, int degree);

/// Equispaced rule on the angle of the circle |w| = radius; exact for
/// trigonometric polynomials of degree < points/2. points >= 8. Nodes are
/// the angles; the radius is recorded for chart construction.
struct ContourRule {
    double radius;
    QuadratureRule angles;
};
ContourRule contour_rule(double radius, int points);

struct Extrapolation {
    cplx limit;
    double error_estimate;
    std::vector<cplx> diagonal;  // successive extrapolants
};

/// Richardson extrapolation of v(t) -> t = 0 for a decreasing geometric
/// t-grid: polynomial Neville tableau in t, depth capped by order_hint.
Extrapolation richardson(std::span<const double> t, std::span<const cplx> v, int order_hint = 8);

/// Admissible tube-radius path eps_j(t) = t^{beta_j} with hierarchically
/// separated exponents: beta_j > L * beta_{j+1} for the scenario's degree
/// bound L, the desk-scale surrogate of the Coleff-Herrera condition.
struct AdmissiblePath {
    std::vector<double> beta;

    std::vector<double> eps(double t) const;
    bool admissible_for(double L) const;
    /// beta_j = (L+1)^{m-j}, the canonical surrogate path for m factors.
    static AdmissiblePath canonical(int m, double L);
};

/// Default geometric grid t_k = 2^{-k}, k = k_min..k_max.
std::vector<double> geometric_t_grid(int k_min = 3, int k_max = 10);

}  // namespace leray

#endif
