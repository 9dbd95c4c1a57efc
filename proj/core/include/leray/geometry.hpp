#ifndef LERAY_GEOMETRY_HPP
#define LERAY_GEOMETRY_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "leray/complexvec.hpp"

namespace leray {

struct DegenerateGradient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Selects the sign in eta_0(z) = sign * sum_j z_j eta_j(z). The default -1
/// gives <eta(z) . (1, z)> = 0 on level sets, the normalization under which
/// the machinery reproduces the classical Cauchy-Fantappie-Leray formula;
/// +1 keeps the literal alternative reading available for auditing.
struct EtaConvention {
    int sign = -1;
};

/// Ball or ellipsoid { rho <= 0 } with rho(z) = sum_j |(z_j - c_j)/r_j|^2 - 1.
/// Smooth, linearly convex, with closed-form gradients and level charts.
struct ConvexBody {
    enum class Kind { Ball, Ellipsoid };
    Kind kind = Kind::Ball;
    CVec center;                // c in C^n
    std::vector<double> radii;  // one positive radius per coordinate

    int dim() const { return (int)center.size(); }
    static ConvexBody ball(int n, double radius = 1.0, CVec center = {});
    static ConvexBody ellipsoid(CVec center, std::vector<double> radii);
};

double rho(const ConvexBody& body, std::span<const cplx> z);

/// Holomorphic gradient components eta_j(z) = d rho / d z_j = conj(z_j-c_j)/r_j^2.
CVec grad_rho(const ConvexBody& body, std::span<const cplx> z);

/// eta(z) = (eta_0, eta') of length n+1, with eta' = grad_rho and
/// eta_0 = sign * <z . eta'>. Throws DegenerateGradient below 1e-12 norm.
CVec eta(const ConvexBody& body, EtaConvention conv, std::span<const cplx> z);

/// The dual point (+<eta'(z) . z>, -eta'(z)) at which boundary data enters
/// the tube-limit formulas; projectively the same hyperplane as eta with
/// sign -1, scaled by -1.
CVec eta_reflected(const ConvexBody& body, std::span<const cplx> z);

struct DualMembership {
    bool member;
    double margin;  // min over boundary samples of |xi_0 + xi' . u|
};

/// Probabilistic dual-domain membership: the hyperplane of xi misses G iff
/// the pairing stays away from zero on bG. Samples are quasi-uniform
/// (deterministic chart grid), samples >= 100.
DualMembership in_dual(const ConvexBody& body, std::span<const cplx> xi, int samples = 400,
                       double dual_tol = 1e-6);

/// Fixed smooth monotone transition: psi(s) = 1 for s <= 0, 0 for s >= 1,
/// in between the standard exp(-1/s)-based bump ratio.
double smooth_step(double s);
double smooth_step_deriv(double s);

/// phi_delta(z) = psi(rho(z)/delta): identically 1 on G, 0 outside the
/// delta-shell. d phi is supported in { 0 < rho < delta }.
double cutoff(const ConvexBody& body, double delta, std::span<const cplx> z);

/// Exterior derivative coefficients of phi_delta in the real coordinates
/// (x_1, y_1, ..., x_n, y_n).
std::vector<double> dcutoff(const ConvexBody& body, double delta, std::span<const cplx> z);

/// Scale factor of the level set bG_{-nu} relative to the unit sphere chart:
/// level point = center + radii * sqrt(1-nu) * S(angles). nu must be < 1.
double level_scale(double nu);

/// Position and chart tangents of the level set bG_{-nu} at the given
/// angle parameters (see sphere_angles in quadrature.hpp for the layout).
/// tangents[k][j] = d zeta_j / d angle_k.
void level_point(const ConvexBody& body, double nu, std::span<const double> angles,
                 CVec& zeta, std::vector<CVec>& tangents);

/// Number of angle parameters of the level chart in complex dimension n.
int level_chart_dim(int n);

}  // namespace leray

#endif
