#ifndef LERAY_TRANSFORMS_HPP
#define LERAY_TRANSFORMS_HPP

#include <functional>
#include <optional>

#include "leray/forms.hpp"
#include "leray/geometry.hpp"
#include "leray/polynomial.hpp"
#include "leray/quadrature.hpp"
#include "leray/rational.hpp"
#include "leray/residues.hpp"

namespace leray {

struct DualViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleOnBoundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EngineScope : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything one boundary value problem needs: the body, the complete
/// intersection, and the quadrature/limit configuration.
struct ProblemSetup {
    ConvexBody body;
    EtaConvention conv{};
    std::vector<MultiPoly> polys;  // P_1..P_m in affine coordinates; empty for m = 0

    int fiber_axis = 0;                  // m = 1 tube engine projection
    std::vector<PolarChart> transverse;  // one polar chart per transverse axis

    double delta = 0.25;  // cutoff shell thickness
    double nu = 0.1;      // Martineau level set
    int sphere_res = 64;
    int contour_points = 32;
    int simplex_degree = 6;
    AdmissiblePath path;
    std::vector<double> t_grid = geometric_t_grid();
    int richardson_order = 6;
    int workers = 1;
    double pole_tol = 1e-9;
    double dual_margin = 0.2;

    int n() const { return body.dim(); }
    int m() const { return (int)polys.size(); }
};

struct TubeEval {
    cplx value{0.0};
    double error_estimate = 0.0;
    std::vector<double> t_values;
    std::vector<cplx> per_t;
    std::vector<cplx> extrapolants;
    std::size_t dropped_fiber_points = 0;
};

/// Recovery of g of homogeneity -1 from its eta_0-derivatives on bG_{-nu}:
/// g(xi) = -(2 pi i)^{-n} Int_{bG_{-nu}} d^{n-1}g/d eta_0^{n-1} (eta(u))
///         omega'(eta(u)) ^ du / (xi_0 + xi'.u).
cplx martineau_invert(const ProblemSetup& setup, const RationalSum& g,
                      std::span<const cplx> xi);

/// Components k = 0..n of the Fantappie indicatrice of the functional mu^f;
/// equals the gradient df componentwise.
CVec fantappie_indicatrice(const ProblemSetup& setup, const RationalSum& f,
                           std::span<const cplx> xi);

/// Holomorphic evaluator with an exact gradient (polynomials, kernels).
struct HoloFn {
    std::function<cplx(std::span<const cplx>)> value;
};
HoloFn holo_poly(const MultiPoly& p);
HoloFn holo_one();

/// Residual interpolation: the tube-limit integral term that reproduces h(z)
/// modulo the ideal (P_1..P_m); exact reproduction on V. For m = 0 this is
/// the classical Cauchy-Fantappie-Leray reproducing integral over bG.
TubeEval interpolate(const ProblemSetup& setup, const HoloFn& h, std::span<const cplx> z);

/// The separating kernel H_V(xi, u): equals 1/(xi_0 + xi'.u) modulo the
/// ideal at u, via the same tube machinery with the extra dual kernel.
TubeEval separating_h(const ProblemSetup& setup, std::span<const cplx> xi,
                      std::span<const cplx> u);

/// The boundary value inversion: reconstructs g(xi) from tube-localized
/// boundary data of g near V intersect bG.
TubeEval bvp_invert(const ProblemSetup& setup, const RationalSum& g, std::span<const cplx> xi);

/// The residual functional pairing <phi*, h> attached to a solution f0.
TubeEval residual_pair(const ProblemSetup& setup, const RationalSum& f0, const HoloFn& h);

/// Coefficients of the Radon-transform 1-form at xi:
/// f_j = (2 pi i)^{-1} <phi*, w_j / (xi_0 + xi'.w)>, j = 0..n.
std::vector<TubeEval> radon_coeffs(const ProblemSetup& setup, const RationalSum& f0,
                                   std::span<const cplx> xi);

/// Validates the Theorem hypotheses for (g, xi): xi in the dual domain with
/// margin, every pole base on V (apply_system residual) and inside G.
void validate_bvp_data(const ProblemSetup& setup, const RationalSum& g,
                       std::span<const cplx> xi);

/// CSV dump of kernel values along the integration charts (diagnostics).
void dump_kernel_csv(const ProblemSetup& setup, const RationalSum& g,
                     std::span<const cplx> xi, const std::string& out_path);

}  // namespace leray

#endif
