#ifndef LERAY_RESIDUES_HPP
#define LERAY_RESIDUES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "leray/forms.hpp"
#include "leray/polynomial.hpp"
#include "leray/quadrature.hpp"
#include "leray/roots.hpp"

namespace leray {

struct TubeOverlap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FiberFinitenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tube { |P_k| = eps_k for k in active, |P_k| <= eps_k otherwise }.
struct TubeSpec {
    std::vector<MultiPoly> polys;
    std::vector<double> eps;
    std::vector<int> active;  // indices into polys; the full tube lists all
};

/// Polar chart of an annulus (or disc when rmin == 0) in one transverse
/// complex coordinate.
struct PolarChart {
    cplx center{0.0};
    double rmin = 0.0;
    double rmax = 1.0;
    int nr = 16;
    int ntheta = 32;
};

enum class OverlapPolicy {
    Throw,  // tube_integral contract: fiber curves must separate
    Drop,   // residue_limit regularization: drop the fiber base point
};

/// Tube chart for one general polynomial (m = 1): the fiber curve
/// { |P(w, trans)| = eps } is tracked by phase continuation P = eps e^{is},
/// giving exact tangents dw/ds = i P / P_w and implicit transverse responses
/// dw/dt = -P_t / P_w. Components are discovered from clustered fiber roots;
/// closure and winding checks guard against overlapping curves.
class TubeChartM1 final : public Chart {
  public:
    TubeChartM1(const MultiPoly& poly, int fiber_axis, std::vector<PolarChart> transverse,
                int contour_points, double eps, OverlapPolicy policy);

    std::size_t count() const override { return nodes_w_.size(); }
    void node(std::size_t i, ChartNode& out) const override;
    int ambient_dim() const override { return poly_.nvars(); }

    std::size_t dropped_fiber_points() const { return dropped_; }

  private:
    MultiPoly poly_;
    CompiledPoly poly_c_;
    std::vector<CompiledPoly> partials_;
    int fiber_axis_;
    std::vector<PolarChart> transverse_;
    std::vector<int> trans_axes_;
    QuadratureRule trans_rule_;
    int contour_points_;
    double eps_;
    std::size_t dropped_ = 0;

    // Flattened curve nodes: fiber position and owning transverse node.
    CVec nodes_w_;
    std::vector<std::uint32_t> nodes_trans_;
    std::vector<double> node_weight_;

    void trans_position(std::size_t t, CVec& zeta_partial, std::vector<Tangent>& tang) const;
    void build_curves(OverlapPolicy policy);
};

/// Torus-type chart for coordinate-monomial systems P_k = z_{axis_k}^{r_k}
/// (m = 2 scope; after the scenario's affine change of variables). Active
/// indices carry circles |z|^r = eps, inactive ones polar discs |z|^r <= eps.
class TubeChartMonomial final : public Chart {
  public:
    struct Axis {
        int axis;
        int exponent;
        bool active;
    };
    TubeChartMonomial(int n, std::vector<Axis> axes, std::vector<double> eps,
                      std::vector<PolarChart> transverse, int contour_points);

    std::size_t count() const override { return rule_.count(); }
    void node(std::size_t i, ChartNode& out) const override;
    int ambient_dim() const override { return n_; }

  private:
    int n_;
    std::vector<Axis> axes_;
    std::vector<double> radii_;
    std::vector<int> trans_axes_;
    std::vector<PolarChart> transverse_;
    QuadratureRule rule_;
};

/// Appends simplex coordinates to a base chart: nodes are (base node, mu),
/// the frame gains one mu direction per simplex dimension (ordered last).
class SimplexProductChart final : public Chart {
  public:
    SimplexProductChart(const Chart& base, QuadratureRule simplex);
    SimplexProductChart(std::unique_ptr<Chart> base, QuadratureRule simplex);
    std::size_t count() const override { return base_->count() * simplex_.count(); }
    void node(std::size_t i, ChartNode& out) const override;
    int ambient_dim() const override { return base_->ambient_dim(); }
    int mu_dim() const override { return simplex_.dim; }
    const Chart& base() const { return *base_; }

  private:
    std::unique_ptr<Chart> owned_;
    const Chart* base_;
    QuadratureRule simplex_;
};

/// True when p is exactly z_axis^exponent (unit coefficient).
bool coordinate_monomial(const MultiPoly& p, int& axis, int& exponent);

/// Integral over the tube of integrand / prod_{k in active} P_k at the
/// spec's radii. The integrand is the full-degree form evaluated on the
/// node frame; fiber circles are oriented so that for P = z the result of
/// integrating dz/z is +2 pi i (classical residue orientation).
cplx tube_integral(const TubeSpec& spec, int fiber_axis, std::vector<PolarChart> transverse,
                   int contour_points,
                   const std::function<cplx(const ChartNode&)>& integrand, int workers = 1,
                   OverlapPolicy policy = OverlapPolicy::Throw);

/// Fiberwise residue with multiplicity: sum over clustered roots of the
/// one-variable restriction, 2 pi i sum_c Res_c(numerator / P_hat).
struct FiberResidueProblem {
    CVec fiber_coeffs;                       // ascending, the restricted P_hat
    std::function<cplx(cplx)> numerator;     // smooth in the fiber variable
    std::function<CVec(cplx, int)> numerator_taylor;  // optional holomorphic jets
    double cluster_radius = 1e-8;
};
cplx fiber_residue(const FiberResidueProblem& problem);

struct ResidueLimit {
    cplx limit{0.0};
    double error_estimate = 0.0;
    std::vector<double> t_values;
    std::vector<cplx> tube_values;
    std::vector<cplx> extrapolants;
    std::size_t dropped_fiber_points = 0;
    std::optional<cplx> oracle;     // fiber-residue cross-check when available
    double oracle_disagreement = 0.0;
};

/// Tube integrals along an admissible path, Richardson-extrapolated to
/// t = 0. The chart factory receives the radii eps(t).
ResidueLimit residue_limit(const std::function<std::unique_ptr<Chart>(const std::vector<double>&)>& chart_at,
                           const std::function<cplx(const ChartNode&)>& integrand,
                           const AdmissiblePath& path, std::span<const double> t_grid,
                           int workers = 1, int order_hint = 6);

/// residue_limit specialization for one general polynomial.
ResidueLimit residue_limit_m1(const MultiPoly& poly, int fiber_axis,
                              std::vector<PolarChart> transverse, int contour_points,
                              const std::function<cplx(const ChartNode&)>& integrand,
                              const AdmissiblePath& path, std::span<const double> t_grid,
                              int workers = 1, OverlapPolicy policy = OverlapPolicy::Drop);

/// Partial-tube limit (active strictly inside {1..m}); the vanishing of
/// these limits is the computational content of the zero-contribution lemma.
ResidueLimit partial_tube_limit(int n, std::vector<TubeChartMonomial::Axis> axes,
                                std::vector<PolarChart> transverse, int contour_points,
                                const std::function<cplx(const ChartNode&)>& integrand,
                                const AdmissiblePath& path, std::span<const double> t_grid,
                                int workers = 1);

}  // namespace leray

#endif
