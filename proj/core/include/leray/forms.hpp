#ifndef LERAY_FORMS_HPP
#define LERAY_FORMS_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "leray/complexvec.hpp"
#include "leray/geometry.hpp"
#include "leray/quadrature.hpp"

namespace leray {

/// Pushforward of one chart parameter direction: a complex position part and
/// (on product charts with a simplex factor) a mu part.
struct Tangent {
    CVec dz;                  // d zeta / d param, length n
    std::vector<double> dmu;  // d mu / d param, length m (empty when no simplex factor)
};

/// One quadrature node of a chart: position, simplex coordinates, tangent
/// frame in parameter order, and the parameter-measure weight.
struct ChartNode {
    CVec zeta;
    std::vector<double> mu;
    std::vector<Tangent> frame;
    double weight = 0.0;
};

/// A chart is an indexed family of quadrature nodes; node(i) is a pure
/// function of i, so integration parallelizes deterministically.
class Chart {
  public:
    virtual ~Chart() = default;
    virtual std::size_t count() const = 0;
    virtual void node(std::size_t i, ChartNode& out) const = 0;
    virtual int ambient_dim() const = 0;  // complex dimension n
    virtual int mu_dim() const { return 0; }
    int frame_size() const { return frame_size_; }

  protected:
    int frame_size_ = 0;
};

/// Level hypersurface bG_{-nu} with the sphere-chart parameterization.
class LevelChart final : public Chart {
  public:
    LevelChart(ConvexBody body, double nu, int res);
    std::size_t count() const override { return rule_.count(); }
    void node(std::size_t i, ChartNode& out) const override;
    int ambient_dim() const override { return body_.dim(); }

  private:
    ConvexBody body_;
    double nu_;
    QuadratureRule rule_;
};

/// Value and derivatives of a scalar field at a chart node: Wirtinger
/// components plus explicit mu-derivatives.
struct FieldJet {
    cplx value{0.0};
    CVec dz;       // d/d zeta_j
    CVec dzbar;    // d/d conj(zeta_j)
    CVec dmu;      // d/d mu_k

    FieldJet() = default;
    FieldJet(int n, int m) : dz(n, cplx(0.0)), dzbar(n, cplx(0.0)), dmu(m, cplx(0.0)) {}

    /// Contraction of the differential with a tangent vector.
    cplx d(const Tangent& t) const;
};

/// Scalar field on a chart: evaluator producing a FieldJet. The gradient
/// must match finite differences of the value (tested per module contract).
struct ScalarField {
    std::function<FieldJet(const ChartNode&)> jet;
};

ScalarField constant_field(cplx c);

/// Alternating multilinear form evaluator on tangent frames.
struct FormValue {
    int degree = 0;
    std::function<cplx(const ChartNode&, std::span<const Tangent>)> eval;
};

/// omega'_0(theta) = sum_j (-1)^{j-1} theta_j wedge_{i != j} d theta_i,
/// an (n-1)-form realized as one bordered determinant per evaluation.
FormValue omega0_prime(std::vector<ScalarField> theta);

/// The Martineau form omega'(eta) := omega'_0(eta') for a body level chart.
FormValue omega_prime_eta(const ConvexBody& body);

/// Bordered-determinant kernels. Rows are the differentials contracted with
/// the frame; the first column carries the theta values. Row order below is
/// [d theta_1..d theta_n, (d phi), d zeta_1..d zeta_n], i.e. the form
/// omega'_0(theta) ^ (d phi) ^ d zeta evaluated on the frame.
cplx leray_det(std::span<const FieldJet> theta, std::span<const Tangent> frame);
cplx leray_det_cutoff(std::span<const FieldJet> theta, std::span<const double> dphi_real,
                      std::span<const Tangent> frame);

/// Integral over the chart of prefactor(node) * form(node, full frame).
/// Deterministic for any worker count.
cplx pullback_integrate(const Chart& chart, const FormValue& form,
                        const std::function<cplx(const ChartNode&)>& prefactor, int workers = 1);

/// Batched variant: fn fills `width` integrand values per node.
std::vector<cplx> integrate_batch(const Chart& chart, std::size_t width, int workers,
                                  const std::function<void(const ChartNode&, cplx*)>& fn);

}  // namespace leray

#endif
