#include "leray/residues.hpp"

#include <algorithm>
#include <cmath>

#include "leray/parallel.hpp"

namespace leray {

namespace {

QuadratureRule polar_rule(const PolarChart& pc) {
    return tensor(gauss_legendre(pc.nr, pc.rmin, pc.rmax),
                  trapezoid_periodic(pc.ntheta, 0.0, 2.0 * kPi));
}

QuadratureRule product_rule(const std::vector<PolarChart>& charts) {
    QuadratureRule r;
    r.dim = 0;
    r.nodes.clear();
    r.weights = {1.0};
    for (const auto& pc : charts) r = r.dim == 0 ? polar_rule(pc) : tensor(r, polar_rule(pc));
    if (charts.empty()) {
        r.dim = 0;
        r.nodes.clear();
        r.weights = {1.0};
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// TubeChartM1

TubeChartM1::TubeChartM1(const MultiPoly& poly, int fiber_axis, std::vector<PolarChart> transverse,
                         int contour_points, double eps, OverlapPolicy policy)
    : poly_(poly),
      fiber_axis_(fiber_axis),
      transverse_(std::move(transverse)),
      contour_points_(contour_points),
      eps_(eps) {
    const int n = poly_.nvars();
    if (fiber_axis_ < 0 || fiber_axis_ >= n)
        throw std::invalid_argument("TubeChartM1: fiber axis out of range");
    if ((int)transverse_.size() != n - 1)
        throw std::invalid_argument("TubeChartM1: need one polar chart per transverse axis");
    if (contour_points_ < 8) throw std::invalid_argument("TubeChartM1: contour points >= 8");
    if (eps_ <= 0) throw std::invalid_argument("TubeChartM1: eps must be positive");
    poly_c_ = CompiledPoly::from(poly_);
    for (int j = 0; j < n; ++j) {
        partials_.push_back(CompiledPoly::from(poly_.partial(j)));
        if (j != fiber_axis_) trans_axes_.push_back(j);
    }
    trans_rule_ = product_rule(transverse_);
    frame_size_ = 1 + 2 * (n - 1);
    build_curves(policy);
}

void TubeChartM1::trans_position(std::size_t t, CVec& zeta_partial,
                                 std::vector<Tangent>& tang) const {
    const int n = poly_.nvars();
    zeta_partial.assign(n, cplx(0.0));
    tang.clear();
    if (transverse_.empty()) return;
    auto pt = trans_rule_.point(t);
    for (std::size_t k = 0; k < trans_axes_.size(); ++k) {
        double r = pt[2 * k], th = pt[2 * k + 1];
        cplx phase = std::polar(1.0, th);
        int axis = trans_axes_[k];
        zeta_partial[axis] = transverse_[k].center + r * phase;
        Tangent tr, tt;
        tr.dz.assign(n, cplx(0.0));
        tt.dz.assign(n, cplx(0.0));
        tr.dz[axis] = phase;
        tt.dz[axis] = kI * r * phase;
        tang.push_back(std::move(tr));
        tang.push_back(std::move(tt));
    }
}

void TubeChartM1::build_curves(OverlapPolicy policy) {
    const int N = contour_points_;
    const std::size_t tcount = transverse_.empty() ? 1 : trans_rule_.count();
    CVec zeta;
    std::vector<Tangent> tang;

    for (std::size_t t = 0; t < tcount; ++t) {
        trans_position(t, zeta, tang);
        CVec coeffs = poly_.restrict_axis(fiber_axis_, zeta);
        bool all_zero = true;
        for (const cplx& c : coeffs)
            if (c != 0.0) { all_zero = false; break; }
        if (all_zero)
            throw FiberFinitenessError("tube chart: fiber polynomial vanishes identically");
        if ((int)coeffs.size() <= 1) continue;  // no roots in this fiber

        const std::size_t mark = nodes_w_.size();
        try {
            CVec roots = poly_roots(coeffs);
            double scale = 1.0;
            for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
            auto clusters = cluster_roots(roots, 1e-8 * scale);
            int total_mult = 0;
            for (const auto& c : clusters) total_mult += c.multiplicity;

            // Levels near a critical value of |P| are singular (the curve
            // degenerates through a saddle and tangents blow up): reject.
            if (coeffs.size() > 2) {
                CVec dcoeffs(coeffs.begin() + 1, coeffs.end());
                for (std::size_t k = 0; k < dcoeffs.size(); ++k) dcoeffs[k] *= double(k + 1);
                for (const cplx& c : poly_roots(dcoeffs)) {
                    cplx v, dv;
                    poly_eval_deriv(coeffs, c, v, dv);
                    double ratio = std::abs(v) / eps_;
                    if (ratio > 0.6 && ratio < 1.6)
                        throw TubeOverlap("tube chart: radius near a critical level");
                }
            }

            std::vector<bool> consumed(clusters.size(), false);
            for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
                if (consumed[ci]) continue;
                const auto& cl = clusters[ci];
                CVec tay = poly_taylor(coeffs, cl.center, cl.multiplicity);
                cplx lead = tay[cl.multiplicity];
                if (std::abs(lead) < 1e-250)
                    throw RootFindingError("tube chart: degenerate local leading coefficient");
                double r_est = std::pow(eps_ / std::abs(lead), 1.0 / cl.multiplicity);

                // Start point on the curve at phase 0: Newton on P = eps.
                auto newton_to = [&](cplx w, cplx target) {
                    for (int it = 0; it < 80; ++it) {
                        cplx v, dv;
                        poly_eval_deriv(coeffs, w, v, dv);
                        if (std::abs(dv) < 1e-250)
                            throw RootFindingError("tube chart: P' vanishes on curve");
                        cplx step = (v - target) / dv;
                        w -= step;
                        if (std::abs(step) < 1e-14 * (r_est + std::abs(w - cl.center))) break;
                    }
                    cplx v, dv;
                    poly_eval_deriv(coeffs, w, v, dv);
                    if (std::abs(v - target) > 1e-9 * eps_)
                        throw RootFindingError("tube chart: Newton failed to land on curve");
                    return w;
                };

                cplx w0;
                bool started = false;
                double base_arg = -std::arg(lead) / cl.multiplicity;
                for (int attempt = 0; attempt < 8 && !started; ++attempt) {
                    try {
                        cplx guess = cl.center +
                                     std::polar(r_est, base_arg + attempt * 0.7853981633974483);
                        w0 = newton_to(guess, eps_);
                        started = true;
                    } catch (const RootFindingError&) {
                        if (attempt == 7) throw;
                    }
                }

                // Phase continuation in 2 pi / N steps until the path closes.
                CVec path_w;
                path_w.push_back(w0);
                cplx w = w0;
                int winding = 0;
                bool closed = false;
                const int max_winding = total_mult;
                for (int sweep = 1; sweep <= max_winding && !closed; ++sweep) {
                    for (int k = 1; k <= N; ++k) {
                        double s = 2.0 * kPi * ((sweep - 1) + double(k) / N);
                        cplx target = std::polar(eps_, s);
                        cplx v, dv;
                        poly_eval_deriv(coeffs, w, v, dv);
                        cplx pred = w + (target - v) / dv;  // secant-style predictor
                        w = newton_to(pred, target);
                        if (k < N) path_w.push_back(w);
                    }
                    winding = sweep;
                    if (std::abs(w - w0) < 1e-6 * std::max(r_est, std::abs(w0 - cl.center))) {
                        closed = true;
                    } else if (sweep < max_winding) {
                        path_w.push_back(w);
                    }
                }
                if (!closed)
                    throw TubeOverlap("tube chart: curve failed to close (radius too large)");

                // Mark clusters enclosed by this component as covered.
                int enclosed_mult = 0;
                for (std::size_t cj = 0; cj < clusters.size(); ++cj) {
                    if (consumed[cj]) continue;
                    double wind = 0.0;
                    for (std::size_t k = 0; k < path_w.size(); ++k) {
                        cplx a = path_w[k] - clusters[cj].center;
                        cplx b = path_w[(k + 1) % path_w.size()] - clusters[cj].center;
                        wind += std::arg(b / a);
                    }
                    if (std::abs(wind) > kPi) {  // winding >= 1/2 turn means enclosed
                        consumed[cj] = true;
                        enclosed_mult += clusters[cj].multiplicity;
                    }
                }
                if (enclosed_mult != winding)
                    throw TubeOverlap("tube chart: winding does not match enclosed multiplicity");

                double wnode = (transverse_.empty() ? 1.0 : trans_rule_.weights[t]) *
                               (2.0 * kPi / N);
                for (const cplx& pw : path_w) {
                    nodes_w_.push_back(pw);
                    nodes_trans_.push_back((std::uint32_t)t);
                    node_weight_.push_back(wnode);
                }
            }
        } catch (const std::runtime_error&) {
            if (policy == OverlapPolicy::Throw) throw;
            // Drop this fiber base point; the dropped region shrinks with eps.
            ++dropped_;
            nodes_w_.resize(mark);
            nodes_trans_.resize(mark);
            node_weight_.resize(mark);
        }
    }
}

void TubeChartM1::node(std::size_t i, ChartNode& out) const {
    const int n = poly_.nvars();
    thread_local CVec zeta;
    thread_local std::vector<Tangent> ttang;
    trans_position(nodes_trans_[i], zeta, ttang);
    cplx w = nodes_w_[i];
    zeta[fiber_axis_] = w;

    cplx pval = poly_c_.eval(zeta);
    cplx pw = partials_[fiber_axis_].eval(zeta);
    if (std::abs(pw) < 1e-250)
        throw RootFindingError("tube chart: P' vanished at a stored node");

    out.zeta = zeta;
    out.mu.clear();
    out.weight = node_weight_[i];
    out.frame.assign(frame_size_, Tangent{});
    // Angle direction first: dw/ds = i P / P_w.
    out.frame[0].dz.assign(n, cplx(0.0));
    out.frame[0].dz[fiber_axis_] = kI * pval / pw;
    // Transverse directions carry the implicit fiber response -P_t / P_w.
    for (std::size_t k = 0; k < trans_axes_.size(); ++k) {
        cplx pt = partials_[trans_axes_[k]].eval(zeta);
        cplx resp = -pt / pw;
        for (int which = 0; which < 2; ++which) {
            Tangent& dst = out.frame[1 + 2 * k + which];
            const Tangent& src = ttang[2 * k + which];
            dst.dz = src.dz;
            dst.dz[fiber_axis_] = resp * src.dz[trans_axes_[k]];
            dst.dmu.clear();
        }
    }
}

// ---------------------------------------------------------------------------
// TubeChartMonomial

TubeChartMonomial::TubeChartMonomial(int n, std::vector<Axis> axes, std::vector<double> eps,
                                     std::vector<PolarChart> transverse, int contour_points)
    : n_(n), axes_(std::move(axes)), transverse_(std::move(transverse)) {
    if (axes_.size() != eps.size()) throw std::invalid_argument("monomial chart: eps count");
    std::vector<bool> used(n_, false);
    radii_.resize(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        const Axis& a = axes_[k];
        if (a.axis < 0 || a.axis >= n_ || a.exponent < 1 || used[a.axis])
            throw std::invalid_argument("monomial chart: bad axis spec");
        used[a.axis] = true;
        radii_[k] = std::pow(eps[k], 1.0 / a.exponent);
    }
    for (int j = 0; j < n_; ++j)
        if (!used[j]) trans_axes_.push_back(j);
    if (trans_axes_.size() != transverse_.size())
        throw std::invalid_argument("monomial chart: need one polar chart per transverse axis");

    QuadratureRule r;
    r.dim = 0;
    r.weights = {1.0};
    auto extend = [&](const QuadratureRule& next) { r = r.dim == 0 ? next : tensor(r, next); };
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (axes_[k].active) extend(trapezoid_periodic(contour_points, 0.0, 2.0 * kPi));
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (!axes_[k].active) {
            PolarChart disc{cplx(0.0), 0.0, radii_[k], std::max(4, contour_points / 4),
                            std::max(8, contour_points / 2)};
            extend(polar_rule(disc));
        }
    for (const auto& pc : transverse_) extend(polar_rule(pc));
    rule_ = std::move(r);
    int active_count = 0;
    for (const auto& a : axes_)
        if (a.active) ++active_count;
    frame_size_ = active_count + 2 * ((int)axes_.size() - active_count) +
                  2 * (int)trans_axes_.size();
}

void TubeChartMonomial::node(std::size_t i, ChartNode& out) const {
    auto pt = rule_.point(i);
    out.zeta.assign(n_, cplx(0.0));
    out.mu.clear();
    out.weight = rule_.weights[i];
    out.frame.assign(frame_size_, Tangent{});
    for (auto& t : out.frame) t.dz.assign(n_, cplx(0.0));

    std::size_t p = 0, f = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (axes_[k].active) {
            double th = pt[p++];
            cplx phase = std::polar(1.0, th);
            out.zeta[axes_[k].axis] = radii_[k] * phase;
            out.frame[f++].dz[axes_[k].axis] = kI * radii_[k] * phase;
        }
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (!axes_[k].active) {
            double rr = pt[p], th = pt[p + 1];
            p += 2;
            cplx phase = std::polar(1.0, th);
            out.zeta[axes_[k].axis] = rr * phase;
            out.frame[f].dz[axes_[k].axis] = phase;
            out.frame[f + 1].dz[axes_[k].axis] = kI * rr * phase;
            f += 2;
        }
    for (std::size_t k = 0; k < trans_axes_.size(); ++k) {
        double rr = pt[p], th = pt[p + 1];
        p += 2;
        cplx phase = std::polar(1.0, th);
        out.zeta[trans_axes_[k]] = transverse_[k].center + rr * phase;
        out.frame[f].dz[trans_axes_[k]] = phase;
        out.frame[f + 1].dz[trans_axes_[k]] = kI * rr * phase;
        f += 2;
    }
}

// ---------------------------------------------------------------------------
// SimplexProductChart

SimplexProductChart::SimplexProductChart(const Chart& base, QuadratureRule simplex)
    : base_(&base), simplex_(std::move(simplex)) {
    frame_size_ = base.frame_size() + simplex_.dim;
}

SimplexProductChart::SimplexProductChart(std::unique_ptr<Chart> base, QuadratureRule simplex)
    : owned_(std::move(base)), base_(owned_.get()), simplex_(std::move(simplex)) {
    frame_size_ = base_->frame_size() + simplex_.dim;
}

void SimplexProductChart::node(std::size_t i, ChartNode& out) const {
    const std::size_t s = i % simplex_.count();
    base_->node(i / simplex_.count(), out);
    auto mu = simplex_.point(s);
    out.mu.assign(mu.begin(), mu.end());
    out.weight *= simplex_.weights[s];
    const int m = simplex_.dim;
    const int n = base_->ambient_dim();
    for (auto& t : out.frame) t.dmu.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
        Tangent t;
        t.dz.assign(n, cplx(0.0));
        t.dmu.assign(m, 0.0);
        t.dmu[k] = 1.0;
        out.frame.push_back(std::move(t));
    }
}

// ---------------------------------------------------------------------------
// Operations

bool coordinate_monomial(const MultiPoly& p, int& axis, int& exponent) {
    if (p.terms().size() != 1) return false;
    const auto& [e, c] = *p.terms().begin();
    if (c != cplx(1.0)) return false;
    axis = -1;
    for (int j = 0; j < p.nvars(); ++j)
        if (e[j] > 0) {
            if (axis >= 0) return false;
            axis = j;
            exponent = e[j];
        }
    return axis >= 0;
}

namespace {

cplx integrate_divided(const Chart& chart, const std::vector<const MultiPoly*>& divisors,
                       const std::function<cplx(const ChartNode&)>& integrand, int workers) {
    std::vector<CompiledPoly> compiled;
    for (const MultiPoly* p : divisors) compiled.push_back(CompiledPoly::from(*p));
    auto vals = integrate_batch(chart, 1, workers, [&](const ChartNode& node, cplx* out) {
        cplx denom = 1.0;
        for (const auto& p : compiled) denom *= p.eval(node.zeta);
        out[0] = integrand(node) / denom;
    });
    return vals[0];
}

}  // namespace

cplx tube_integral(const TubeSpec& spec, int fiber_axis, std::vector<PolarChart> transverse,
                   int contour_points, const std::function<cplx(const ChartNode&)>& integrand,
                   int workers, OverlapPolicy policy) {
    if (spec.polys.empty()) throw std::invalid_argument("tube_integral: empty system");
    const int m = (int)spec.polys.size();
    std::vector<const MultiPoly*> divisors;
    for (int a : spec.active) divisors.push_back(&spec.polys[a]);

    if (m == 1) {
        if (spec.active != std::vector<int>{0})
            throw std::invalid_argument("tube_integral: m=1 tube must activate the polynomial");
        TubeChartM1 chart(spec.polys[0], fiber_axis, std::move(transverse), contour_points,
                          spec.eps[0], policy);
        return integrate_divided(chart, divisors, integrand, workers);
    }

    std::vector<TubeChartMonomial::Axis> axes(m);
    for (int k = 0; k < m; ++k) {
        if (!coordinate_monomial(spec.polys[k], axes[k].axis, axes[k].exponent))
            throw std::invalid_argument(
                "tube_integral: m>=2 engine requires coordinate-monomial polynomials");
        axes[k].active = std::find(spec.active.begin(), spec.active.end(), k) != spec.active.end();
    }
    TubeChartMonomial chart(spec.polys[0].nvars(), std::move(axes), spec.eps,
                            std::move(transverse), contour_points);
    return integrate_divided(chart, divisors, integrand, workers);
}

cplx fiber_residue(const FiberResidueProblem& problem) {
    CVec coeffs = problem.fiber_coeffs;
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    if ((int)coeffs.size() <= 1)
        throw std::invalid_argument("fiber_residue: fiber polynomial must have degree >= 1");
    CVec roots = poly_roots(coeffs);
    double scale = 1.0;
    for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
    auto clusters = cluster_roots(roots, problem.cluster_radius * scale);
    cplx sum = 0.0;
    for (const auto& cl : clusters) {
        CVec taylor;
        if (problem.numerator_taylor) {
            taylor = problem.numerator_taylor(cl.center, cl.multiplicity - 1);
        } else if (cl.multiplicity == 1) {
            taylor = {problem.numerator(cl.center)};
        } else {
            taylor = wirtinger_derivs(problem.numerator, cl.center, cl.multiplicity - 1);
            double fact = 1.0;
            for (int k = 2; k < (int)taylor.size(); ++k) {
                fact *= k;
                taylor[k] /= fact;
            }
        }
        try {
            sum += cluster_residue(coeffs, cl, taylor);
        } catch (const RootFindingError&) {
            throw RootFindingError(
                "fiber_residue: coincident roots unresolvable at cluster tolerance");
        }
    }
    return kTwoPiI * sum;
}

ResidueLimit residue_limit(
    const std::function<std::unique_ptr<Chart>(const std::vector<double>&)>& chart_at,
    const std::function<cplx(const ChartNode&)>& integrand, const AdmissiblePath& path,
    std::span<const double> t_grid, int workers, int order_hint) {
    ResidueLimit out;
    for (double t : t_grid) {
        auto chart = chart_at(path.eps(t));
        auto vals = integrate_batch(*chart, 1, workers, [&](const ChartNode& node, cplx* o) {
            o[0] = integrand(node);
        });
        out.t_values.push_back(t);
        out.tube_values.push_back(vals[0]);
        const Chart* c = chart.get();
        if (auto* sp = dynamic_cast<const SimplexProductChart*>(c)) c = &sp->base();
        if (auto* m1 = dynamic_cast<const TubeChartM1*>(c))
            out.dropped_fiber_points = std::max(out.dropped_fiber_points,
                                                m1->dropped_fiber_points());
    }
    auto ex = richardson(out.t_values, out.tube_values, order_hint);
    out.limit = ex.limit;
    out.error_estimate = ex.error_estimate;
    out.extrapolants = std::move(ex.diagonal);
    return out;
}

ResidueLimit residue_limit_m1(const MultiPoly& poly, int fiber_axis,
                              std::vector<PolarChart> transverse, int contour_points,
                              const std::function<cplx(const ChartNode&)>& integrand,
                              const AdmissiblePath& path, std::span<const double> t_grid,
                              int workers, OverlapPolicy policy) {
    auto chart_at = [&](const std::vector<double>& eps) -> std::unique_ptr<Chart> {
        return std::make_unique<TubeChartM1>(poly, fiber_axis, transverse, contour_points,
                                             eps[0], policy);
    };
    auto divided = [&](const ChartNode& node) { return integrand(node) / poly.eval(node.zeta); };
    return residue_limit(chart_at, divided, path, t_grid, workers);
}

ResidueLimit partial_tube_limit(int n, std::vector<TubeChartMonomial::Axis> axes,
                                std::vector<PolarChart> transverse, int contour_points,
                                const std::function<cplx(const ChartNode&)>& integrand,
                                const AdmissiblePath& path, std::span<const double> t_grid,
                                int workers) {
    std::vector<CompiledPoly> monos;
    for (const auto& a : axes) {
        MultiPoly p(n);
        std::vector<int> e(n, 0);
        e[a.axis] = a.exponent;
        p.add_term(std::move(e), 1.0);
        monos.push_back(CompiledPoly::from(p));
    }
    auto chart_at = [&](const std::vector<double>& eps) -> std::unique_ptr<Chart> {
        return std::make_unique<TubeChartMonomial>(n, axes, eps, transverse, contour_points);
    };
    auto divided = [&](const ChartNode& node) {
        cplx denom = 1.0;
        for (std::size_t k = 0; k < axes.size(); ++k)
            if (axes[k].active) denom *= monos[k].eval(node.zeta);
        return integrand(node) / denom;
    };
    return residue_limit(chart_at, divided, path, t_grid, workers);
}

}  // namespace leray
