#include "leray/transforms.hpp"

#include <cmath>
#include <fstream>

namespace leray {

namespace {

cplx two_pi_i_pow(int n) {
    cplx v = 1.0;
    for (int k = 0; k < n; ++k) v *= kTwoPiI;
    return v;
}

double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

// ---------------------------------------------------------------------------
// Level-set (Martineau-type) kernels: scalar(zeta) * omega'_0(eta') ^ dzeta.

struct EtaJets {
    std::vector<FieldJet> jets;
    CVec eta_prime;
};

void eta_prime_jets(const ConvexBody& body, const ChartNode& node, EtaJets& out) {
    const int n = body.dim();
    out.jets.assign(n, FieldJet(n, 0));
    out.eta_prime.resize(n);
    for (int j = 0; j < n; ++j) {
        double rj2 = body.radii[j] * body.radii[j];
        cplx v = std::conj(node.zeta[j] - body.center[j]) / rj2;
        out.eta_prime[j] = v;
        out.jets[j].value = v;
        out.jets[j].dzbar[j] = 1.0 / rj2;
    }
}

CVec eta_full(const ConvexBody& body, EtaConvention conv, const CVec& eta_prime,
              std::span<const cplx> zeta) {
    CVec out(body.dim() + 1);
    cplx e0 = 0.0;
    for (int j = 0; j < body.dim(); ++j) e0 += zeta[j] * eta_prime[j];
    out[0] = double(conv.sign) * e0;
    std::copy(eta_prime.begin(), eta_prime.end(), out.begin() + 1);
    return out;
}

std::vector<cplx> level_integral_batch(const ProblemSetup& setup, double nu, std::size_t width,
                                       const std::function<void(const ChartNode&, const EtaJets&,
                                                                cplx, cplx*)>& fn) {
    LevelChart chart(setup.body, nu, setup.sphere_res);
    return integrate_batch(chart, width, setup.workers,
                           [&](const ChartNode& node, cplx* out) {
                               thread_local EtaJets ej;
                               eta_prime_jets(setup.body, node, ej);
                               cplx form = leray_det(ej.jets, node.frame);
                               fn(node, ej, form, out);
                           });
}

}  // namespace

cplx martineau_invert(const ProblemSetup& setup, const RationalSum& g,
                      std::span<const cplx> xi) {
    const int n = setup.n();
    auto dual = in_dual(setup.body, xi);
    if (!dual.member || dual.margin < setup.dual_margin)
        throw DualViolation("martineau_invert: xi outside the dual domain margin");
    for (const auto& e : g.elements())
        if (rho(setup.body, e.base) >= -setup.nu)
            throw PoleOnBoundary("martineau_invert: pole base not inside G_{-nu}");

    RationalSum gder = g.eta0_deriv(n - 1);
    CVec xi_copy(xi.begin(), xi.end());
    auto vals = level_integral_batch(
        setup, setup.nu, 1,
        [&](const ChartNode& node, const EtaJets& ej, cplx form, cplx* out) {
            CVec eta_pt = eta_full(setup.body, setup.conv, ej.eta_prime, node.zeta);
            cplx denom = dual_pairing(xi_copy, node.zeta);
            out[0] = gder.eval(eta_pt, setup.pole_tol) * form / denom;
        });
    return -vals[0] / two_pi_i_pow(n);
}

CVec fantappie_indicatrice(const ProblemSetup& setup, const RationalSum& f,
                           std::span<const cplx> xi) {
    const int n = setup.n();
    auto dual = in_dual(setup.body, xi);
    if (!dual.member || dual.margin < setup.dual_margin)
        throw DualViolation("fantappie_indicatrice: xi outside the dual domain margin");
    for (const auto& e : f.elements())
        if (rho(setup.body, e.base) >= -setup.nu)
            throw PoleOnBoundary("fantappie_indicatrice: pole base not inside G_{-nu}");

    RationalSum fder = f.eta0_deriv(n);
    CVec xi_copy(xi.begin(), xi.end());
    auto vals = level_integral_batch(
        setup, setup.nu, n + 1,
        [&](const ChartNode& node, const EtaJets& ej, cplx form, cplx* out) {
            CVec eta_pt = eta_full(setup.body, setup.conv, ej.eta_prime, node.zeta);
            cplx common = fder.eval(eta_pt, setup.pole_tol) * form /
                          dual_pairing(xi_copy, node.zeta);
            out[0] = common;
            for (int k = 1; k <= n; ++k) out[k] = common * node.zeta[k - 1];
        });
    CVec out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = -vals[k] / two_pi_i_pow(n);
    return out;
}

HoloFn holo_poly(const MultiPoly& p) {
    auto c = std::make_shared<CompiledPoly>(CompiledPoly::from(p));
    return {[c](std::span<const cplx> z) { return c->eval(z); }};
}

HoloFn holo_one() {
    return {[](std::span<const cplx>) { return cplx(1.0); }};
}

// ---------------------------------------------------------------------------
// Tube formulas

namespace {

// Hefer components and their zeta-gradients with the z-block substituted.
struct ThetaPolys {
    // q[k][j]: Q^{(k)}_j(zeta, zsub) as an n-variable polynomial; dq adds
    // the partial with respect to zeta_i.
    std::vector<std::vector<CompiledPoly>> q;
    std::vector<std::vector<std::vector<CompiledPoly>>> dq;
};

ThetaPolys theta_polys(const std::vector<HeferDecomposition>& hefers, std::span<const cplx> zsub) {
    const int m = (int)hefers.size();
    ThetaPolys tp;
    tp.q.resize(m);
    tp.dq.resize(m);
    for (int k = 0; k < m; ++k) {
        const int n = hefers[k].source.nvars();
        tp.q[k].reserve(n);
        tp.dq[k].resize(n);
        for (int j = 0; j < n; ++j) {
            MultiPoly qj = hefers[k].components[j].substitute_block(n, zsub);
            tp.q[k].push_back(CompiledPoly::from(qj));
            for (int i = 0; i < n; ++i)
                tp.dq[k][j].push_back(CompiledPoly::from(qj.partial(i)));
        }
    }
    return tp;
}

enum class EtaPart {
    Divided,  // eta_j / <eta'(zeta).(zeta - z)>   (interpolation kernels)
    Raw,      // eta_j                             (operator-substituted kernels)
};

// theta_j = sum_k mu_k Q^{(k)}_j(zeta, zsub) + (1 - sum mu_k) * eta-part.
void theta_jets(const ConvexBody& body, const ThetaPolys& tp, EtaPart part,
                std::span<const cplx> z, const ChartNode& node,
                std::vector<FieldJet>& jets) {
    const int n = body.dim();
    const int m = (int)tp.q.size();
    jets.assign(n, FieldJet(n, m));

    double mu_rest = 1.0;
    for (double mk : node.mu) mu_rest -= mk;

    thread_local CVec eta_p;
    eta_p.resize(n);
    for (int j = 0; j < n; ++j)
        eta_p[j] = std::conj(node.zeta[j] - body.center[j]) / (body.radii[j] * body.radii[j]);

    cplx p = 0.0;
    if (part == EtaPart::Divided) {
        for (int l = 0; l < n; ++l) p += eta_p[l] * (node.zeta[l] - z[l]);
    }

    for (int j = 0; j < n; ++j) {
        FieldJet& jet = jets[j];
        cplx eta_val;
        if (part == EtaPart::Raw) {
            eta_val = eta_p[j];
            jet.dzbar[j] += mu_rest / (body.radii[j] * body.radii[j]);
        } else {
            eta_val = eta_p[j] / p;
            // d(eta_j / p): eta_j depends on conj(zeta_j) only; p has both parts.
            for (int i = 0; i < n; ++i) {
                cplx dp_dz = eta_p[i];
                cplx dp_dzb = (node.zeta[i] - z[i]) / (body.radii[i] * body.radii[i]);
                jet.dz[i] += mu_rest * (-eta_p[j] / (p * p)) * dp_dz;
                jet.dzbar[i] += mu_rest * (-eta_p[j] / (p * p)) * dp_dzb;
            }
            jet.dzbar[j] += mu_rest / (body.radii[j] * body.radii[j] * p);
        }
        cplx val = mu_rest * eta_val;
        for (int k = 0; k < m; ++k) {
            cplx qv = tp.q[k][j].eval(node.zeta);
            val += node.mu[k] * qv;
            jet.dmu[k] += qv - eta_val;
            for (int i = 0; i < n; ++i) jet.dz[i] += node.mu[k] * tp.dq[k][j][i].eval(node.zeta);
        }
        jet.value = val;
    }
}

struct TubeKernel {
    const ProblemSetup* setup;
    std::vector<CompiledPoly> polys;     // P_1..P_m
    std::vector<HeferDecomposition> hefers;
    std::vector<TubeChartMonomial::Axis> mono_axes;  // m = 2 engine
    bool monomial_engine = false;

    explicit TubeKernel(const ProblemSetup& s) : setup(&s) {
        const int m = s.m();
        if (m < 1) throw EngineScope("tube formulas need m >= 1");
        for (const auto& p : s.polys) {
            polys.push_back(CompiledPoly::from(p));
            hefers.push_back(hefer(p));
        }
        if (m > 1) {
            monomial_engine = true;
            mono_axes.resize(m);
            for (int k = 0; k < m; ++k) {
                if (!coordinate_monomial(s.polys[k], mono_axes[k].axis, mono_axes[k].exponent))
                    throw EngineScope(
                        "m >= 2 tube engine requires coordinate-monomial polynomials "
                        "(apply the scenario's affine change of variables first)");
                mono_axes[k].active = true;
            }
        }
        if ((int)s.transverse.size() != s.n() - m)
            throw EngineScope("tube engine: need one transverse polar chart per free axis");
    }

    std::unique_ptr<Chart> chart_at(const std::vector<double>& eps) const {
        const ProblemSetup& s = *setup;
        std::unique_ptr<Chart> base;
        if (!monomial_engine) {
            base = std::make_unique<TubeChartM1>(s.polys[0], s.fiber_axis, s.transverse,
                                                 s.contour_points, eps[0], OverlapPolicy::Drop);
        } else {
            base = std::make_unique<TubeChartMonomial>(s.n(), mono_axes, eps, s.transverse,
                                                       s.contour_points);
        }
        return std::make_unique<SimplexProductChart>(std::move(base),
                                                     simplex_rule(s.m(), s.simplex_degree));
    }

    cplx inv_prod_p(std::span<const cplx> zeta) const {
        cplx d = 1.0;
        for (const auto& p : polys) d *= p.eval(zeta);
        return 1.0 / d;
    }

    TubeEval run(const std::function<cplx(const ChartNode&)>& integrand) const {
        const ProblemSetup& s = *setup;
        AdmissiblePath path = s.path;
        if (path.beta.empty()) {
            double L = 1.0;
            for (const auto& p : s.polys) L = std::max(L, double(p.degree()));
            path = AdmissiblePath::canonical(s.m(), L);
        }
        ResidueLimit rl = residue_limit([this](const std::vector<double>& e) { return chart_at(e); },
                                        integrand, path, s.t_grid, s.workers, s.richardson_order);
        TubeEval out;
        out.value = rl.limit;
        out.error_estimate = rl.error_estimate;
        out.t_values = std::move(rl.t_values);
        out.per_t = std::move(rl.tube_values);
        out.extrapolants = std::move(rl.extrapolants);
        out.dropped_fiber_points = rl.dropped_fiber_points;
        return out;
    }
};

// Written-order conversion (omega'_0 ^ dphi ^ dzeta rows vs the papers'
// dphi ^ omega'_0 ^ dzeta) combined with the collar orientation of the
// cutoff direction; both are global signs fixed by the reproduction tests.
double tube_orientation(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

cplx interp_constant(int n) { return tube_orientation(n) * factorial(n - 1) / two_pi_i_pow(n); }

cplx bvp_constant(int n, int m) {
    int r = n - m - 1;
    double sign = (r % 2 == 0) ? 1.0 : -1.0;
    return interp_constant(n) * sign / factorial(r);
}

}  // namespace

TubeEval interpolate(const ProblemSetup& setup, const HoloFn& h, std::span<const cplx> z) {
    const int n = setup.n();
    if (setup.m() == 0) {
        // Classical Cauchy-Fantappie-Leray reproduction over bG.
        CVec z_copy(z.begin(), z.end());
        if (rho(setup.body, z_copy) >= 0.0)
            throw std::invalid_argument("interpolate: z must lie strictly inside G");
        LevelChart chart(setup.body, 0.0, setup.sphere_res);
        auto vals = integrate_batch(
            chart, 1, setup.workers, [&](const ChartNode& node, cplx* out) {
                thread_local std::vector<FieldJet> jets;
                jets.assign(n, FieldJet(n, 0));
                cplx p = 0.0;
                thread_local CVec eta_p;
                eta_p.resize(n);
                for (int j = 0; j < n; ++j) {
                    eta_p[j] = std::conj(node.zeta[j] - setup.body.center[j]) /
                               (setup.body.radii[j] * setup.body.radii[j]);
                    p += eta_p[j] * (node.zeta[j] - z_copy[j]);
                }
                for (int j = 0; j < n; ++j) {
                    jets[j].value = eta_p[j] / p;
                    for (int i = 0; i < n; ++i) {
                        double ri2 = setup.body.radii[i] * setup.body.radii[i];
                        jets[j].dz[i] = -eta_p[j] / (p * p) * eta_p[i];
                        jets[j].dzbar[i] = -eta_p[j] / (p * p) * (node.zeta[i] - z_copy[i]) / ri2;
                    }
                    jets[j].dzbar[j] += 1.0 / (setup.body.radii[j] * setup.body.radii[j] * p);
                }
                out[0] = h.value(node.zeta) * leray_det(jets, node.frame);
            });
        return {vals[0] * factorial(n - 1) / two_pi_i_pow(n), 0.0, {}, {}, {}, 0};
    }

    CVec z_copy(z.begin(), z.end());
    if (rho(setup.body, z_copy) >= 0.0)
        throw std::invalid_argument("interpolate: z must lie strictly inside G");
    TubeKernel kernel(setup);
    ThetaPolys tp = theta_polys(kernel.hefers, z_copy);
    auto integrand = [&](const ChartNode& node) -> cplx {
        thread_local std::vector<FieldJet> jets;
        theta_jets(setup.body, tp, EtaPart::Divided, z_copy, node, jets);
        auto dphi = dcutoff(setup.body, setup.delta, node.zeta);
        cplx form = leray_det_cutoff(jets, dphi, node.frame);
        return h.value(node.zeta) * kernel.inv_prod_p(node.zeta) * form;
    };
    TubeEval out = kernel.run(integrand);
    cplx c = interp_constant(n);
    out.value *= c;
    out.error_estimate *= std::abs(c);
    for (auto& v : out.per_t) v *= c;
    for (auto& v : out.extrapolants) v *= c;
    return out;
}

TubeEval separating_h(const ProblemSetup& setup, std::span<const cplx> xi,
                      std::span<const cplx> u) {
    CVec u_copy(u.begin(), u.end());
    CVec xi_copy(xi.begin(), xi.end());
    if (rho(setup.body, u_copy) >= 0.0)
        throw std::invalid_argument("separating_h: u must lie strictly inside G");
    auto dual = in_dual(setup.body, xi);
    if (!dual.member || dual.margin < setup.dual_margin)
        throw DualViolation("separating_h: xi outside the dual domain margin");
    TubeKernel kernel(setup);
    ThetaPolys tp = theta_polys(kernel.hefers, u_copy);
    auto integrand = [&](const ChartNode& node) -> cplx {
        thread_local std::vector<FieldJet> jets;
        theta_jets(setup.body, tp, EtaPart::Divided, u_copy, node, jets);
        auto dphi = dcutoff(setup.body, setup.delta, node.zeta);
        cplx form = leray_det_cutoff(jets, dphi, node.frame);
        return kernel.inv_prod_p(node.zeta) * form / dual_pairing(xi_copy, node.zeta);
    };
    TubeEval out = kernel.run(integrand);
    cplx c = interp_constant(setup.n());
    out.value *= c;
    out.error_estimate *= std::abs(c);
    for (auto& v : out.per_t) v *= c;
    for (auto& v : out.extrapolants) v *= c;
    return out;
}

void validate_bvp_data(const ProblemSetup& setup, const RationalSum& g,
                       std::span<const cplx> xi) {
    auto dual = in_dual(setup.body, xi);
    if (!dual.member || dual.margin < setup.dual_margin)
        throw DualViolation("bvp data: xi outside the dual domain margin");
    for (const auto& p : setup.polys) {
        MultiPoly pt = p.homogenize(p.degree());
        RationalSum res = g.apply_system(pt);
        if (!res.empty())
            throw std::invalid_argument(
                "bvp data: g does not solve the system (pole base off the variety)");
    }
    for (const auto& e : g.elements())
        if (rho(setup.body, e.base) >= 0.0)
            throw PoleOnBoundary("bvp data: pole base not inside G");
}

TubeEval bvp_invert(const ProblemSetup& setup, const RationalSum& g, std::span<const cplx> xi) {
    validate_bvp_data(setup, g, xi);
    const int n = setup.n(), m = setup.m();
    const int r = n - m - 1;
    if (r < 0) throw EngineScope("bvp_invert: requires m <= n - 1");
    TubeKernel kernel(setup);
    CVec xi_copy(xi.begin(), xi.end());

    struct ElementData {
        ThetaPolys tp;
        RationalSum derived;
    };
    std::vector<ElementData> elems;
    for (const auto& e : g.elements()) {
        CVec zsub(e.base.size());
        for (std::size_t j = 0; j < e.base.size(); ++j) zsub[j] = -e.base[j];
        RationalSum single(n, {e});
        elems.push_back({theta_polys(kernel.hefers, zsub), single.eta0_deriv(r)});
    }

    auto integrand = [&](const ChartNode& node) -> cplx {
        thread_local std::vector<FieldJet> jets;
        auto dphi = dcutoff(setup.body, setup.delta, node.zeta);
        CVec eta_chk = eta_reflected(setup.body, node.zeta);
        cplx common = kernel.inv_prod_p(node.zeta) / dual_pairing(xi_copy, node.zeta);
        cplx total = 0.0;
        for (const auto& el : elems) {
            theta_jets(setup.body, el.tp, EtaPart::Raw, {}, node, jets);
            cplx form = leray_det_cutoff(jets, dphi, node.frame);
            total += el.derived.eval(eta_chk, setup.pole_tol) * form;
        }
        return common * total;
    };
    TubeEval out = kernel.run(integrand);
    cplx c = bvp_constant(n, m);
    out.value *= c;
    out.error_estimate *= std::abs(c);
    for (auto& v : out.per_t) v *= c;
    for (auto& v : out.extrapolants) v *= c;
    return out;
}

TubeEval residual_pair(const ProblemSetup& setup, const RationalSum& f0, const HoloFn& h) {
    const int n = setup.n(), m = setup.m();
    const int r = n - m - 1;
    if (r < 0) throw EngineScope("residual_pair: requires m <= n - 1");
    for (const auto& p : setup.polys) {
        MultiPoly pt = p.homogenize(p.degree());
        if (!f0.apply_system(pt).empty())
            throw std::invalid_argument("residual_pair: f0 does not solve the system");
    }
    TubeKernel kernel(setup);

    struct ElementData {
        ThetaPolys tp;
        RationalSum derived;
    };
    std::vector<ElementData> elems;
    for (const auto& e : f0.elements()) {
        CVec zsub(e.base.size());
        for (std::size_t j = 0; j < e.base.size(); ++j) zsub[j] = -e.base[j];
        RationalSum single(n, {e});
        elems.push_back({theta_polys(kernel.hefers, zsub), single.eta0_deriv(r)});
    }

    auto integrand = [&](const ChartNode& node) -> cplx {
        thread_local std::vector<FieldJet> jets;
        auto dphi = dcutoff(setup.body, setup.delta, node.zeta);
        CVec eta_chk = eta_reflected(setup.body, node.zeta);
        cplx common = kernel.inv_prod_p(node.zeta) * h.value(node.zeta);
        cplx total = 0.0;
        for (const auto& el : elems) {
            theta_jets(setup.body, el.tp, EtaPart::Raw, {}, node, jets);
            cplx form = leray_det_cutoff(jets, dphi, node.frame);
            total += el.derived.eval(eta_chk, setup.pole_tol) * form;
        }
        return common * total;
    };
    TubeEval out = kernel.run(integrand);
    cplx c = bvp_constant(n, m) * kTwoPiI;
    out.value *= c;
    out.error_estimate *= std::abs(c);
    for (auto& v : out.per_t) v *= c;
    for (auto& v : out.extrapolants) v *= c;
    return out;
}

std::vector<TubeEval> radon_coeffs(const ProblemSetup& setup, const RationalSum& f0,
                                   std::span<const cplx> xi) {
    const int n = setup.n();
    CVec xi_copy(xi.begin(), xi.end());
    std::vector<TubeEval> out;
    for (int j = 0; j <= n; ++j) {
        HoloFn hj{[&xi_copy, j](std::span<const cplx> w) {
            cplx num = (j == 0) ? cplx(1.0) : w[j - 1];
            return num / dual_pairing(xi_copy, w);
        }};
        TubeEval e = residual_pair(setup, f0, hj);
        cplx c = 1.0 / kTwoPiI;
        e.value *= c;
        e.error_estimate *= std::abs(c);
        for (auto& v : e.per_t) v *= c;
        for (auto& v : e.extrapolants) v *= c;
        out.push_back(std::move(e));
    }
    return out;
}

void dump_kernel_csv(const ProblemSetup& setup, const RationalSum& g,
                     std::span<const cplx> xi, const std::string& out_path) {
    // Martineau kernel values along a coarse level chart: one row per node.
    const int n = setup.n();
    RationalSum gder = g.eta0_deriv(n - 1);
    LevelChart chart(setup.body, setup.nu, 16);
    std::ofstream os(out_path);
    os << "node";
    for (int j = 0; j < n; ++j) os << ",re_z" << (j + 1) << ",im_z" << (j + 1);
    os << ",re_kernel,im_kernel\n";
    ChartNode node;
    EtaJets ej;
    CVec xi_copy(xi.begin(), xi.end());
    for (std::size_t i = 0; i < chart.count(); ++i) {
        chart.node(i, node);
        eta_prime_jets(setup.body, node, ej);
        cplx form = leray_det(ej.jets, node.frame);
        CVec eta_pt = eta_full(setup.body, setup.conv, ej.eta_prime, node.zeta);
        cplx v = gder.eval(eta_pt, setup.pole_tol) * form / dual_pairing(xi_copy, node.zeta);
        os << i;
        for (int j = 0; j < n; ++j)
            os << "," << node.zeta[j].real() << "," << node.zeta[j].imag();
        os << "," << v.real() << "," << v.imag() << "\n";
    }
}

}  // namespace leray
