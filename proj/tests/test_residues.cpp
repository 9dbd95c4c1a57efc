#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leray/geometry.hpp"
#include "leray/residues.hpp"

using namespace leray;

namespace {

// f(zeta) dz_fiber as a 1-form on an n = 1 tube chart.
std::function<cplx(const ChartNode&)> one_form(std::function<cplx(cplx)> f) {
    return [f = std::move(f)](const ChartNode& node) {
        return f(node.zeta[0]) * node.frame[0].dz[0];
    };
}

// f(zeta) dz1 ^ dconj(z2) ^ dz2 on an m = 1, n = 2 tube chart.
std::function<cplx(const ChartNode&)> m1n2_form(std::function<cplx(const CVec&)> f) {
    return [f = std::move(f)](const ChartNode& node) {
        const auto& fr = node.frame;
        CVec m(9);
        for (int c = 0; c < 3; ++c) {
            m[0 * 3 + c] = fr[c].dz[0];
            m[1 * 3 + c] = std::conj(fr[c].dz[1]);
            m[2 * 3 + c] = fr[c].dz[1];
        }
        return f(node.zeta) * det(m, 3);
    };
}

// Shared fiber-engine reduction for the m = 1, n = 2 integrands above:
// integrates 2 pi i sum res over the same transverse polar rule.
cplx fiber_oracle_m1n2(const MultiPoly& poly, const PolarChart& pc,
                       const std::function<cplx(const CVec&)>& f) {
    QuadratureRule radial = gauss_legendre(pc.nr, pc.rmin, pc.rmax);
    QuadratureRule ang = trapezoid_periodic(pc.ntheta, 0.0, 2.0 * kPi);
    cplx total = 0.0;
    for (std::size_t i = 0; i < radial.count(); ++i)
        for (std::size_t j = 0; j < ang.count(); ++j) {
            double r = radial.nodes[i], th = ang.nodes[j];
            cplx z2 = pc.center + std::polar(r, th);
            CVec base{0.0, z2};
            FiberResidueProblem prob;
            prob.fiber_coeffs = poly.restrict_axis(0, base);
            prob.numerator = [&](cplx w) { return f(CVec{w, z2}); };
            cplx res = fiber_residue(prob);
            // [dconj(z2) ^ dz2](T_r, T_th) = 2 i r.
            total += radial.weights[i] * ang.weights[j] * res * (2.0 * kI * r);
        }
    return total;
}

}  // namespace

TEST_CASE("m=1, n=1: Cauchy reproduction and multiplicity") {
    MultiPoly p = parse_poly("z1", 1);
    TubeSpec spec{{p}, {0.01}, {0}};
    auto h = [](cplx z) { return std::exp(z) + 0.3 * std::conj(z); };
    cplx v = tube_integral(spec, 0, {}, 64, one_form(h));
    CHECK(std::abs(v - kTwoPiI) < 2e-4);

    AdmissiblePath path{{1.0}};
    auto tg = geometric_t_grid(3, 9);
    auto rl = residue_limit_m1(p, 0, {}, 64, one_form(h), path, tg);
    CHECK(std::abs(rl.limit - kTwoPiI) < 1e-9);

    // P = z - c: exact for every radius; per-t values all equal the limit.
    MultiPoly pc = parse_poly("z1-(0.2+0.1i)", 1);
    auto hol = [](cplx z) { return std::cos(z); };
    auto rl2 = residue_limit_m1(pc, 0, {}, 64, one_form(hol), path, tg);
    cplx expect = kTwoPiI * std::cos(cplx(0.2, 0.1));
    for (const cplx& vt : rl2.tube_values) CHECK(std::abs(vt - expect) < 1e-10);

    // Non-reduced P = z^2 picks the derivative: 2 pi i h'(0).
    MultiPoly p2 = parse_poly("z1^2", 1);
    auto h2 = [](cplx z) { return std::exp(2.0 * z); };
    auto rl3 = residue_limit_m1(p2, 0, {}, 64, one_form(h2), path, tg);
    CHECK(std::abs(rl3.limit - 2.0 * kTwoPiI) < 1e-7);

    // Zero integrand stays exactly zero.
    auto rl4 = residue_limit_m1(p, 0, {}, 16, one_form([](cplx) { return cplx(0.0); }),
                                path, tg);
    CHECK(std::abs(rl4.limit) == 0.0);
}

TEST_CASE("fiber_residue examples") {
    FiberResidueProblem a;
    a.fiber_coeffs = {0.0, 1.0};  // w
    a.numerator = [](cplx) { return cplx(1.0); };
    CHECK(std::abs(fiber_residue(a) - kTwoPiI) < 1e-12);

    FiberResidueProblem b;
    b.fiber_coeffs = {-1.0, 0.0, 1.0};  // w^2 - 1
    b.numerator = [](cplx) { return cplx(1.0); };
    CHECK(std::abs(fiber_residue(b)) < 1e-10);

    FiberResidueProblem c;
    c.fiber_coeffs = {0.0, 0.0, 1.0};  // w^2
    c.numerator = [](cplx w) { return w; };
    c.numerator_taylor = [](cplx w0, int upto) {
        CVec t(upto + 1, cplx(0.0));
        t[0] = w0;
        if (upto >= 1) t[1] = 1.0;
        return t;
    };
    CHECK(std::abs(fiber_residue(c) - kTwoPiI) < 1e-12);

    FiberResidueProblem bad;
    bad.fiber_coeffs = {1.0};
    bad.numerator = [](cplx) { return cplx(1.0); };
    CHECK_THROWS(fiber_residue(bad));
}

TEST_CASE("m=2 monomial torus: iterated Cauchy") {
    std::vector<TubeChartMonomial::Axis> axes{{0, 1, true}, {1, 1, true}};
    TubeChartMonomial chart(2, axes, {0.01, 0.02}, {}, 32);
    auto h = [](const CVec& z) { return std::exp(z[0] + 2.0 * z[1]); };
    auto vals = integrate_batch(chart, 1, 1, [&](const ChartNode& node, cplx* out) {
        CVec m(4);
        m[0] = node.frame[0].dz[0];
        m[1] = node.frame[1].dz[0];
        m[2] = node.frame[0].dz[1];
        m[3] = node.frame[1].dz[1];
        out[0] = h(node.zeta) * det(m, 2) / (node.zeta[0] * node.zeta[1]);
    });
    CHECK(std::abs(vals[0] - kTwoPiI * kTwoPiI) < 1e-3);

    // Through the limit driver: exact reproduction of h(0,0).
    AdmissiblePath path = AdmissiblePath::canonical(2, 1.0);
    auto tg = geometric_t_grid(3, 8);
    auto rl = partial_tube_limit(
        2, axes, {}, 32,
        [&](const ChartNode& node) {
            CVec m(4);
            m[0] = node.frame[0].dz[0];
            m[1] = node.frame[1].dz[0];
            m[2] = node.frame[0].dz[1];
            m[3] = node.frame[1].dz[1];
            return h(node.zeta) * det(m, 2);
        },
        path, tg);
    CHECK(std::abs(rl.limit - kTwoPiI * kTwoPiI) < 1e-7);
}

TEST_CASE("m=1, n=2: tube limit agrees with the fiber engine") {
    PolarChart annulus{cplx(0.0), 0.45, 0.95, 12, 24};
    auto f = [](const CVec& z) {
        return std::exp(z[0] - 0.5 * std::norm(z[1])) * (1.0 + 0.3 * std::conj(z[0]));
    };
    AdmissiblePath path{{1.0}};
    auto tg = geometric_t_grid(3, 9);

    SUBCASE("circle variety") {
        MultiPoly p = parse_poly("z1^2+z2^2-0.25", 2);
        auto rl = residue_limit_m1(p, 0, {annulus}, 24, m1n2_form(f), path, tg, 2);
        cplx oracle = fiber_oracle_m1n2(p, annulus, f);
        CHECK(rl.dropped_fiber_points == 0);
        CHECK(std::abs(rl.limit - oracle) < std::max(1e-6, 1e-4 * std::abs(oracle)));
    }
    SUBCASE("two separated simple roots") {
        MultiPoly p = parse_poly("z1^2+0.1*z1-0.06+0*z2", 2);
        auto rl = residue_limit_m1(p, 0, {annulus}, 24, m1n2_form(f), path, tg, 2);
        cplx oracle = fiber_oracle_m1n2(p, annulus, f);
        CHECK(std::abs(rl.limit - oracle) < std::max(1e-6, 1e-4 * std::abs(oracle)));
    }
    SUBCASE("non-reduced double line") {
        MultiPoly p = parse_poly("z1^2+0*z2", 2);
        auto fh = [](const CVec& z) {
            return std::exp(z[0] - 0.5 * std::norm(z[1]));  // holomorphic in the fiber
        };
        auto rl = residue_limit_m1(p, 0, {annulus}, 24, m1n2_form(fh), path, tg, 2);
        cplx oracle = fiber_oracle_m1n2(p, annulus, fh);
        CHECK(std::abs(rl.limit - oracle) < std::max(1e-6, 1e-4 * std::abs(oracle)));
    }
}

TEST_CASE("path independence (m=1)") {
    MultiPoly p = parse_poly("z1^2-0.04", 1);
    auto h = [](cplx z) { return std::exp(z) / (2.0 - z); };
    auto rl_a = residue_limit_m1(p, 0, {}, 48, one_form(h), AdmissiblePath{{1.0}},
                                 geometric_t_grid(4, 10));
    auto rl_b = residue_limit_m1(p, 0, {}, 48, one_form(h), AdmissiblePath{{2.0}},
                                 geometric_t_grid(2, 7));
    CHECK(std::abs(rl_a.limit - rl_b.limit) < 1e-6);
}

TEST_CASE("linearity and multiplicity invariance") {
    MultiPoly p = parse_poly("z1^2-0.09", 1);
    auto h = [](cplx z) { return std::sin(z) + cplx(0.5); };
    AdmissiblePath path{{1.0}};
    auto tg = geometric_t_grid(3, 9);
    auto rl1 = residue_limit_m1(p, 0, {}, 48, one_form(h), path, tg);
    auto rl10 = residue_limit_m1(p, 0, {}, 48,
                                 one_form([&](cplx z) { return 10.0 * h(z); }), path, tg);
    CHECK(std::abs(rl10.limit - 10.0 * rl1.limit) < 1e-10 * std::abs(rl10.limit));

    // Doubling P and multiplying the numerator by P leaves the residue fixed.
    MultiPoly p2 = p * p;
    CompiledPoly pc = CompiledPoly::from(p);
    auto hp = [&, h](cplx z) { return h(z) * pc.eval(CVec{z}); };
    auto rl_sq = residue_limit_m1(p2, 0, {}, 48, one_form(hp), path, tg);
    CHECK(std::abs(rl_sq.limit - rl1.limit) < 1e-6);
}

TEST_CASE("partial tubes vanish; the full tube does not") {
    // Ball centered at (1,0): the origin sits on bG, so the cutoff varies
    // across the tube and the integrand is genuinely nonzero before the limit.
    ConvexBody body = ConvexBody::ball(2, 1.0, CVec{cplx(1.0), cplx(0.0)});
    double delta = 0.3;
    auto withdphi = [&](const ChartNode& node) {
        auto dphi = dcutoff(body, delta, node.zeta);
        CVec m(9);
        for (int c = 0; c < 3; ++c) {
            const Tangent& t = node.frame[c];
            m[0 * 3 + c] = dphi[0] * t.dz[0].real() + dphi[1] * t.dz[0].imag() +
                           dphi[2] * t.dz[1].real() + dphi[3] * t.dz[1].imag();
            m[1 * 3 + c] = t.dz[0];
            m[2 * 3 + c] = t.dz[1];
        }
        return std::exp(-node.zeta[1]) * det(m, 3);
    };
    AdmissiblePath path = AdmissiblePath::canonical(2, 1.0);
    auto tg = geometric_t_grid(3, 8);
    std::vector<TubeChartMonomial::Axis> partial{{0, 1, true}, {1, 1, false}};
    auto rl = partial_tube_limit(2, partial, {}, 24, withdphi, path, tg);
    bool some_nonzero = false;
    for (const cplx& v : rl.tube_values) some_nonzero |= std::abs(v) > 1e-12;
    CHECK(some_nonzero);
    CHECK(std::abs(rl.limit) < 1e-4);

    // Contrast: the full tube on the same data reproduces iterated Cauchy.
    std::vector<TubeChartMonomial::Axis> full{{0, 1, true}, {1, 1, true}};
    auto plain = [&](const ChartNode& node) {
        CVec m(4);
        m[0] = node.frame[0].dz[0];
        m[1] = node.frame[1].dz[0];
        m[2] = node.frame[0].dz[1];
        m[3] = node.frame[1].dz[1];
        return std::exp(-node.zeta[1]) * det(m, 2);
    };
    auto rlf = partial_tube_limit(2, full, {}, 24, plain, path, tg);
    CHECK(std::abs(rlf.limit - kTwoPiI * kTwoPiI) < 1e-6);
}

TEST_CASE("residue limits depend holomorphically on an external parameter") {
    // R(z) = lim int exp(z zeta)/(zeta^2 - 0.04) d zeta: discrete d-bar check.
    MultiPoly p = parse_poly("z1^2-0.04", 1);
    AdmissiblePath path{{1.0}};
    auto tg = geometric_t_grid(3, 8);
    auto R = [&](cplx z) {
        auto rl = residue_limit_m1(p, 0, {}, 32,
                                   one_form([z](cplx w) { return std::exp(z * w); }), path, tg);
        return rl.limit;
    };
    const double h = 1e-3;
    cplx z0(0.4, -0.3);
    cplx dx = (R(z0 + h) - R(z0 - h)) / (2.0 * h);
    cplx dy = (R(z0 + kI * h) - R(z0 - kI * h)) / (2.0 * h);
    cplx dbar = 0.5 * (dx + kI * dy);
    CHECK(std::abs(dbar) < 1e-5);
}

TEST_CASE("overlap handling: throw vs drop") {
    // Roots at +-0.1: radius 0.15 curves overlap and cannot close cleanly.
    MultiPoly p = parse_poly("z1^2-0.01", 1);
    TubeSpec spec{{p}, {0.15 * 0.15}, {0}};
    bool threw_or_merged = true;
    try {
        cplx v = tube_integral(spec, 0, {}, 32, one_form([](cplx) { return cplx(1.0); }));
        // If the curves merged into one component the integral of dz/P over
        // it equals the sum of both residues, which is 0 for 1/(z^2-0.01).
        threw_or_merged = std::abs(v) < 1e-6;
    } catch (const std::runtime_error&) {
        threw_or_merged = true;
    }
    CHECK(threw_or_merged);
}
