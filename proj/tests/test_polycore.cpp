#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "leray/polynomial.hpp"

using namespace leray;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, int nvars, int maxdeg) {
    std::uniform_int_distribution<int> nterms(1, 6), expd(0, maxdeg);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    MultiPoly p(nvars);
    int t = nterms(rng);
    for (int k = 0; k < t; ++k) {
        std::vector<int> e(nvars);
        int total = 0;
        for (int j = 0; j < nvars; ++j) {
            e[j] = expd(rng);
            total += e[j];
        }
        if (total > maxdeg) continue;
        p.add_term(e, cplx(coef(rng), coef(rng)));
    }
    if (p.is_zero()) p.add_term(std::vector<int>(nvars, 0), 1.0);
    return p;
}

CVec random_point(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    CVec z(n);
    for (auto& v : z) v = cplx(u(rng), u(rng));
    return z;
}

}  // namespace

TEST_CASE("parse: canonical construction") {
    MultiPoly p = parse_poly("z1^2+z2^2-1", 2);
    CHECK(p.terms().size() == 3);
    CHECK(p.degree() == 2);

    MultiPoly zero = parse_poly("0*z1", 1);
    CHECK(zero.is_zero());
    CHECK(zero.terms().empty());

    MultiPoly prod = parse_poly("(z1-z2)*(z1+z2)", 2);
    MultiPoly expect = parse_poly("z1^2-z2^2", 2);
    CHECK(prod.terms() == expect.terms());
}

TEST_CASE("parse: complex literals and errors") {
    MultiPoly p = parse_poly("(1+2i)*z1 + 3i", 1);
    cplx at1 = p.eval(CVec{1.0});
    CHECK(std::abs(at1 - cplx(1.0, 5.0)) < 1e-15);

    CHECK_THROWS_AS(parse_poly("z1 + + z2", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("z3", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("z1*(z2", 2), ParseError);
    try {
        parse_poly("z1 + $", 2);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("eval examples") {
    MultiPoly circle = parse_poly("z1^2+z2^2-1", 2);
    CHECK(std::abs(circle.eval(CVec{1.0, 0.0})) < 1e-15);
    CHECK(std::abs(circle.eval(CVec{kI, 0.0}) - cplx(-2.0)) < 1e-15);

    MultiPoly p = parse_poly("z1^3*z2 + 2*z1 - 5", 2);
    CHECK(std::abs(p.eval(CVec{0.0, 0.0}) - cplx(-5.0)) < 1e-15);
    CHECK_THROWS(p.eval(CVec{1.0}));
}

TEST_CASE("eval matches direct term sum on random data") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 1 + (int)(rng() % 3);
        MultiPoly p = random_poly(rng, n, 4);
        CompiledPoly c = CompiledPoly::from(p);
        CVec z = random_point(rng, n);
        cplx direct = 0.0;
        for (const auto& [e, co] : p.terms()) {
            cplx v = co;
            for (int j = 0; j < n; ++j)
                for (int q = 0; q < e[j]; ++q) v *= z[j];
            direct += v;
        }
        CHECK(std::abs(p.eval(z) - direct) < 1e-12 * (1.0 + std::abs(direct)));
        CHECK(std::abs(c.eval(z) - direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("partial derivatives") {
    CHECK(parse_poly("z1^2", 1).partial(0).terms() == parse_poly("2*z1", 1).terms());
    CHECK(parse_poly("z2", 2).partial(0).is_zero());
    CHECK(parse_poly("z1^3*z2", 2).partial(0).terms() == parse_poly("3*z1^2*z2", 2).terms());
    CHECK_THROWS(parse_poly("z1", 1).partial(1));
}

TEST_CASE("partial matches centered finite differences") {
    std::mt19937_64 rng(11);
    const double h = 1e-5;
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + (int)(rng() % 3);
        MultiPoly p = random_poly(rng, n, 4);
        CVec z = random_point(rng, n);
        for (int j = 0; j < n; ++j) {
            CVec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            cplx fd = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
            cplx an = p.partial(j).eval(z);
            CHECK(std::abs(fd - an) < 1e-6 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("homogenize and dehomogenize") {
    MultiPoly p = parse_poly("z1^2+z2^2-1", 2);
    MultiPoly h = p.homogenize(2);
    CHECK(h.nvars() == 3);
    CHECK(h.is_homogeneous());
    // z0 is the prepended variable: expect z1^2 + z2^2 - z0^2 in (z0,z1,z2).
    MultiPoly expect = parse_poly("z2^2+z3^2-z1^2", 3);
    CHECK(h.terms() == expect.terms());

    CHECK(parse_poly("1", 1).homogenize(0).terms() == MultiPoly::constant(2, 1.0).terms());
    CHECK(parse_poly("z1*z2", 2).dehomogenize().terms() == parse_poly("z1", 1).terms());
    CHECK_THROWS(p.homogenize(1));

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + (int)(rng() % 3);
        MultiPoly q = random_poly(rng, n, 4);
        int d = q.degree() + (int)(rng() % 2);
        CHECK(q.homogenize(d).dehomogenize().terms() == q.terms());
    }
}

TEST_CASE("hefer: closed forms") {
    HeferDecomposition lin = hefer(parse_poly("z1", 2));
    CHECK(lin.components[0].terms() == MultiPoly::constant(4, 1.0).terms());
    CHECK(lin.components[1].is_zero());

    HeferDecomposition cst = hefer(parse_poly("7", 2));
    CHECK(cst.components[0].is_zero());
    CHECK(cst.components[1].is_zero());

    HeferDecomposition circ = hefer(parse_poly("z1^2+z2^2-1", 2));
    // Q1 = zeta1 + z1, Q2 = zeta2 + z2 in variables (zeta1,zeta2,z1,z2).
    CHECK(circ.components[0].terms() == parse_poly("z1+z3", 4).terms());
    CHECK(circ.components[1].terms() == parse_poly("z2+z4", 4).terms());

    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        CVec zeta = random_point(rng, 2), z = random_point(rng, 2);
        cplx lhs = circ.source.eval(zeta) - circ.source.eval(z);
        cplx rhs = 0.0;
        for (int j = 0; j < 2; ++j)
            rhs += (zeta[j] - z[j]) * eval_hefer(circ.components[j], zeta, z);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("hefer identity on random polynomials") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + (int)(rng() % 3);
        MultiPoly p = random_poly(rng, n, 4);
        HeferDecomposition hd = hefer(p);
        for (int j = 0; j < n; ++j) {
            CHECK(hd.components[j].degree_in(j) <= std::max(p.degree() - 1, 0));
            CHECK(hd.components[j].degree_in(n + j) <= std::max(p.degree() - 1, 0));
        }
        for (int pt = 0; pt < 50; ++pt) {
            CVec zeta = random_point(rng, n), z = random_point(rng, n);
            cplx lhs = p.eval(zeta) - p.eval(z);
            cplx rhs = 0.0;
            for (int j = 0; j < n; ++j)
                rhs += (zeta[j] - z[j]) * eval_hefer(hd.components[j], zeta, z);
            double bound = 1e-10 * (1.0 + std::abs(p.eval(zeta)) + std::abs(p.eval(z)));
            CHECK(std::abs(lhs - rhs) < bound);
        }
    }
}

TEST_CASE("substitute_block and restrict_axis") {
    MultiPoly p = parse_poly("z1^2*z2 + z2^2 - 3", 2);
    MultiPoly sub = p.substitute_block(1, CVec{cplx(2.0)});
    // z2 := 2 -> 2 z1^2 + 1
    CHECK(sub.terms() == parse_poly("2*z1^2+1", 1).terms());

    CVec coeffs = p.restrict_axis(0, CVec{0.0, cplx(2.0)});
    REQUIRE(coeffs.size() == 3);
    CHECK(std::abs(coeffs[0] - cplx(1.0)) < 1e-15);  // 4 - 3
    CHECK(std::abs(coeffs[1]) < 1e-15);
    CHECK(std::abs(coeffs[2] - cplx(2.0)) < 1e-15);
}

TEST_CASE("serialization is byte-stable") {
    MultiPoly a = parse_poly("z2^2 + z1^2 + z1*z2", 2);
    MultiPoly b = parse_poly("z1*z2 + z1^2 + z2^2", 2);
    CHECK(a.to_string() == b.to_string());
}
