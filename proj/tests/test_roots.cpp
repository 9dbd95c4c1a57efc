#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "leray/roots.hpp"

using namespace leray;

namespace {
bool contains_root(const CVec& roots, cplx r, double tol) {
    return std::any_of(roots.begin(), roots.end(),
                       [&](cplx w) { return std::abs(w - r) < tol; });
}
}

TEST_CASE("poly_roots on known factorizations") {
    // (w - 1)(w + 2)(w - i) = w^3 + (1 - i) w^2 + (-2 - i) w + 2i
    CVec c{cplx(0.0, 2.0), cplx(-2.0, -1.0), cplx(1.0, -1.0), cplx(1.0)};
    CVec r = poly_roots(c);
    REQUIRE(r.size() == 3);
    CHECK(contains_root(r, 1.0, 1e-10));
    CHECK(contains_root(r, -2.0, 1e-10));
    CHECK(contains_root(r, kI, 1e-10));

    // Double root: w^2.
    CVec r2 = poly_roots(CVec{0.0, 0.0, 1.0});
    REQUIRE(r2.size() == 2);
    CHECK(std::abs(r2[0]) < 1e-6);
    CHECK(std::abs(r2[1]) < 1e-6);

    CHECK(poly_roots(CVec{1.0}).empty());
}

TEST_CASE("poly_taylor recenters exactly") {
    // p(w) = w^3 - 2 w + 1 around w0 = 2: p(2) = 5, p'(2) = 10, p''(2)/2 = 6, 1.
    CVec c{1.0, -2.0, 0.0, 1.0};
    CVec t = poly_taylor(c, 2.0, 3);
    CHECK(std::abs(t[0] - cplx(5.0)) < 1e-12);
    CHECK(std::abs(t[1] - cplx(10.0)) < 1e-12);
    CHECK(std::abs(t[2] - cplx(6.0)) < 1e-12);
    CHECK(std::abs(t[3] - cplx(1.0)) < 1e-12);

    CVec t5 = poly_taylor(c, 2.0, 5);
    CHECK(std::abs(t5[4]) == 0.0);
    CHECK(std::abs(t5[5]) == 0.0);
}

TEST_CASE("clustering") {
    CVec roots{cplx(1.0), cplx(1.0 + 1e-10), cplx(-0.5)};
    auto cl = cluster_roots(roots, 1e-8);
    REQUIRE(cl.size() == 2);
    int two = cl[0].multiplicity == 2 ? 0 : 1;
    CHECK(cl[two].multiplicity == 2);
    CHECK(std::abs(cl[two].center - cplx(1.0)) < 1e-9);
}

TEST_CASE("cluster_residue recovers classical residues") {
    // P = w: residue of 1/w is 1.
    RootCluster c0{0.0, 1};
    CHECK(std::abs(cluster_residue(CVec{0.0, 1.0}, c0, CVec{1.0}) - cplx(1.0)) < 1e-14);

    // P = w^2 - 1: residues of 1/P at +-1 are +-1/2.
    CVec p{-1.0, 0.0, 1.0};
    CHECK(std::abs(cluster_residue(p, RootCluster{1.0, 1}, CVec{1.0}) - cplx(0.5)) < 1e-14);
    CHECK(std::abs(cluster_residue(p, RootCluster{-1.0, 1}, CVec{1.0}) + cplx(0.5)) < 1e-14);

    // P = w^2, numerator w: residue of w/w^2 = 1/w is 1.
    CHECK(std::abs(cluster_residue(CVec{0.0, 0.0, 1.0}, RootCluster{0.0, 2},
                                   CVec{0.0, 1.0}) - cplx(1.0)) < 1e-14);

    // P = w^2 (1 + w): residue at the double root of n(w)/P with n = 1:
    // 1/P = w^{-2} (1 - w + ...) so the residue is -1.
    CVec p3{0.0, 0.0, 1.0, 1.0};
    CHECK(std::abs(cluster_residue(p3, RootCluster{0.0, 2}, CVec{1.0, 0.0}) + cplx(1.0)) < 1e-12);
}

TEST_CASE("wirtinger derivatives of smooth functions") {
    // f(w) = w^2 + 0.5 conj(w): df/dw = 2w, holomorphic second derivative 2.
    auto f = [](cplx w) { return w * w + 0.5 * std::conj(w); };
    cplx at(0.3, -0.2);
    CVec d = wirtinger_derivs(f, at, 2);
    CHECK(std::abs(d[0] - f(at)) < 1e-14);
    CHECK(std::abs(d[1] - 2.0 * at) < 1e-9);
    CHECK(std::abs(d[2] - cplx(2.0)) < 1e-5);
}
