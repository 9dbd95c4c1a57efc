#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "leray/geometry.hpp"

using namespace leray;

TEST_CASE("rho and grad_rho") {
    ConvexBody ball = ConvexBody::ball(2);
    CHECK(rho(ball, CVec{0.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(rho(ball, CVec{1.0, 0.0}) == doctest::Approx(0.0));
    CVec g = grad_rho(ball, CVec{1.0, 0.0});
    CHECK(std::abs(g[0] - cplx(1.0)) < 1e-15);
    CHECK(std::abs(g[1]) < 1e-15);

    ConvexBody ell = ConvexBody::ellipsoid(CVec{0.0, 0.0}, {2.0, 1.0});
    CHECK(rho(ell, CVec{2.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("eta conventions") {
    ConvexBody ball = ConvexBody::ball(2);
    CVec z{1.0, 0.0};
    CVec em = eta(ball, EtaConvention{-1}, z);
    CHECK(std::abs(em[0] + 1.0) < 1e-15);
    CHECK(std::abs(em[1] - 1.0) < 1e-15);
    CHECK(std::abs(em[2]) < 1e-15);

    CVec ep = eta(ball, EtaConvention{+1}, z);
    CHECK(std::abs(ep[0] - 1.0) < 1e-15);

    CVec z2{0.0, 1.0};
    CVec e2 = eta(ball, EtaConvention{-1}, z2);
    CHECK(std::abs(e2[0] + 1.0) < 1e-15);
    CHECK(std::abs(e2[2] - 1.0) < 1e-15);

    CHECK_THROWS_AS(eta(ball, EtaConvention{-1}, CVec{0.0, 0.0}), DegenerateGradient);

    CVec er = eta_reflected(ball, z);
    CHECK(std::abs(er[0] - 1.0) < 1e-15);
    CHECK(std::abs(er[1] + 1.0) < 1e-15);
}

TEST_CASE("sign -1 normalization <eta . (1,z)> = 0 on random boundary points") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), pol(0.0, kPi / 2.0);
    ConvexBody ell = ConvexBody::ellipsoid(CVec{cplx(0.1, 0.0), cplx(0.0, -0.2)}, {1.5, 0.8});
    for (int rep = 0; rep < 1000; ++rep) {
        double t = pol(rng);
        CVec z{ell.center[0] + 1.5 * std::cos(t) * std::polar(1.0, ang(rng)),
               ell.center[1] + 0.8 * std::sin(t) * std::polar(1.0, ang(rng))};
        CVec e = eta(ell, EtaConvention{-1}, z);
        cplx pair = e[0] + e[1] * z[0] + e[2] * z[1];
        CHECK(std::abs(pair) < 1e-12);
    }
}

TEST_CASE("in_dual examples and monotonicity") {
    ConvexBody ball = ConvexBody::ball(2);
    auto d1 = in_dual(ball, CVec{1.0, 0.0, 0.0});
    CHECK(d1.member);
    CHECK(d1.margin == doctest::Approx(1.0).epsilon(1e-6));

    auto d2 = in_dual(ball, CVec{0.0, 1.0, 0.0});
    CHECK_FALSE(d2.member);

    auto d3 = in_dual(ball, CVec{2.0, 1.0, 0.0});
    CHECK(d3.member);
    CHECK(d3.margin == doctest::Approx(1.0).epsilon(1e-2));

    // Shrinking the body never turns a member into a non-member.
    CVec xi{1.0, cplx(0.8, 0.1), cplx(-0.2, 0.3)};
    bool prev_member = false;
    for (double r = 1.0; r >= 0.2; r -= 0.1) {
        auto d = in_dual(ConvexBody::ball(2, r), xi);
        if (prev_member) CHECK(d.member);
        prev_member = prev_member || d.member;
    }
    CHECK_THROWS(in_dual(ball, xi, 50));
}

TEST_CASE("cutoff profile") {
    ConvexBody ball = ConvexBody::ball(2);
    double delta = 0.2;
    // rho = -0.5 inside: phi = 1, dphi = 0.
    CVec inside{cplx(std::sqrt(0.5)), 0.0};
    CHECK(cutoff(ball, delta, inside) == doctest::Approx(1.0));
    for (double c : dcutoff(ball, delta, inside)) CHECK(c == 0.0);

    // rho = 2 delta: phi = 0.
    CVec outside{cplx(std::sqrt(1.0 + 2 * delta)), 0.0};
    CHECK(cutoff(ball, delta, outside) == doctest::Approx(0.0));

    // rho = delta/2: phi in (0,1), dphi != 0; psi(1/2) frozen regression value.
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(0.25) > 0.9);
    CVec shell{cplx(std::sqrt(1.0 + 0.5 * delta)), 0.0};
    double phi = cutoff(ball, delta, shell);
    CHECK(phi > 0.0);
    CHECK(phi < 1.0);
    double dsum = 0.0;
    for (double c : dcutoff(ball, delta, shell)) dsum += std::abs(c);
    CHECK(dsum > 0.0);
}

TEST_CASE("dcutoff matches finite differences in the shell") {
    ConvexBody ell = ConvexBody::ellipsoid(CVec{0.0, 0.0}, {1.2, 0.9});
    double delta = 0.3;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.1, 0.1), ang(0.0, 2.0 * kPi);
    const double h = 1e-6;
    int checked = 0;
    for (int rep = 0; rep < 200 && checked < 40; ++rep) {
        CVec z{1.2 * (1.0 + u(rng)) * std::polar(1.0, ang(rng)) * std::cos(0.3),
               0.9 * (1.0 + u(rng)) * std::polar(1.0, ang(rng)) * std::sin(0.3)};
        double r = rho(ell, z);
        if (r < 0.02 * delta || r > 0.98 * delta) continue;
        ++checked;
        auto d = dcutoff(ell, delta, z);
        for (int j = 0; j < 2; ++j) {
            CVec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            double fdx = (cutoff(ell, delta, zp) - cutoff(ell, delta, zm)) / (2 * h);
            zp = z; zm = z;
            zp[j] += cplx(0.0, h);
            zm[j] -= cplx(0.0, h);
            double fdy = (cutoff(ell, delta, zp) - cutoff(ell, delta, zm)) / (2 * h);
            CHECK(std::abs(fdx - d[2 * j]) < 1e-5 * (1.0 + std::abs(d[2 * j])));
            CHECK(std::abs(fdy - d[2 * j + 1]) < 1e-5 * (1.0 + std::abs(d[2 * j + 1])));
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("level chart: positions, scaling and tangent consistency") {
    ConvexBody ball = ConvexBody::ball(2);
    std::vector<double> angles{0.7, 1.1, 2.4};
    CVec z;
    std::vector<CVec> tang;
    level_point(ball, 0.0, angles, z, tang);
    CHECK(rho(ball, z) == doctest::Approx(0.0).epsilon(1e-12));

    level_point(ball, 0.19, angles, z, tang);
    double r2 = std::norm(z[0]) + std::norm(z[1]);
    CHECK(std::sqrt(r2) == doctest::Approx(0.9));

    ConvexBody ell = ConvexBody::ellipsoid(CVec{0.0, 0.0}, {2.0, 1.0});
    level_point(ell, 0.0, angles, z, tang);
    CHECK(rho(ell, z) == doctest::Approx(0.0).epsilon(1e-12));

    // Tangents match finite differences of the chart map.
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        auto ap = angles, am = angles;
        ap[k] += h;
        am[k] -= h;
        CVec zp, zm;
        std::vector<CVec> dummy;
        level_point(ell, 0.0, ap, zp, dummy);
        level_point(ell, 0.0, am, zm, dummy);
        for (int j = 0; j < 2; ++j) {
            cplx fd = (zp[j] - zm[j]) / (2.0 * h);
            CHECK(std::abs(fd - tang[k][j]) < 1e-6);
        }
    }
    CHECK_THROWS(level_scale(1.0));
}
