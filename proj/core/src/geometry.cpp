#include "leray/geometry.hpp"

#include <cmath>

namespace leray {

ConvexBody ConvexBody::ball(int n, double radius, CVec center) {
    ConvexBody b;
    b.kind = Kind::Ball;
    b.center = center.empty() ? CVec(n, 0.0) : std::move(center);
    b.radii.assign(n, radius);
    if ((int)b.center.size() != n) throw std::invalid_argument("ball: center dimension");
    if (radius <= 0) throw std::invalid_argument("ball: radius must be positive");
    return b;
}

ConvexBody ConvexBody::ellipsoid(CVec center, std::vector<double> radii) {
    ConvexBody b;
    b.kind = Kind::Ellipsoid;
    b.center = std::move(center);
    b.radii = std::move(radii);
    if (b.center.size() != b.radii.size()) throw std::invalid_argument("ellipsoid: dimensions");
    for (double r : b.radii)
        if (r <= 0) throw std::invalid_argument("ellipsoid: radii must be positive");
    return b;
}

double rho(const ConvexBody& body, std::span<const cplx> z) {
    if ((int)z.size() != body.dim()) throw std::invalid_argument("rho: dimension mismatch");
    double s = -1.0;
    for (int j = 0; j < body.dim(); ++j) {
        cplx d = z[j] - body.center[j];
        s += std::norm(d) / (body.radii[j] * body.radii[j]);
    }
    return s;
}

CVec grad_rho(const ConvexBody& body, std::span<const cplx> z) {
    if ((int)z.size() != body.dim()) throw std::invalid_argument("grad_rho: dimension mismatch");
    CVec g(body.dim());
    for (int j = 0; j < body.dim(); ++j)
        g[j] = std::conj(z[j] - body.center[j]) / (body.radii[j] * body.radii[j]);
    return g;
}

CVec eta(const ConvexBody& body, EtaConvention conv, std::span<const cplx> z) {
    CVec g = grad_rho(body, z);
    double norm2 = 0.0;
    for (const cplx& v : g) norm2 += std::norm(v);
    if (norm2 < 1e-24) throw DegenerateGradient("eta: gradient below 1e-12 norm");
    CVec out(body.dim() + 1);
    cplx e0 = 0.0;
    for (int j = 0; j < body.dim(); ++j) e0 += z[j] * g[j];
    out[0] = double(conv.sign) * e0;
    std::copy(g.begin(), g.end(), out.begin() + 1);
    return out;
}

CVec eta_reflected(const ConvexBody& body, std::span<const cplx> z) {
    CVec g = grad_rho(body, z);
    CVec out(body.dim() + 1);
    cplx e0 = 0.0;
    for (int j = 0; j < body.dim(); ++j) e0 += z[j] * g[j];
    out[0] = e0;
    for (int j = 0; j < body.dim(); ++j) out[j + 1] = -g[j];
    return out;
}

DualMembership in_dual(const ConvexBody& body, std::span<const cplx> xi, int samples,
                       double dual_tol) {
    const int n = body.dim();
    if ((int)xi.size() != n + 1) throw std::invalid_argument("in_dual: xi must have length n+1");
    if (samples < 100) throw std::invalid_argument("in_dual: samples must be >= 100");
    int axes = 2 * n - 1;
    int per_axis = std::max(4, (int)std::ceil(std::pow(double(samples), 1.0 / axes)));

    std::vector<double> angles(axes);
    CVec u(n);
    double margin = 1e300;
    std::vector<int> idx(axes, 0);
    for (;;) {
        // Polar angles include both chart poles so coordinate hyperplanes
        // register a zero margin.
        for (int k = 0; k < n - 1; ++k)
            angles[k] = idx[k] * (kPi / 2.0) / (per_axis - 1);
        for (int k = 0; k < n; ++k)
            angles[n - 1 + k] = idx[n - 1 + k] * (2.0 * kPi) / per_axis;
        CVec zeta;
        std::vector<CVec> tangents;
        level_point(body, 0.0, angles, zeta, tangents);
        margin = std::min(margin, std::abs(dual_pairing(xi, zeta)));
        int k = axes - 1;
        while (k >= 0 && ++idx[k] == per_axis) idx[k--] = 0;
        if (k < 0) break;
    }
    return {margin > dual_tol, margin};
}

namespace {
double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_deriv(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
}  // namespace

double smooth_step(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double u = bump(s), v = bump(1.0 - s);
    return v / (u + v);
}

double smooth_step_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double u = bump(s), v = bump(1.0 - s);
    double du = bump_deriv(s), dv = -bump_deriv(1.0 - s);
    double denom = (u + v) * (u + v);
    return (dv * u - v * du) / denom;
}

double cutoff(const ConvexBody& body, double delta, std::span<const cplx> z) {
    if (delta <= 0) throw std::invalid_argument("cutoff: delta must be positive");
    return smooth_step(rho(body, z) / delta);
}

std::vector<double> dcutoff(const ConvexBody& body, double delta, std::span<const cplx> z) {
    if (delta <= 0) throw std::invalid_argument("dcutoff: delta must be positive");
    double f = smooth_step_deriv(rho(body, z) / delta) / delta;
    CVec g = grad_rho(body, z);
    std::vector<double> out(2 * body.dim());
    for (int j = 0; j < body.dim(); ++j) {
        out[2 * j] = f * 2.0 * g[j].real();       // d/dx_j of rho = 2 Re eta_j
        out[2 * j + 1] = f * (-2.0) * g[j].imag();  // d/dy_j of rho = -2 Im eta_j
    }
    return out;
}

double level_scale(double nu) {
    if (nu < 0.0 || nu >= 1.0) throw std::invalid_argument("level set empty: need 0 <= nu < 1");
    return std::sqrt(1.0 - nu);
}

int level_chart_dim(int n) { return 2 * n - 1; }

// Unit-sphere chart in C^n: S_j = (prod_{i<j} sin t_i) cos t_j e^{i p_j},
// with cos t_n == 1; parameters [t_1..t_{n-1}, p_1..p_n]. The parameter
// order (polar angles first) gives the orientation with
// int_{S^3} omega'_0(conj z) ^ dz = (2 pi i)^2 (pinned by unit test).
void level_point(const ConvexBody& body, double nu, std::span<const double> angles,
                 CVec& zeta, std::vector<CVec>& tangents) {
    const int n = body.dim();
    const int dim = 2 * n - 1;
    if ((int)angles.size() != dim) throw std::invalid_argument("level_point: angle count");
    const double s = level_scale(nu);

    auto amp = [&](int j, int dk) {
        // Real amplitude of S_j; dk >= 0 differentiates with respect to t_dk.
        if (dk > j) return 0.0;
        if (dk == j && j >= n - 1) return 0.0;  // last coordinate has no cos factor
        double a = 1.0;
        for (int i = 0; i < j; ++i) a *= (i == dk) ? std::cos(angles[i]) : std::sin(angles[i]);
        if (j < n - 1) a *= (j == dk) ? -std::sin(angles[j]) : std::cos(angles[j]);
        return a;
    };

    zeta.assign(n, 0.0);
    tangents.assign(dim, CVec(n, 0.0));
    for (int j = 0; j < n; ++j) {
        cplx phase = std::polar(1.0, angles[n - 1 + j]);
        cplx sj = amp(j, -1) * phase;
        zeta[j] = body.center[j] + body.radii[j] * s * sj;
        for (int k = 0; k < n - 1; ++k)
            tangents[k][j] = body.radii[j] * s * amp(j, k) * phase;
        tangents[n - 1 + j][j] = body.radii[j] * s * (kI * sj);
    }
}

}  // namespace leray
