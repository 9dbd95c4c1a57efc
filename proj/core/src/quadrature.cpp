#include "leray/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leray {

double QuadratureRule::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    QuadratureRule r;
    r.dim = 1;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Roots of P_n on (-1, 1) by Newton from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.nodes[i] = x;
        r.weights[i] = w;
        r.nodes[n - 1 - i] = -x;
        r.weights[n - 1 - i] = w;
    }
    // Map [-1, 1] -> [a, b].
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid - half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

QuadratureRule trapezoid_periodic(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("trapezoid_periodic: need n >= 1");
    QuadratureRule r;
    r.dim = 1;
    r.nodes.resize(n);
    r.weights.assign(n, (b - a) / n);
    for (int i = 0; i < n; ++i) r.nodes[i] = a + (b - a) * i / n;
    return r;
}

QuadratureRule tensor(const QuadratureRule& a, const QuadratureRule& b) {
    QuadratureRule r;
    r.dim = a.dim + b.dim;
    r.nodes.reserve(a.count() * b.count() * r.dim);
    r.weights.reserve(a.count() * b.count());
    for (std::size_t i = 0; i < a.count(); ++i)
        for (std::size_t j = 0; j < b.count(); ++j) {
            auto pa = a.point(i);
            auto pb = b.point(j);
            r.nodes.insert(r.nodes.end(), pa.begin(), pa.end());
            r.nodes.insert(r.nodes.end(), pb.begin(), pb.end());
            r.weights.push_back(a.weights[i] * b.weights[j]);
        }
    return r;
}

QuadratureRule sphere_rule(int n, int res) {
    if (res < 4) throw std::invalid_argument("sphere_rule: res must be >= 4");
    QuadratureRule r = trapezoid_periodic(res, 0.0, 2.0 * kPi);
    if (n == 1) return r;
    QuadratureRule polar = gauss_legendre(std::max(4, res / 2), 0.0, kPi / 2.0);
    QuadratureRule out = polar;
    for (int k = 1; k < n - 1; ++k) out = tensor(out, polar);
    for (int k = 0; k < n; ++k) out = tensor(out, r);
    return out;
}

QuadratureRule simplex_rule(int m, int degree) {
    if (m < 1) throw std::invalid_argument("simplex_rule: need m >= 1");
    if (degree < 1) throw std::invalid_argument("simplex_rule: need degree >= 1");
    // Collapsed map mu_k = v_k prod_{j<k} (1 - v_j) over [0,1]^m with
    // Jacobian prod_j (1 - v_j)^{m-1-j}; pulled-back integrands of total
    // degree d become 1-D polynomials of degree <= 2d + m per axis.
    int pts = (2 * degree + m) / 2 + 2;
    QuadratureRule gl = gauss_legendre(pts, 0.0, 1.0);
    QuadratureRule box = gl;
    for (int k = 1; k < m; ++k) box = tensor(box, gl);

    QuadratureRule out;
    out.dim = m;
    out.nodes.resize(box.count() * m);
    out.weights.resize(box.count());
    for (std::size_t i = 0; i < box.count(); ++i) {
        auto v = box.point(i);
        double w = box.weights[i], rest = 1.0;
        for (int k = 0; k < m; ++k) {
            out.nodes[i * m + k] = v[k] * rest;
            for (int p = 0; p < m - 1 - k; ++p) w *= (1.0 - v[k]);
            rest *= (1.0 - v[k]);
        }
        out.weights[i] = w;
    }
    return out;
}

ContourRule contour_rule(double radius, int points) {
    if (points < 8) throw std::invalid_argument("contour_rule: points must be >= 8");
    if (radius <= 0) throw std::invalid_argument("contour_rule: radius must be positive");
    return {radius, trapezoid_periodic(points, 0.0, 2.0 * kPi)};
}

Extrapolation richardson(std::span<const double> t, std::span<const cplx> v, int order_hint) {
    const std::size_t n = t.size();
    if (n != v.size()) throw std::invalid_argument("richardson: length mismatch");
    if (n < 3) throw std::invalid_argument("richardson: need at least 3 samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(t[i] < t[i - 1]) || t[i] <= 0.0)
            throw std::invalid_argument("richardson: t must be positive decreasing");

    int depth = std::min<int>((int)n - 1, std::max(1, order_hint));
    std::vector<cplx> row(v.begin(), v.end());
    Extrapolation out;
    out.diagonal.push_back(row.back());
    for (int j = 1; j <= depth; ++j) {
        for (std::size_t i = n - 1; i >= (std::size_t)j; --i) {
            double ti = t[i], tij = t[i - j];
            row[i] = (tij * row[i] - ti * row[i - 1]) / (tij - ti);
            if (i == (std::size_t)j) break;
        }
        out.diagonal.push_back(row.back());
    }
    out.limit = out.diagonal.back();
    std::size_t d = out.diagonal.size();
    out.error_estimate = std::abs(out.diagonal[d - 1] - out.diagonal[d - 2]);
    return out;
}

std::vector<double> AdmissiblePath::eps(double t) const {
    std::vector<double> e(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) e[j] = std::pow(t, beta[j]);
    return e;
}

bool AdmissiblePath::admissible_for(double L) const {
    for (std::size_t j = 0; j + 1 < beta.size(); ++j)
        if (!(beta[j] > L * beta[j + 1])) return false;
    return !beta.empty() && beta.back() > 0.0;
}

AdmissiblePath AdmissiblePath::canonical(int m, double L) {
    AdmissiblePath p;
    p.beta.resize(m);
    for (int j = 0; j < m; ++j) p.beta[j] = std::pow(L + 1.0, double(m - 1 - j));
    return p;
}

std::vector<double> geometric_t_grid(int k_min, int k_max) {
    std::vector<double> t;
    for (int k = k_min; k <= k_max; ++k) t.push_back(std::pow(2.0, -k));
    return t;
}

}  // namespace leray
