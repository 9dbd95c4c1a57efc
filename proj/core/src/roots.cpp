#include "leray/roots.hpp"

#include <algorithm>
#include <cmath>

namespace leray {

void poly_eval_deriv(std::span<const cplx> coeffs, cplx w, cplx& value, cplx& deriv) {
    value = 0.0;
    deriv = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        deriv = deriv * w + value;
        value = value * w + coeffs[k];
    }
}

CVec poly_roots(std::span<const cplx> coeffs) {
    CVec c(coeffs.begin(), coeffs.end());
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    const int d = (int)c.size() - 1;
    if (d <= 0) return {};
    if (c.back() == 0.0) throw RootFindingError("poly_roots: zero polynomial");
    for (auto& v : c) v /= c[d];  // monic

    if (d == 1) return {-c[0]};

    // Cauchy bound for the root radius.
    double radius = 0.0;
    for (int k = 0; k < d; ++k) radius = std::max(radius, std::abs(c[k]));
    radius = 1.0 + radius;

    // Durand-Kerner from a deterministic asymmetric start.
    CVec w(d);
    for (int k = 0; k < d; ++k)
        w[k] = 0.5 * radius * std::polar(1.0, 2.0 * kPi * k / d + 0.41);
    for (int it = 0; it < 500; ++it) {
        double move = 0.0;
        for (int k = 0; k < d; ++k) {
            cplx num = 0.0, dummy;
            poly_eval_deriv(c, w[k], num, dummy);
            cplx den = 1.0;
            for (int j = 0; j < d; ++j)
                if (j != k) den *= (w[k] - w[j]);
            if (den == 0.0) den = 1e-30;
            cplx delta = num / den;
            w[k] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-14 * radius) break;
    }
    // Newton polish (helps simple roots; multiple roots stay at DK accuracy).
    for (int k = 0; k < d; ++k) {
        for (int it = 0; it < 8; ++it) {
            cplx v, dv;
            poly_eval_deriv(c, w[k], v, dv);
            if (std::abs(dv) < 1e-14) break;
            cplx delta = v / dv;
            if (std::abs(delta) > 0.5) break;
            w[k] -= delta;
            if (std::abs(delta) < 1e-15) break;
        }
    }
    std::sort(w.begin(), w.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return w;
}

CVec poly_taylor(std::span<const cplx> coeffs, cplx w0, int upto) {
    CVec c(coeffs.begin(), coeffs.end());
    if (c.empty()) c.push_back(0.0);
    const int d = (int)c.size() - 1;
    CVec out(upto + 1, cplx(0.0));
    // Repeated synthetic division by (w - w0); remainders are the Taylor
    // coefficients.
    for (int k = 0; k <= std::min(upto, d); ++k) {
        int deg = d - k;
        cplx rem = c[deg];
        for (int j = deg - 1; j >= 0; --j) {
            cplx qj = rem;
            rem = rem * w0 + c[j];
            c[j] = qj;
        }
        out[k] = rem;
        if (deg == 0) c[0] = 0.0;
    }
    return out;
}

std::vector<RootCluster> cluster_roots(std::span<const cplx> roots, double radius) {
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - sum / double(count)) <= radius) {
                sum += roots[j];
                ++count;
                used[j] = true;
            }
        }
        clusters.push_back({sum / double(count), count});
    }
    return clusters;
}

cplx cluster_residue(std::span<const cplx> denom_coeffs, const RootCluster& cluster,
                     std::span<const cplx> numer_taylor) {
    const int r = cluster.multiplicity;
    if ((int)numer_taylor.size() < r)
        throw std::invalid_argument("cluster_residue: need numerator Taylor to order r-1");
    // P(w) = (w-c)^r (p_r + p_{r+1} u + ...) with u = w - c.
    CVec taylor = poly_taylor(denom_coeffs, cluster.center, (int)denom_coeffs.size());
    CVec tail(r);
    for (int j = 0; j < r; ++j)
        tail[j] = (r + j < (int)taylor.size()) ? taylor[r + j] : cplx(0.0);
    if (std::abs(tail[0]) < 1e-300)
        throw RootFindingError("cluster_residue: vanishing leading fiber coefficient");
    // Series inverse q of tail to order r-1.
    CVec q(r, cplx(0.0));
    q[0] = 1.0 / tail[0];
    for (int k = 1; k < r; ++k) {
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += tail[j] * q[k - j];
        q[k] = -s / tail[0];
    }
    cplx res = 0.0;
    for (int k = 0; k < r; ++k) res += numer_taylor[k] * q[r - 1 - k];
    return res;
}

CVec wirtinger_derivs(const std::function<cplx(cplx)>& f, cplx w, int upto, double step) {
    CVec out(upto + 1);
    out[0] = f(w);
    if (upto >= 1) {
        cplx fx = (f(w + step) - f(w - step)) / (2.0 * step);
        cplx fy = (f(w + kI * step) - f(w - kI * step)) / (2.0 * step);
        out[1] = 0.5 * (fx - kI * fy);
    }
    if (upto >= 2) {
        // d^2/dw^2 via the 3x3 real stencil applied to the first Wirtinger
        // derivative; adequate for the multiplicity-3 fallback path.
        auto dw = [&](cplx p) {
            cplx gx = (f(p + step) - f(p - step)) / (2.0 * step);
            cplx gy = (f(p + kI * step) - f(p - kI * step)) / (2.0 * step);
            return 0.5 * (gx - kI * gy);
        };
        cplx hx = (dw(w + step) - dw(w - step)) / (2.0 * step);
        cplx hy = (dw(w + kI * step) - dw(w - kI * step)) / (2.0 * step);
        out[2] = 0.5 * (hx - kI * hy);
    }
    return out;
}

}  // namespace leray
