#include "leray/rational.hpp"

#include <algorithm>
#include <cmath>

namespace leray {

RationalSum::RationalSum(int nvars, std::vector<PoleElement> elements)
    : nvars_(nvars), elements_(std::move(elements)) {
    for (const auto& e : elements_) {
        if ((int)e.base.size() != nvars_)
            throw std::invalid_argument("RationalSum: base dimension mismatch");
        if (e.order < 1) throw std::invalid_argument("RationalSum: order must be >= 1");
    }
    canonicalize();
}

RationalSum RationalSum::single(cplx coeff, CVec base, int order) {
    int n = (int)base.size();
    return RationalSum(n, {PoleElement{coeff, std::move(base), order}});
}

// Merge elements with identical (base, order), drop zero coefficients.
// Bases are compared exactly: elements come from exact scalar actions on
// shared base points, never from approximate arithmetic on the bases.
void RationalSum::canonicalize() {
    std::vector<PoleElement> out;
    for (const auto& e : elements_) {
        bool merged = false;
        for (auto& o : out) {
            if (o.order == e.order && o.base == e.base) {
                o.coeff += e.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(e);
    }
    std::erase_if(out, [](const PoleElement& e) { return e.coeff == 0.0; });
    elements_ = std::move(out);
}

RationalSum RationalSum::operator+(const RationalSum& o) const {
    if (!elements_.empty() && !o.elements_.empty() && nvars_ != o.nvars_)
        throw std::invalid_argument("RationalSum add: arity mismatch");
    std::vector<PoleElement> all = elements_;
    all.insert(all.end(), o.elements_.begin(), o.elements_.end());
    return RationalSum(elements_.empty() ? o.nvars_ : nvars_, std::move(all));
}

RationalSum RationalSum::operator*(cplx c) const {
    std::vector<PoleElement> all = elements_;
    for (auto& e : all) e.coeff *= c;
    return RationalSum(nvars_, std::move(all));
}

cplx RationalSum::eval(std::span<const cplx> xi, double pole_tol) const {
    if ((int)xi.size() != nvars_ + 1 && !elements_.empty())
        throw std::invalid_argument("RationalSum eval: xi must have length n+1");
    cplx total = 0.0;
    for (const auto& e : elements_) {
        cplx s = dual_pairing(xi, e.base);
        if (std::abs(s) < pole_tol)
            throw PoleProximity("RationalSum eval: denominator below pole_tol");
        cplx p = 1.0;
        for (int k = 0; k < e.order; ++k) p *= s;
        total += e.coeff / p;
    }
    return total;
}

RationalSum RationalSum::d_xi(int j) const {
    if (j < 0 || j > nvars_) throw std::out_of_range("d_xi: index out of range");
    std::vector<PoleElement> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        cplx aj = (j == 0) ? cplx(1.0) : e.base[j - 1];
        out.push_back({-double(e.order) * e.coeff * aj, e.base, e.order + 1});
    }
    return RationalSum(nvars_, std::move(out));
}

RationalSum RationalSum::antiderivative0() const {
    std::vector<PoleElement> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        if (e.order < 2)
            throw NonIntegrable("antiderivative0: order-1 element integrates to a logarithm");
        out.push_back({-e.coeff / double(e.order - 1), e.base, e.order - 1});
    }
    return RationalSum(nvars_, std::move(out));
}

RationalSum RationalSum::apply_D(int j) const {
    if (j < 1 || j > nvars_) throw std::out_of_range("apply_D: index out of range");
    std::vector<PoleElement> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_)
        out.push_back({-e.base[j - 1] * e.coeff, e.base, e.order});
    return RationalSum(nvars_, std::move(out));
}

RationalSum RationalSum::apply_poly_D(const MultiPoly& r) const {
    if (r.nvars() != nvars_) throw std::invalid_argument("apply_poly_D: R must have n variables");
    std::vector<PoleElement> out;
    out.reserve(elements_.size());
    CVec minus_a(nvars_);
    for (const auto& e : elements_) {
        for (int j = 0; j < nvars_; ++j) minus_a[j] = -e.base[j];
        out.push_back({r.eval(minus_a) * e.coeff, e.base, e.order});
    }
    return RationalSum(nvars_, std::move(out));
}

RationalSum RationalSum::apply_system(const MultiPoly& ptilde, double on_variety_tol) const {
    if (ptilde.nvars() != nvars_ + 1)
        throw std::invalid_argument("apply_system: P~ must have n+1 variables");
    if (!ptilde.is_homogeneous())
        throw std::invalid_argument("apply_system: P~ must be homogeneous");
    int d = std::max(ptilde.degree(), 0);
    std::vector<PoleElement> out;
    CVec atilde(nvars_ + 1);
    for (const auto& e : elements_) {
        atilde[0] = 1.0;
        std::copy(e.base.begin(), e.base.end(), atilde.begin() + 1);
        cplx v = ptilde.eval(atilde);
        if (std::abs(v) < on_variety_tol) continue;
        double rising = 1.0;
        for (int p = 0; p < d; ++p) rising *= double(e.order + p);
        double sign = (d % 2 == 0) ? 1.0 : -1.0;
        out.push_back({sign * rising * v * e.coeff, e.base, e.order + d});
    }
    return RationalSum(nvars_, std::move(out));
}

RationalSum RationalSum::eta0_deriv(int r) const {
    if (r < 0) throw std::invalid_argument("eta0_deriv: negative order");
    std::vector<PoleElement> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        double rising = 1.0;
        for (int p = 0; p < r; ++p) rising *= double(e.order + p);
        double sign = (r % 2 == 0) ? 1.0 : -1.0;
        out.push_back({sign * rising * e.coeff, e.base, e.order + r});
    }
    return RationalSum(nvars_, std::move(out));
}

}  // namespace leray
