#include "leray/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace leray {

bool GradedLexLess::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly MultiPoly::constant(int nvars, cplx c) {
    MultiPoly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int j) {
    if (j < 0 || j >= nvars) throw std::out_of_range("MultiPoly::variable: index out of range");
    MultiPoly p(nvars);
    std::vector<int> e(nvars, 0);
    e[j] = 1;
    p.add_term(std::move(e), 1.0);
    return p;
}

int MultiPoly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

int MultiPoly::degree_in(int j) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[j]);
    return d;
}

bool MultiPoly::is_homogeneous() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int de = std::accumulate(e.begin(), e.end(), 0);
        if (d < 0) d = de;
        else if (de != d) return false;
    }
    return true;
}

void MultiPoly::add_term(std::vector<int> exps, cplx c) {
    if ((int)exps.size() != nvars_) throw std::invalid_argument("add_term: exponent arity mismatch");
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        if (c != 0.0) terms_.emplace(std::move(exps), c);
    } else {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly add: arity mismatch");
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly sub: arity mismatch");
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(cplx c) const {
    MultiPoly r(nvars_);
    if (c == 0.0) return r;
    for (const auto& [e, co] : terms_) r.terms_.emplace(e, co * c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly mul: arity mismatch");
    MultiPoly r(nvars_);
    std::vector<int> e(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (int j = 0; j < nvars_; ++j) e[j] = ea[j] + eb[j];
            r.add_term(e, ca * cb);
        }
    return r;
}

// Recursive Horner over the lexicographically sorted term list: group by the
// exponent of `var`, descending, and nest the remaining variables.
cplx MultiPoly::eval_sorted(const std::vector<std::pair<std::vector<int>, cplx>>& terms,
                            std::size_t lo, std::size_t hi, int var,
                            std::span<const cplx> point) const {
    if (var == nvars_) return terms[lo].second;  // single constant term remains
    // terms[lo..hi) sorted descending by exponent of `var` (then recursively).
    cplx acc = 0.0;
    int prev_exp = terms[lo].first[var];
    std::size_t group = lo;
    for (std::size_t k = lo; k <= hi; ++k) {
        if (k == hi || terms[k].first[var] != prev_exp) {
            cplx inner = eval_sorted(terms, group, k, var + 1, point);
            int next_exp = (k == hi) ? 0 : terms[k].first[var];
            acc += inner;
            for (int p = 0; p < prev_exp - next_exp; ++p) acc *= point[var];
            if (k == hi) break;
            prev_exp = next_exp;
            group = k;
        }
    }
    return acc;
}

cplx MultiPoly::eval(std::span<const cplx> point) const {
    if ((int)point.size() != nvars_) throw std::invalid_argument("poly eval: dimension mismatch");
    if (terms_.empty()) return 0.0;
    std::vector<std::pair<std::vector<int>, cplx>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(b.first.begin(), b.first.end(),
                                            a.first.begin(), a.first.end());
    });
    return eval_sorted(sorted, 0, sorted.size(), 0, point);
}

MultiPoly MultiPoly::partial(int j) const {
    if (j < 0 || j >= nvars_) throw std::out_of_range("partial: variable index out of range");
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[j] == 0) continue;
        std::vector<int> d = e;
        d[j] -= 1;
        r.add_term(std::move(d), c * double(e[j]));
    }
    return r;
}

MultiPoly MultiPoly::homogenize(int d) const {
    if (d < degree()) throw std::invalid_argument("homogenize: degree below deg p");
    MultiPoly r(nvars_ + 1);
    for (const auto& [e, c] : terms_) {
        std::vector<int> h(nvars_ + 1);
        int de = std::accumulate(e.begin(), e.end(), 0);
        h[0] = d - de;
        std::copy(e.begin(), e.end(), h.begin() + 1);
        r.add_term(std::move(h), c);
    }
    return r;
}

MultiPoly MultiPoly::dehomogenize() const {
    if (nvars_ < 1) throw std::invalid_argument("dehomogenize: needs at least one variable");
    MultiPoly r(nvars_ - 1);
    for (const auto& [e, c] : terms_)
        r.add_term(std::vector<int>(e.begin() + 1, e.end()), c);
    return r;
}

MultiPoly MultiPoly::substitute_block(int first, std::span<const cplx> vals) const {
    int nsub = (int)vals.size();
    if (first < 0 || first + nsub > nvars_) throw std::invalid_argument("substitute_block: range");
    MultiPoly r(nvars_ - nsub);
    std::vector<int> rest(nvars_ - nsub);
    for (const auto& [e, c] : terms_) {
        cplx f = c;
        for (int j = 0; j < nsub; ++j)
            for (int p = 0; p < e[first + j]; ++p) f *= vals[j];
        int k = 0;
        for (int j = 0; j < nvars_; ++j)
            if (j < first || j >= first + nsub) rest[k++] = e[j];
        r.add_term(rest, f);
    }
    return r;
}

CVec MultiPoly::restrict_axis(int axis, std::span<const cplx> base) const {
    if ((int)base.size() != nvars_) throw std::invalid_argument("restrict_axis: base dimension");
    CVec coeffs(std::max(degree_in(axis) + 1, 1), cplx(0.0));
    for (const auto& [e, c] : terms_) {
        cplx f = c;
        for (int j = 0; j < nvars_; ++j) {
            if (j == axis) continue;
            for (int p = 0; p < e[j]; ++p) f *= base[j];
        }
        coeffs[e[axis]] += f;
    }
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    return coeffs;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        for (int j = 0; j < nvars_; ++j)
            if (e[j] > 0) {
                os << "*z" << (j + 1);
                if (e[j] > 1) os << "^" << e[j];
            }
    }
    return os.str();
}

CompiledPoly CompiledPoly::from(const MultiPoly& p) {
    CompiledPoly c;
    c.nvars = p.nvars();
    for (const auto& [e, co] : p.terms()) {
        c.coeffs.push_back(co);
        c.exps.insert(c.exps.end(), e.begin(), e.end());
    }
    return c;
}

cplx CompiledPoly::eval(std::span<const cplx> point) const {
    cplx total = 0.0;
    const int* e = exps.data();
    for (std::size_t t = 0; t < coeffs.size(); ++t, e += nvars) {
        cplx v = coeffs[t];
        for (int j = 0; j < nvars; ++j)
            for (int p = 0; p < e[j]; ++p) v *= point[j];
        total += v;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class Parser {
  public:
    Parser(const std::string& s, int nvars) : s_(s), nvars_(nvars) {}

    MultiPoly parse() {
        MultiPoly p = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return p;
    }

  private:
    const std::string& s_;
    int nvars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    MultiPoly expr() {
        MultiPoly p = accept('-') ? -term() : term();
        for (;;) {
            if (accept('+')) p = p + term();
            else if (accept('-')) p = p - term();
            else return p;
        }
    }

    MultiPoly term() {
        MultiPoly p = factor();
        for (;;) {
            if (accept('*')) p = p * factor();
            else return p;
        }
    }

    MultiPoly factor() {
        MultiPoly base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            int e = 0;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
                e = e * 10 + (s_[pos_++] - '0');
            if (pos_ == start) throw ParseError("expected integer exponent", pos_);
            MultiPoly p = MultiPoly::constant(nvars_, 1.0);
            for (int k = 0; k < e; ++k) p = p * base;
            return p;
        }
        return base;
    }

    MultiPoly atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly p = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return p;
        }
        if (c == '-') { ++pos_; return -atom(); }
        if (c == 'z') return variable_atom();
        if (c == 'i' && !follows_digit()) { ++pos_; return MultiPoly::constant(nvars_, kI); }
        if (std::isdigit((unsigned char)c) || c == '.') return number_atom();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    bool follows_digit() {
        return pos_ + 1 < s_.size() && std::isalnum((unsigned char)s_[pos_ + 1]);
    }

    MultiPoly variable_atom() {
        std::size_t at = pos_;
        ++pos_;  // 'z'
        std::size_t start = pos_;
        long idx = 0;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
            idx = idx * 10 + (s_[pos_++] - '0');
        if (pos_ == start) throw ParseError("expected variable index after 'z'", at);
        if (idx < 1 || idx > nvars_) throw ParseError("variable index out of range", at);
        return MultiPoly::variable(nvars_, (int)idx - 1);
    }

    MultiPoly number_atom() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit((unsigned char)s_[pos_]) || s_[pos_] == '.' ||
                ((s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
                 (std::isdigit((unsigned char)s_[pos_ + 1]) || s_[pos_ + 1] == '+' || s_[pos_ + 1] == '-')) ||
                ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
                 (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
            ++pos_;
        double v;
        try {
            v = std::stod(s_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            throw ParseError("malformed number", start);
        }
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return MultiPoly::constant(nvars_, cplx(0.0, v));
        }
        return MultiPoly::constant(nvars_, cplx(v, 0.0));
    }
};

}  // namespace

MultiPoly parse_poly(const std::string& expr, int nvars) {
    if (nvars < 0) throw std::invalid_argument("parse_poly: negative arity");
    return Parser(expr, nvars).parse();
}

// ---------------------------------------------------------------------------
// Hefer decomposition

// Telescoping construction. With prefixes of z substituted one variable at a
// time, the j-th difference P(z_<j, zeta_j, zeta_>j) - P(z_<=j, zeta_>j) is
// divisible by (zeta_j - z_j); the quotient comes from the identity
// a^d - b^d = (a - b) * sum_{i<d} a^i b^{d-1-i}, term by term.
HeferDecomposition hefer(const MultiPoly& p) {
    const int n = p.nvars();
    HeferDecomposition out;
    out.source = p;
    out.components.reserve(n);
    for (int j = 0; j < n; ++j) {
        MultiPoly q(2 * n);
        for (const auto& [e, c] : p.terms()) {
            int d = e[j];
            if (d == 0) continue;
            // Shared factor: zeta for variables > j, z for variables < j.
            std::vector<int> base(2 * n, 0);
            for (int k = 0; k < n; ++k) {
                if (k < j) base[n + k] = e[k];        // z_k
                else if (k > j) base[k] = e[k];       // zeta_k
            }
            for (int i = 0; i < d; ++i) {
                std::vector<int> t = base;
                t[j] = i;                // zeta_j^i
                t[n + j] = d - 1 - i;    // z_j^{d-1-i}
                q.add_term(std::move(t), c);
            }
        }
        out.components.push_back(std::move(q));
    }
    return out;
}

cplx eval_hefer(const MultiPoly& q, std::span<const cplx> zeta, std::span<const cplx> z) {
    if (q.nvars() != (int)(zeta.size() + z.size()))
        throw std::invalid_argument("eval_hefer: dimension mismatch");
    CVec point(zeta.begin(), zeta.end());
    point.insert(point.end(), z.begin(), z.end());
    return q.eval(point);
}

}  // namespace leray
