#ifndef LERAY_POLYNOMIAL_HPP
#define LERAY_POLYNOMIAL_HPP

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/complexvec.hpp"

namespace leray {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Graded lexicographic order on exponent vectors: total degree first,
/// then lexicographic. Fixed once so serialized polynomials are byte-stable.
struct GradedLexLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

/// Sparse multivariate polynomial with complex double coefficients.
/// Canonical form: no stored term has a zero coefficient.
class MultiPoly {
  public:
    using TermMap = std::map<std::vector<int>, cplx, GradedLexLess>;

    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(int nvars) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, cplx c);
    static MultiPoly variable(int nvars, int j);  // z_{j+1}, 0-based j

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;                 // total degree, -1 for the zero polynomial
    int degree_in(int j) const;         // max exponent of variable j
    bool is_homogeneous() const;

    void add_term(std::vector<int> exps, cplx c);

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly operator*(cplx c) const;

    cplx eval(std::span<const cplx> point) const;
    MultiPoly partial(int j) const;  // formal d/dz_{j+1}, 0-based j

    /// P~(z0,...,zn) homogeneous of degree d with P~(1,z') = P(z').
    /// The homogenizing variable is prepended as variable 0.
    MultiPoly homogenize(int d) const;
    /// Inverse of homogenize: substitutes variable 0 := 1 and drops it.
    MultiPoly dehomogenize() const;

    /// Partial evaluation: substitute numeric values for the variable block
    /// [first, first+vals.size()) and return a polynomial in the remaining vars.
    MultiPoly substitute_block(int first, std::span<const cplx> vals) const;

    /// Restriction to a line through `base` along coordinate axis `axis`:
    /// returns ascending coefficients of w -> P(base with base[axis] replaced by w).
    CVec restrict_axis(int axis, std::span<const cplx> base) const;

    std::string to_string() const;  // for reports and diagnostics

  private:
    int nvars_;
    TermMap terms_;
    cplx eval_sorted(const std::vector<std::pair<std::vector<int>, cplx>>& terms,
                     std::size_t lo, std::size_t hi, int var, std::span<const cplx> point) const;
};

/// Parses the expression grammar over variables z1..zn: complex literals
/// (e.g. 2, 1.5, 3i, 2+1i), operators + - * ^, parentheses, unary minus.
MultiPoly parse_poly(const std::string& expr, int nvars);

/// Allocation-free evaluator for hot loops: flat term list in graded-lex
/// order, powers by repeated multiplication.
struct CompiledPoly {
    int nvars = 0;
    CVec coeffs;
    std::vector<int> exps;  // nvars entries per term

    static CompiledPoly from(const MultiPoly& p);
    cplx eval(std::span<const cplx> point) const;
};

/// Hefer decomposition of P: polynomials Q_1..Q_n in 2n variables
/// (zeta_1..zeta_n, z_1..z_n) with P(zeta) - P(z) = sum_j (zeta_j - z_j) Q_j.
/// Uses the telescoping one-variable-at-a-time construction, which makes the
/// (non-unique) decomposition deterministic.
struct HeferDecomposition {
    MultiPoly source;                // in n variables
    std::vector<MultiPoly> components;  // n polynomials in 2n variables
};

HeferDecomposition hefer(const MultiPoly& p);

/// Evaluates a Hefer component at (zeta, z).
cplx eval_hefer(const MultiPoly& q, std::span<const cplx> zeta, std::span<const cplx> z);

}  // namespace leray

#endif
