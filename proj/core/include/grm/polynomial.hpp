#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "grm/field.hpp"

namespace grm {

/// Exponent vector of a monomial: length m, entries in [0, p-1] after
/// reduction by x^p = x. std::vector's lexicographic < makes term maps
/// canonically ordered.
using Exponents = std::vector<uint8_t>;
using Point = std::vector<uint8_t>;

/// Total degree with a distinguished marker for the zero polynomial. The
/// marker satisfies ZERO <= r for every r >= 0, so "degree <= r" membership
/// tests need no sentinel arithmetic.
class TotalDegree {
   public:
    static TotalDegree zero_polynomial() { return TotalDegree(true, 0); }
    explicit TotalDegree(int d) : TotalDegree(false, d) {}

    bool is_zero_polynomial() const { return zero_poly_; }
    int value() const;  // throws on the ZERO marker
    bool at_most(int r) const { return zero_poly_ || value_ <= r; }

    friend bool operator==(const TotalDegree& a, const TotalDegree& b) {
        return a.zero_poly_ == b.zero_poly_ && (a.zero_poly_ || a.value_ == b.value_);
    }
    friend bool operator==(const TotalDegree& a, int r) { return !a.zero_poly_ && a.value_ == r; }

    std::string str() const { return zero_poly_ ? "ZERO" : std::to_string(value_); }

   private:
    TotalDegree(bool zero_poly, int value) : zero_poly_(zero_poly), value_(value) {}
    bool zero_poly_;
    int value_;
};

/// Sparse reduced multivariate polynomial over F_p, stored in the ring
/// F_p[x_1..x_m]/(x_i^p - x_i). Reduction is eager: codewords are functions
/// on F_p^m and degrees always mean reduced total degree. No zero
/// coefficients are stored; equality is term-map equality.
class Polynomial {
   public:
    Polynomial(FieldParams field, int vars);

    static Polynomial parse(const std::string& text, FieldParams field, int vars);
    static Polynomial constant(FieldParams field, int vars, int value);
    static Polynomial monomial(FieldParams field, int vars, const Exponents& exps, int coeff = 1);
    static Polynomial variable(FieldParams field, int vars, int index);  // 1-based index

    const FieldParams& field() const { return field_; }
    int vars() const { return vars_; }
    const std::map<Exponents, uint8_t>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;  // true for the zero polynomial too
    uint8_t coefficient(const Exponents& exps) const;

    /// Adds coeff * x^exps (exponents reduced by x^p = x, coefficient mod p),
    /// cancelling the term if the resulting coefficient is 0.
    void add_term(const Exponents& exps, int coeff);

    uint8_t evaluate(std::span<const uint8_t> point) const;
    TotalDegree total_degree() const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
    Polynomial scaled(int c) const;

    bool operator==(const Polynomial& rhs) const;

    /// Canonical rendering; parse(str()) == *this. The zero polynomial
    /// prints as "0".
    std::string str() const;

   private:
    void check_compatible(const Polynomial& rhs) const;

    FieldParams field_;
    int vars_;
    std::map<Exponents, uint8_t> terms_;
};

/// Reduces an exponent by x^p = x as functions on F_p: 0 stays 0, otherwise
/// the representative in [1, p-1] congruent mod p-1.
uint8_t reduce_exponent(long long e, int p);

/// Invertible affine change of variables x -> A x + b. Weight-preserving:
/// tabulating f(A x + b) permutes the table of f.
class AffineMap {
   public:
    AffineMap(FieldParams field, std::vector<std::vector<uint8_t>> linear, Point translation);
    static AffineMap identity(FieldParams field, int vars);

    const FieldParams& field() const { return field_; }
    int vars() const { return vars_; }
    const std::vector<std::vector<uint8_t>>& linear() const { return linear_; }
    const Point& translation() const { return translation_; }

    Point map_point(std::span<const uint8_t> x) const;

   private:
    FieldParams field_;
    int vars_;
    std::vector<std::vector<uint8_t>> linear_;
    Point translation_;
};

/// Substitutes x_i -> (A x + b)_i and re-reduces. Degree never grows and the
/// value table of the result is a permutation of f's.
Polynomial apply_affine(const Polynomial& f, const AffineMap& map);

/// Determinant-based invertibility test used by AffineMap validation.
bool is_invertible(const FieldParams& field, const std::vector<std::vector<uint8_t>>& matrix);

/// All reduced monomials with total degree <= order in graded-lex order
/// (degree first, then exponent vector lexicographically). Index 0 is the
/// constant monomial. This fixed order is the coefficient-vector layout used
/// by spectrum enumeration and decomposition searches.
std::vector<Exponents> monomial_basis(FieldParams field, int order, int vars);

}  // namespace grm
