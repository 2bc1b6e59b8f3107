#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace grm {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Canonical "a/b" rendering ("a" when the denominator is 1). No machine
/// output ever carries a floating-point number.
std::string rational_str(const Rational& q);

/// Parses "a/b" or "a" with integer a, b. Anything else (decimal points,
/// exponents, whitespace junk) is a ParseError: p-rationality is undecidable
/// from a float, so only exact inputs are accepted.
Rational parse_rational(const std::string& text);

Rational abs_diff(const Rational& a, const Rational& b);

/// A relative weight ell / p^k in canonical form: p does not divide ell
/// unless ell = 0 (and then k = 0).
struct PExactRational {
    BigInt numerator;        // ell >= 0
    unsigned p_exponent = 0; // k
    int p = 2;

    static PExactRational from_fraction(const BigInt& count, int p, unsigned k);

    Rational to_rational() const;
    std::string str() const { return rational_str(to_rational()); }

    friend bool operator==(const PExactRational& a, const PExactRational& b) {
        return a.to_rational() == b.to_rational();
    }
    friend bool operator<(const PExactRational& a, const PExactRational& b) {
        return a.to_rational() < b.to_rational();
    }
};

/// An exact rational target alpha in [0, 1].
struct TargetValue {
    Rational value;

    static TargetValue parse(const std::string& text);
    static TargetValue from_rational(const Rational& q);

    std::string str() const { return rational_str(value); }
};

}  // namespace grm
