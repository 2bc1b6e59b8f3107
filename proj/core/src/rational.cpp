#include "grm/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "grm/errors.hpp"

namespace grm {

std::string rational_str(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational");
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!is_int(num) || !is_int(den)) {
        throw ParseError("not an exact rational: '" + text + "' (expected a/b with integers)");
    }
    BigInt n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational abs_diff(const Rational& a, const Rational& b) {
    Rational d = a - b;
    return d < 0 ? Rational(-d) : d;
}

PExactRational PExactRational::from_fraction(const BigInt& count, int p, unsigned k) {
    if (count < 0) throw std::invalid_argument("negative weight count");
    PExactRational out;
    out.p = p;
    if (count == 0) {
        out.numerator = 0;
        out.p_exponent = 0;
        return out;
    }
    BigInt n = count;
    unsigned e = k;
    while (e > 0 && mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
        n /= p;
        --e;
    }
    out.numerator = n;
    out.p_exponent = e;
    return out;
}

Rational PExactRational::to_rational() const {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), p_exponent);
    Rational q(numerator, den);
    q.canonicalize();
    return q;
}

TargetValue TargetValue::parse(const std::string& text) {
    return from_rational(parse_rational(text));
}

TargetValue TargetValue::from_rational(const Rational& q) {
    if (q < 0 || q > 1) {
        throw std::invalid_argument("target value " + rational_str(q) + " outside [0, 1]");
    }
    TargetValue t;
    t.value = q;
    t.value.canonicalize();
    return t;
}

}  // namespace grm
