#include "grm/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "grm/errors.hpp"

namespace grm {

int TotalDegree::value() const {
    if (zero_poly_) throw std::invalid_argument("ZERO degree marker has no numeric value");
    return value_;
}

uint8_t reduce_exponent(long long e, int p) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e == 0) return 0;
    return static_cast<uint8_t>((e - 1) % (p - 1) + 1);
}

Polynomial::Polynomial(FieldParams field, int vars) : field_(field), vars_(vars) {
    if (vars < 0) throw std::invalid_argument("negative variable count");
}

Polynomial Polynomial::constant(FieldParams field, int vars, int value) {
    Polynomial f(field, vars);
    f.add_term(Exponents(static_cast<size_t>(vars), 0), value);
    return f;
}

Polynomial Polynomial::monomial(FieldParams field, int vars, const Exponents& exps, int coeff) {
    Polynomial f(field, vars);
    f.add_term(exps, coeff);
    return f;
}

Polynomial Polynomial::variable(FieldParams field, int vars, int index) {
    if (index < 1 || index > vars) throw std::invalid_argument("variable index out of range");
    Exponents e(static_cast<size_t>(vars), 0);
    e[static_cast<size_t>(index - 1)] = 1;
    return monomial(field, vars, e);
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 &&
           std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                       [](uint8_t e) { return e == 0; });
}

uint8_t Polynomial::coefficient(const Exponents& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_term(const Exponents& exps, int coeff) {
    if (exps.size() != static_cast<size_t>(vars_)) {
        throw std::invalid_argument("exponent vector length does not match variable count");
    }
    uint8_t c = field_.reduce(coeff);
    if (c == 0) return;
    Exponents reduced(exps.size());
    for (size_t i = 0; i < exps.size(); ++i) reduced[i] = reduce_exponent(exps[i], field_.p());
    auto [it, inserted] = terms_.try_emplace(std::move(reduced), c);
    if (!inserted) {
        uint8_t sum = field_.add(it->second, c);
        if (sum == 0)
            terms_.erase(it);
        else
            it->second = sum;
    }
}

uint8_t Polynomial::evaluate(std::span<const uint8_t> point) const {
    if (point.size() != static_cast<size_t>(vars_)) {
        throw std::invalid_argument("point dimension does not match variable count");
    }
    int acc = 0;
    for (const auto& [exps, coeff] : terms_) {
        int prod = coeff;
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] != 0) prod = (prod * field_.pow(point[i] % field_.p(), exps[i])) % field_.p();
        }
        acc += prod;
    }
    return field_.reduce(acc);
}

TotalDegree Polynomial::total_degree() const {
    if (terms_.empty()) return TotalDegree::zero_polynomial();
    int best = 0;
    for (const auto& [exps, coeff] : terms_) {
        (void)coeff;
        int d = 0;
        for (uint8_t e : exps) d += e;
        best = std::max(best, d);
    }
    return TotalDegree(best);
}

void Polynomial::check_compatible(const Polynomial& rhs) const {
    if (!(field_ == rhs.field_) || vars_ != rhs.vars_) {
        throw std::invalid_argument("polynomial operands have mismatched field or variable count");
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    check_compatible(rhs);
    for (const auto& [exps, coeff] : rhs.terms_) add_term(exps, coeff);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    check_compatible(rhs);
    for (const auto& [exps, coeff] : rhs.terms_) add_term(exps, field_.neg(coeff));
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    lhs.check_compatible(rhs);
    Polynomial out(lhs.field_, lhs.vars_);
    for (const auto& [ea, ca] : lhs.terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            Exponents e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<uint8_t>(ea[i] + eb[i]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::scaled(int c) const {
    Polynomial out(field_, vars_);
    for (const auto& [exps, coeff] : terms_) out.add_term(exps, coeff * c);
    return out;
}

bool Polynomial::operator==(const Polynomial& rhs) const {
    return field_ == rhs.field_ && vars_ == rhs.vars_ && terms_ == rhs.terms_;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [exps, coeff] : terms_) {
        if (!out.empty()) out += " + ";
        bool has_vars = std::any_of(exps.begin(), exps.end(), [](uint8_t e) { return e != 0; });
        bool wrote = false;
        if (coeff != 1 || !has_vars) {
            out += std::to_string(static_cast<int>(coeff));
            wrote = true;
        }
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            if (wrote) out += "*";
            out += "x" + std::to_string(i + 1);
            if (exps[i] > 1) out += "^" + std::to_string(static_cast<int>(exps[i]));
            wrote = true;
        }
    }
    return out;
}

namespace {

// Recursive-descent parser for the term grammar: terms joined by '+' or '-',
// each term a '*'-joined list of integer literals, variables x<i> with an
// optional '^' power, and parenthesized subexpressions.
class PolyParser {
   public:
    PolyParser(const std::string& text, FieldParams field, int vars)
        : text_(text), field_(field), vars_(vars) {}

    Polynomial parse() {
        Polynomial out = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return out;
    }

   private:
    Polynomial parse_expr() {
        skip_ws();
        bool negate = false;
        if (peek() == '-') {
            negate = true;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        Polynomial acc = parse_term();
        if (negate) acc = acc.scaled(-1);
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += parse_term();
            } else if (c == '-') {
                ++pos_;
                acc -= parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial parse_term() {
        Polynomial acc = parse_factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * parse_factor();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial parse_factor() {
        skip_ws();
        char c = peek();
        Polynomial base(field_, vars_);
        if (c == '(') {
            ++pos_;
            base = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            base = Polynomial::constant(field_, vars_, static_cast<int>(parse_int()));
        } else if (c == 'x') {
            ++pos_;
            long long idx = parse_int();
            if (idx < 1 || idx > vars_) {
                fail("variable index " + std::to_string(idx) + " outside [1, " +
                     std::to_string(vars_) + "]");
            }
            base = Polynomial::variable(field_, vars_, static_cast<int>(idx));
        } else {
            fail("expected a factor");
        }
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            long long e = parse_int();
            Polynomial acc = Polynomial::constant(field_, vars_, 1);
            for (long long i = 0; i < e; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    long long parse_int() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 9) fail("integer literal too long");
        return std::stoll(text_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("polynomial syntax error at offset " + std::to_string(pos_) + ": " + why);
    }

    const std::string& text_;
    FieldParams field_;
    int vars_;
    size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, FieldParams field, int vars) {
    return PolyParser(text, field, vars).parse();
}

bool is_invertible(const FieldParams& field, const std::vector<std::vector<uint8_t>>& matrix) {
    size_t n = matrix.size();
    std::vector<std::vector<uint8_t>> a = matrix;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] % field.p() == 0) ++pivot;
        if (pivot == n) return false;
        std::swap(a[col], a[pivot]);
        uint8_t inv = field.inv(a[col][col]);
        for (size_t row = col + 1; row < n; ++row) {
            uint8_t factor = field.mul(a[row][col], inv);
            if (factor == 0) continue;
            for (size_t k = col; k < n; ++k) {
                a[row][k] = field.sub(a[row][k], field.mul(factor, a[col][k]));
            }
        }
    }
    return true;
}

AffineMap::AffineMap(FieldParams field, std::vector<std::vector<uint8_t>> linear, Point translation)
    : field_(field),
      vars_(static_cast<int>(linear.size())),
      linear_(std::move(linear)),
      translation_(std::move(translation)) {
    for (auto& row : linear_) {
        if (row.size() != static_cast<size_t>(vars_)) {
            throw std::invalid_argument("affine map linear part is not square");
        }
        for (auto& v : row) v = field_.reduce(v);
    }
    if (translation_.size() != static_cast<size_t>(vars_)) {
        throw std::invalid_argument("affine map translation has wrong dimension");
    }
    for (auto& v : translation_) v = field_.reduce(v);
    if (!is_invertible(field_, linear_)) {
        throw std::invalid_argument("affine map has singular linear part");
    }
}

AffineMap AffineMap::identity(FieldParams field, int vars) {
    std::vector<std::vector<uint8_t>> linear(static_cast<size_t>(vars),
                                             std::vector<uint8_t>(static_cast<size_t>(vars), 0));
    for (int i = 0; i < vars; ++i) linear[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    return AffineMap(field, std::move(linear), Point(static_cast<size_t>(vars), 0));
}

Point AffineMap::map_point(std::span<const uint8_t> x) const {
    if (x.size() != static_cast<size_t>(vars_)) {
        throw std::invalid_argument("point dimension does not match affine map");
    }
    Point y(static_cast<size_t>(vars_));
    for (size_t i = 0; i < y.size(); ++i) {
        int acc = translation_[i];
        for (size_t j = 0; j < y.size(); ++j) acc += linear_[i][j] * x[j];
        y[i] = field_.reduce(acc);
    }
    return y;
}

Polynomial apply_affine(const Polynomial& f, const AffineMap& map) {
    if (map.vars() != f.vars() || !(map.field() == f.field())) {
        throw std::invalid_argument("affine map dimension does not match polynomial");
    }
    const FieldParams& field = f.field();
    int m = f.vars();
    // Substitution images x_i -> sum_j A_ij x_j + b_i.
    std::vector<Polynomial> image;
    image.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        Polynomial row(field, m);
        for (int j = 0; j < m; ++j) {
            uint8_t a = map.linear()[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (a != 0) {
                Exponents e(static_cast<size_t>(m), 0);
                e[static_cast<size_t>(j)] = 1;
                row.add_term(e, a);
            }
        }
        row.add_term(Exponents(static_cast<size_t>(m), 0), map.translation()[static_cast<size_t>(i)]);
        image.push_back(std::move(row));
    }
    Polynomial out(field, m);
    for (const auto& [exps, coeff] : f.terms()) {
        Polynomial prod = Polynomial::constant(field, m, coeff);
        for (size_t i = 0; i < exps.size(); ++i) {
            for (uint8_t e = 0; e < exps[i]; ++e) prod = prod * image[i];
        }
        out += prod;
    }
    return out;
}

std::vector<Exponents> monomial_basis(FieldParams field, int order, int vars) {
    if (order < 0) throw std::invalid_argument("negative order");
    std::vector<Exponents> basis;
    Exponents current(static_cast<size_t>(vars), 0);
    // Odometer over exponent vectors, bucketed by total degree for the
    // graded part of the order.
    std::vector<std::vector<Exponents>> by_degree(static_cast<size_t>(order) + 1);
    while (true) {
        int deg = 0;
        for (uint8_t e : current) deg += e;
        if (deg <= order) by_degree[static_cast<size_t>(deg)].push_back(current);
        size_t i = 0;
        while (i < current.size() && current[i] == field.p() - 1) {
            current[i] = 0;
            ++i;
        }
        if (i == current.size()) break;
        ++current[i];
    }
    for (auto& bucket : by_degree) {
        std::sort(bucket.begin(), bucket.end());
        for (auto& e : bucket) basis.push_back(std::move(e));
    }
    return basis;
}

}  // namespace grm
