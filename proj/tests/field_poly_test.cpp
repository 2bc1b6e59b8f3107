#include <doctest.h>

#include <random>

#include "grm/errors.hpp"
#include "grm/eval_table.hpp"
#include "grm/json_io.hpp"
#include "grm/polynomial.hpp"
#include "oracles.hpp"

using namespace grm;

TEST_SUITE_BEGIN("field_poly");

TEST_CASE("field params validate the prime") {
    CHECK_THROWS_AS(FieldParams(4), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(11), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(1), std::invalid_argument);
    for (int p : {2, 3, 5, 7}) CHECK(FieldParams(p).p() == p);
    FieldParams f5(5);
    CHECK(f5.mul(f5.inv(3), 3) == 1);
    CHECK_THROWS_AS(f5.inv(0), std::invalid_argument);
}

TEST_CASE("parse produces canonical reduced terms") {
    Polynomial f = Polynomial::parse("x1*x2 + 1", FieldParams(2), 2);
    CHECK(f.terms().size() == 2);
    CHECK(f.coefficient({1, 1}) == 1);
    CHECK(f.coefficient({0, 0}) == 1);

    Polynomial g = Polynomial::parse("x1^3", FieldParams(3), 1);
    CHECK(g == Polynomial::parse("x1", FieldParams(3), 1));  // Fermat reduction

    Polynomial h = Polynomial::parse("2*x1 + 4*x1", FieldParams(3), 1);
    CHECK(h.is_zero());
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(Polynomial::parse("x1 +", FieldParams(2), 2), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("x0", FieldParams(2), 2), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("x3", FieldParams(2), 2), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("x1 * * x2", FieldParams(2), 2), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("(x1", FieldParams(2), 2), ParseError);
}

TEST_CASE("evaluate matches the spec examples") {
    Polynomial f = Polynomial::parse("x1*x2 + 1", FieldParams(2), 2);
    CHECK(f.evaluate(Point{1, 1}) == 0);

    Polynomial g = Polynomial::parse("2*x1^2", FieldParams(3), 1);
    CHECK(g.evaluate(Point{2}) == 2);

    Polynomial zero(FieldParams(3), 2);
    CHECK(zero.evaluate(Point{1, 2}) == 0);

    CHECK_THROWS_AS(f.evaluate(Point{1}), std::invalid_argument);
}

TEST_CASE("tabulate lays points out with x1 least significant") {
    Polynomial f = Polynomial::parse("x1", FieldParams(2), 1);
    CHECK(EvaluationTable::tabulate(f).to_bytes() == std::vector<uint8_t>{0, 1});

    Polynomial g = Polynomial::parse("x1*x2", FieldParams(2), 2);
    CHECK(EvaluationTable::tabulate(g).to_bytes() == std::vector<uint8_t>{0, 0, 0, 1});

    Polynomial h = Polynomial::parse("x1", FieldParams(3), 1);
    CHECK(EvaluationTable::tabulate(h).to_bytes() == std::vector<uint8_t>{0, 1, 2});
}

TEST_CASE("tabulate reports the required size on budget overflow") {
    Polynomial f = Polynomial::parse("x1", FieldParams(2), 16);
    CHECK_THROWS_WITH_AS(EvaluationTable::tabulate(f, 16), doctest::Contains("8192"),
                         BudgetError);
}

TEST_CASE("total degree uses the reduced form and a ZERO marker") {
    CHECK(Polynomial::parse("x1*x2 + x3", FieldParams(2), 3).total_degree() == 2);
    CHECK(Polynomial::parse("x1^3", FieldParams(3), 1).total_degree() == 1);

    Polynomial zero(FieldParams(2), 2);
    TotalDegree deg = zero.total_degree();
    CHECK(deg.is_zero_polynomial());
    for (int r = 0; r < 5; ++r) CHECK(deg.at_most(r));
    CHECK_THROWS_AS(deg.value(), std::invalid_argument);
}

TEST_CASE("apply_affine matches the spec examples") {
    FieldParams f2(2);
    Polynomial x1 = Polynomial::parse("x1", f2, 2);
    AffineMap swap(f2, {{0, 1}, {1, 0}}, {0, 0});
    CHECK(apply_affine(x1, swap) == Polynomial::parse("x2", f2, 2));

    Polynomial prod = Polynomial::parse("x1*x2", f2, 2);
    AffineMap shift(f2, {{1, 0}, {0, 1}}, {1, 0});
    CHECK(apply_affine(prod, shift) == Polynomial::parse("x1*x2 + x2", f2, 2));

    FieldParams f3(3);
    Polynomial sq = Polynomial::parse("x1^2", f3, 1);
    AffineMap doubling(f3, {{2}}, {0});
    CHECK(apply_affine(sq, doubling) == sq);  // 4 = 1 mod 3

    CHECK_THROWS_AS(AffineMap(f2, {{1, 1}, {1, 1}}, {0, 0}), std::invalid_argument);
}

TEST_CASE("parse/print round trip on random polynomials") {
    std::mt19937_64 rng(7001);
    for (int p : {2, 3, 5, 7}) {
        FieldParams field(p);
        for (int i = 0; i < 40; ++i) {
            Polynomial f = test::random_polynomial(field, 3, 2, rng);
            CHECK(Polynomial::parse(f.str(), field, 3) == f);
        }
    }
}

TEST_CASE("eager reduction preserves the function") {
    std::mt19937_64 rng(7002);
    for (int p : {2, 3, 5}) {
        FieldParams field(p);
        const int m = 3;
        for (int trial = 0; trial < 20; ++trial) {
            // raw terms with exponents beyond p-1
            std::vector<std::pair<Exponents, int>> raw;
            std::uniform_int_distribution<int> exp_dist(0, 2 * p);
            std::uniform_int_distribution<int> coeff_dist(1, p - 1);
            Polynomial reduced(field, m);
            for (int t = 0; t < 4; ++t) {
                Exponents e(m);
                for (auto& v : e) v = static_cast<uint8_t>(exp_dist(rng));
                int c = coeff_dist(rng);
                raw.emplace_back(e, c);
                reduced.add_term(e, c);
            }
            uint64_t points = point_count(field, m);
            for (uint64_t idx = 0; idx < points; ++idx) {
                Point x = index_to_point(field, m, idx);
                int expected = 0;
                for (const auto& [e, c] : raw) {
                    int prod = c;
                    for (int i = 0; i < m; ++i) {
                        for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) {
                            prod = (prod * x[static_cast<size_t>(i)]) % p;
                        }
                    }
                    expected = (expected + prod) % p;
                }
                CHECK(reduced.evaluate(x) == expected);
            }
        }
    }
}

TEST_CASE("affine substitution preserves weight and never raises degree") {
    std::mt19937_64 rng(7003);
    for (int p : {2, 3}) {
        FieldParams field(p);
        for (int trial = 0; trial < 25; ++trial) {
            Polynomial f = test::random_polynomial(field, 3, 2, rng);
            AffineMap map = test::random_affine_map(field, 3, rng);
            Polynomial g = apply_affine(f, map);
            CHECK(EvaluationTable::tabulate(g).count_nonzero() ==
                  EvaluationTable::tabulate(f).count_nonzero());
            if (!f.total_degree().is_zero_polynomial()) {
                CHECK(g.total_degree().at_most(f.total_degree().value()));
            } else {
                CHECK(g.is_zero());
            }
        }
    }
}

TEST_CASE("incremental tabulation agrees with pointwise evaluation") {
    std::mt19937_64 rng(7004);
    for (int p : {2, 3, 5}) {
        FieldParams field(p);
        for (int m = 1; m <= (p == 2 ? 4 : 3); ++m) {
            for (int trial = 0; trial < 10; ++trial) {
                Polynomial f = test::random_polynomial(field, m, std::min(m, 2), rng);
                EvaluationTable t = EvaluationTable::tabulate(f);
                uint64_t points = point_count(field, m);
                for (uint64_t idx = 0; idx < points; ++idx) {
                    CHECK(t.get(idx) == f.evaluate(index_to_point(field, m, idx)));
                }
            }
        }
    }
}

TEST_CASE("monomial basis is graded lexicographic") {
    std::vector<Exponents> basis = monomial_basis(FieldParams(2), 2, 3);
    CHECK(basis.size() == 7);
    CHECK(basis[0] == Exponents{0, 0, 0});
    CHECK(basis[1] == Exponents{0, 0, 1});  // x3 before x1 in lex on exponent vectors
    CHECK(basis[3] == Exponents{1, 0, 0});
    int prev_degree = 0;
    for (const auto& e : basis) {
        int d = 0;
        for (uint8_t v : e) d += v;
        CHECK(d >= prev_degree);
        prev_degree = d;
    }
}

TEST_CASE("polynomial JSON round trip") {
    std::mt19937_64 rng(7005);
    for (int p : {2, 3, 7}) {
        FieldParams field(p);
        Polynomial f = test::random_polynomial(field, 3, 2, rng);
        CHECK(polynomial_from_json(to_json(f)) == f);
    }
}

TEST_SUITE_END();
