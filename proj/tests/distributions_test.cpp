#include <doctest.h>

#include <random>

#include "grm/distributions.hpp"
#include "grm/json_io.hpp"
#include "oracles.hpp"

using namespace grm;

namespace {

Distribution random_distribution(FieldParams field, int arity, std::mt19937_64& rng) {
    uint64_t n = point_count(field, arity);
    std::uniform_int_distribution<unsigned long> den_dist(1, 60);
    unsigned long den = den_dist(rng);
    // n nonnegative integer masses summing to den, by random cuts
    std::vector<unsigned long> cuts;
    std::uniform_int_distribution<unsigned long> cut_dist(0, den);
    for (uint64_t i = 0; i + 1 < n; ++i) cuts.push_back(cut_dist(rng));
    cuts.push_back(0);
    cuts.push_back(den);
    std::sort(cuts.begin(), cuts.end());
    Distribution d{field, arity, {}};
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rational mass(cuts[i + 1] - cuts[i], den);
        mass.canonicalize();
        d.masses.push_back(std::move(mass));
    }
    d.validate();
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("distributions");

TEST_CASE("distribution_of on the transcription examples") {
    FieldParams f2(2);
    std::vector<Polynomial> single{Polynomial::parse("x1", f2, 1)};
    Distribution d1 = distribution_of(single);
    CHECK(d1.masses == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

    std::vector<Polynomial> product{Polynomial::parse("x1*x2", f2, 2)};
    Distribution d2 = distribution_of(product);
    CHECK(d2.masses == std::vector<Rational>{Rational(3, 4), Rational(1, 4)});

    std::vector<Polynomial> pair{Polynomial::parse("x1", f2, 1),
                                 Polynomial::parse("x1 + 1", f2, 1)};
    Distribution d3 = distribution_of(pair);
    // index = first + 2 * second
    CHECK(d3.masses == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)});
}

TEST_CASE("statistical distance basics") {
    FieldParams f2(2);
    std::vector<Polynomial> product{Polynomial::parse("x1*x2", f2, 2)};
    Distribution d = distribution_of(product);
    CHECK(statistical_distance(d, uniform_distribution(f2, 1)) == Rational(1, 4));
    CHECK(statistical_distance(d, d) == 0);

    FieldParams f3(3);
    CHECK(statistical_distance(uniform_distribution(f3, 1), point_mass(f3, 1, 0)) ==
          Rational(2, 3));

    CHECK_THROWS_AS(statistical_distance(d, uniform_distribution(f3, 1)), std::invalid_argument);
}

TEST_CASE("distinguisher gaps are bounded by the statistical distance") {
    FieldParams f2(2);
    std::vector<Polynomial> product{Polynomial::parse("x1*x2", f2, 2)};
    Distribution d = distribution_of(product);
    Distribution u2 = uniform_distribution(f2, 1);
    std::vector<uint64_t> ones{1};
    DistinguisherResult r1 = distinguisher_gap(d, u2, ones);
    CHECK(r1.gap == Rational(1, 4));
    CHECK(r1.bound_ok);

    std::vector<uint64_t> full{0, 1};
    DistinguisherResult r2 = distinguisher_gap(d, u2, full);
    CHECK(r2.gap == 0);
    CHECK(r2.bound_ok);

    FieldParams f3(3);
    std::vector<uint64_t> zero{0};
    DistinguisherResult r3 = distinguisher_gap(uniform_distribution(f3, 1), point_mass(f3, 1, 0), zero);
    CHECK(r3.gap == Rational(2, 3));
    CHECK(r3.bound_ok);
}

TEST_CASE("random exact triples always satisfy the distinguisher bound") {
    std::mt19937_64 rng(9301);
    for (int trial = 0; trial < 300; ++trial) {
        int p = trial % 2 == 0 ? 2 : 3;
        int c = 1 + static_cast<int>(rng() % 3);
        FieldParams field(p);
        Distribution d1 = random_distribution(field, c, rng);
        Distribution d2 = random_distribution(field, c, rng);
        uint64_t n = point_count(field, c);
        std::vector<uint64_t> subset;
        for (uint64_t s = 0; s < n; ++s) {
            if (rng() & 1) subset.push_back(s);
        }
        CHECK(distinguisher_gap(d1, d2, subset).bound_ok);
    }
}

TEST_CASE("statistical distance is a metric on random triples") {
    std::mt19937_64 rng(9302);
    for (int trial = 0; trial < 100; ++trial) {
        FieldParams field(trial % 2 == 0 ? 2 : 3);
        int c = 1 + static_cast<int>(rng() % 2);
        Distribution a = random_distribution(field, c, rng);
        Distribution b = random_distribution(field, c, rng);
        Distribution d = random_distribution(field, c, rng);
        CHECK(statistical_distance(a, b) == statistical_distance(b, a));
        CHECK(statistical_distance(a, d) <=
              statistical_distance(a, b) + statistical_distance(b, d));
        CHECK((statistical_distance(a, b) == 0) == (a.masses == b.masses));
    }
}

TEST_CASE("joint distributions have consistent marginals") {
    std::mt19937_64 rng(9303);
    for (int p : {2, 3}) {
        FieldParams field(p);
        for (int trial = 0; trial < 10; ++trial) {
            Polynomial f = test::random_polynomial(field, 3, 2, rng);
            Polynomial g = test::random_polynomial(field, 3, 2, rng);
            std::vector<Polynomial> pair{f, g};
            std::vector<Polynomial> single{f};
            Distribution joint = distribution_of(pair);
            Distribution marginal = distribution_of(single);
            for (int a = 0; a < p; ++a) {
                Rational sum(0);
                for (int b = 0; b < p; ++b) {
                    sum += joint.masses[static_cast<size_t>(a + p * b)];
                }
                CHECK(sum == marginal.masses[static_cast<size_t>(a)]);
            }
        }
    }
}

TEST_CASE("masses of polynomial distributions sum to one with denominator p^m") {
    std::mt19937_64 rng(9304);
    for (int p : {2, 3, 5}) {
        FieldParams field(p);
        Polynomial f = test::random_polynomial(field, 2, 2, rng);
        std::vector<Polynomial> fs{f};
        Distribution d = distribution_of(fs);
        d.validate();
        BigInt pm(static_cast<unsigned long>(point_count(field, 2)));
        for (const auto& mass : d.masses) {
            CHECK(mpz_divisible_p(pm.get_mpz_t(), mass.get_den().get_mpz_t()));
        }
    }
}

TEST_CASE("combination uniformity check on the transcription examples") {
    FieldParams f2(2);
    std::vector<Polynomial> independent{Polynomial::parse("x1", f2, 2),
                                        Polynomial::parse("x2", f2, 2)};
    ComboUniformityReport r1 = combo_uniformity_check(independent, Rational(1, 10));
    for (const auto& row : r1.per_combination) CHECK(row.distance == 0);
    CHECK(r1.joint_distance == 0);
    CHECK(r1.factor_ok);

    std::vector<Polynomial> degenerate{Polynomial::parse("x1", f2, 1),
                                       Polynomial::parse("x1 + 1", f2, 1)};
    ComboUniformityReport r2 = combo_uniformity_check(degenerate, Rational(1, 10));
    REQUIRE(r2.per_combination.size() == 3);
    CHECK(r2.per_combination[2].coeffs == std::vector<uint8_t>{1, 1});
    CHECK(r2.per_combination[2].distance == Rational(1, 2));  // the constant 1
    CHECK(r2.joint_distance == Rational(1, 2));
    CHECK(r2.factor_ok);  // premise fails, implication holds

    std::vector<Polynomial> regular{Polynomial::parse("x1*x2 + x3*x4 + x5*x6", f2, 7),
                                    Polynomial::parse("x7", f2, 7)};
    ComboUniformityReport r3 = combo_uniformity_check(regular, Rational(1, 4));
    CHECK(r3.factor_ok);
    CHECK(r3.per_combination[0].distance == Rational(1, 16));  // bias of a rank-6 quadratic
    CHECK(r3.per_combination[1].distance == 0);
    CHECK(r3.joint_distance == Rational(1, 16));
}

TEST_CASE("best approximation finds exact witnesses for realizable targets") {
    Distribution coin{FieldParams(2), 1, {Rational(1, 2), Rational(1, 2)}};
    ApproximationResult r1 = best_approximation(coin, 1, 1);
    CHECK(r1.best_distance == 0);
    CHECK(approximation_witness(r1.per_degree.back(), FieldParams(2)) ==
          Polynomial::parse("x1", FieldParams(2), 1));

    ApproximationResult r2 = best_approximation(uniform_distribution(FieldParams(3), 1), 1, 1);
    CHECK(r2.best_distance == 0);
    CHECK(approximation_witness(r2.per_degree.back(), FieldParams(3)) ==
          Polynomial::parse("x1", FieldParams(3), 1));
}

TEST_CASE("best approximation against a non-3-rational target") {
    Distribution target{FieldParams(3), 1, {Rational(1, 2), Rational(1, 2), Rational(0)}};
    ApproximationResult linear = best_approximation(target, 1, 3);
    CHECK(linear.best_distance == Rational(1, 3));

    // non-increasing in both caps
    ApproximationResult wider = best_approximation(target, 2, 3);
    CHECK(wider.best_distance <= linear.best_distance);
    CHECK(wider.best_distance > 0);
    ApproximationResult narrower = best_approximation(target, 1, 2);
    CHECK(linear.best_distance <= narrower.best_distance);

    Rational prev(2);
    for (const auto& slice : wider.per_degree) {
        CHECK(slice.best_distance <= prev);
        prev = slice.best_distance;
    }
}

TEST_CASE("distribution_of rejects mismatched polynomial tuples") {
    std::vector<Polynomial> mixed{Polynomial::parse("x1", FieldParams(2), 1),
                                  Polynomial::parse("x1", FieldParams(2), 2)};
    CHECK_THROWS_AS(distribution_of(mixed), std::invalid_argument);
    std::vector<Polynomial> empty;
    CHECK_THROWS_AS(distribution_of(empty), std::invalid_argument);
}

TEST_CASE("best approximation reports a partial frontier under tight budgets") {
    Distribution target{FieldParams(3), 1, {Rational(1, 2), Rational(1, 2), Rational(0)}};
    EnumerationBudget tiny;
    tiny.max_codewords = 10;  // linear slices only reach m = 1
    ApproximationResult result = best_approximation(target, 1, 3, tiny);
    CHECK_FALSE(result.complete);
    REQUIRE(result.per_degree.size() == 2);
    CHECK(result.per_degree[0].exhausted);  // constants fit at every m
    CHECK_FALSE(result.per_degree[1].exhausted);
    CHECK(result.per_degree[1].witness_vars == 1);
    CHECK(result.per_degree[1].best_distance == Rational(1, 3));
}

TEST_CASE("distribution JSON round trips") {
    std::mt19937_64 rng(9305);
    Distribution d = random_distribution(FieldParams(3), 2, rng);
    Distribution back = distribution_from_json(distribution_json(d));
    CHECK(back.masses == d.masses);
    CHECK(back.arity == d.arity);
}

TEST_SUITE_END();
