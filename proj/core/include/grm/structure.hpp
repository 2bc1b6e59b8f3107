#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "grm/distributions.hpp"
#include "grm/polynomial.hpp"
#include "grm/rational.hpp"

namespace grm {

struct SearchBudget {
    uint64_t max_candidates = 2'000'000;  // factor subspaces examined per rank stage sweep
    int max_factors = 10;                 // cap on c (the combiner table is p^c)
    uint64_t max_table_bytes = kDefaultTableBudget;
    int max_refinements = 200;            // regularize step cap
};

/// Certificate that f(x) = F(g_1(x), ..., g_c(x)) pointwise, with every
/// factor of total degree <= factor_degree_bound. The combiner F is stored
/// as an explicit table over F_p^c (index order as everywhere else) and is 0
/// off the image of the factor map, which makes it canonical.
struct Decomposition {
    std::vector<Polynomial> factors;
    std::vector<uint8_t> combiner;
    int factor_degree_bound = 0;

    int arity() const { return static_cast<int>(factors.size()); }

    /// Full-tabulation reconstruction check.
    bool verify(const Polynomial& f, uint64_t max_table_bytes = kDefaultTableBudget) const;
};

/// Outcome of a rank search. `infinite` marks the degree-0 factor
/// convention: no finite set of constants computes a nonconstant function,
/// so rank with factor degree 0 is an infinity marker and nonconstant linear
/// combinations never violate regularity on rank grounds.
struct RankResult {
    enum class Status { exact, lower_bound, search_exhausted };
    Status status = Status::exact;
    bool infinite = false;
    int value = 0;       // exact rank, or the confirmed "rank > value - 1" bound
    int upper_bound = 0; // on search_exhausted: best known decomposition size
    std::optional<Decomposition> witness;
};

/// Minimal c such that f = F(g_1..g_c) with deg(g_i) <= factor_degree.
/// Staged search c = 1, 2, ... over factor tuples modulo invertible linear
/// recombination (reduced row echelon representatives of factor subspaces,
/// canonically ordered). For factor_degree 1 an exact fast path computes
/// m minus the dimension of the translation-invariance subspace of f.
RankResult rank(const Polynomial& f, int factor_degree, const SearchBudget& budget = {});

/// The generic staged subspace search for any factor degree, bypassing the
/// degree-1 fast path; the two routes must agree wherever both run.
RankResult rank_exhaustive(const Polynomial& f, int factor_degree,
                           const SearchBudget& budget = {});

/// Decides whether rank(f, factor_degree) <= threshold; returns the exact
/// value and witness when it is, and a confirmed lower bound otherwise.
RankResult rank_at_most(const Polynomial& f, int factor_degree, int threshold,
                        const SearchBudget& budget = {});

/// Regularity certificate over all p^c - 1 nonzero linear combinations of a
/// factor set. A combination violates if it is identically zero, a nonzero
/// constant, or has rank (at its own degree minus one) <= threshold.
struct RegularityCertificate {
    enum class Verdict { regular, violation, unconfirmed };
    enum class ComboKind {
        nonconstant_linear,     // degree 1: infinity-marker rank, never a violation
        rank_above_threshold,
        violation_zero,
        violation_constant,
        violation_low_rank,
        inconclusive            // rank search exhausted
    };
    struct Record {
        std::vector<uint8_t> coeffs;  // a in F_p^c, first factor least significant
        TotalDegree degree = TotalDegree::zero_polynomial();
        ComboKind kind = ComboKind::inconclusive;
        std::optional<int> rank_value;
    };
    int threshold = 0;
    std::vector<Record> records;
    Verdict verdict = Verdict::regular;
    std::optional<size_t> first_violation;  // index into records
};

RegularityCertificate is_regular_set(std::span<const Polynomial> gs, int threshold,
                                     const SearchBudget& budget = {});

/// Iterative refinement: start from {f}; while some nonzero combination
/// violates the threshold, replace one maximal-degree factor involved by the
/// factors of a minimal witness decomposition (strictly lower degree) and
/// re-derive the combiner. Each step strictly decreases the multiset of
/// factor degrees, so the loop terminates.
struct RegularizeResult {
    Decomposition decomposition;
    RegularityCertificate certificate;
    bool confirmed = false;  // false when a budget stopped refinement early
    int refinement_steps = 0;
};

RegularizeResult regularize(const Polynomial& f, const std::function<int(int)>& threshold_map,
                            const SearchBudget& budget = {});

/// Lemma-1-style compression: regularize f with thresholds derived from the
/// error map via the measured bias-to-rank table, then read the combiner as
/// a function g on c independent inputs. Both relative weights and the full
/// output distribution distance are computed exactly; failure is reported
/// with the exact achieved error, never hidden.
struct CompressResult {
    std::vector<uint8_t> function_table;  // g as p^c values in index order
    int arity = 0;
    Rational f_relative_weight;
    Rational g_relative_weight;
    Rational achieved_error;
    Rational error_budget;           // E(c) for the achieved c
    Rational distribution_distance;  // dist(D(f), D(g)), exact
    bool ok = false;
    RegularizeResult regularization;
};

CompressResult compress(const Polynomial& f, const std::function<Rational(int)>& error_map,
                        const SearchBudget& budget = {});

/// Exhaustive (distance-to-uniform, rank) survey of every degree-exactly-r
/// polynomial at (p, r, m), with the empirical map
/// epsilon -> max rank among polynomials at distance >= epsilon.
struct BiasRankScan {
    FieldParams field = FieldParams(2);
    int order = 1;
    int vars = 1;
    struct Row {
        std::vector<uint8_t> coeffs;  // over monomial_basis(field, order, vars)
        Rational distance;
        bool rank_infinite = false;
        int rank_value = 0;
    };
    std::vector<Row> rows;
    struct Threshold {
        Rational epsilon;
        bool infinite = false;
        int max_rank = 0;
    };
    std::vector<Threshold> eps_to_max_rank;  // ascending by epsilon

    /// Max rank among rows with distance >= eps ({infinite} or a value);
    /// nullopt when no row reaches eps.
    std::optional<Threshold> max_rank_at(const Rational& eps) const;
};

BiasRankScan bias_rank_scan(FieldParams field, int order, int vars,
                            const SearchBudget& budget = {});

}  // namespace grm
