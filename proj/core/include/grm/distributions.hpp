#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grm/eval_table.hpp"
#include "grm/polynomial.hpp"
#include "grm/rational.hpp"
#include "grm/spectrum.hpp"

namespace grm {

/// Exact distribution on F_p^c: p^c masses in point-index order (first
/// coordinate least significant, the same convention as value tables).
struct Distribution {
    FieldParams field = FieldParams(2);
    int arity = 1;                 // c
    std::vector<Rational> masses;  // sum to exactly 1

    uint64_t alphabet_size() const { return masses.size(); }
    void validate() const;         // masses in [0,1], sum exactly 1
};

Distribution uniform_distribution(FieldParams field, int arity);
Distribution point_mass(FieldParams field, int arity, uint64_t at);

/// Joint output distribution of (f_1(x), ..., f_c(x)) under one uniform
/// input point; exact, denominator p^m.
Distribution distribution_of(std::span<const Polynomial> fs,
                             uint64_t max_table_bytes = kDefaultTableBudget);

/// Half the L1 distance; exact, symmetric, zero iff equal.
Rational statistical_distance(const Distribution& d1, const Distribution& d2);

/// |Pr_{D1}[S] - Pr_{D2}[S]| for a subset S of the alphabet, with the bound
/// check against the statistical distance (false signals a bug, never data).
struct DistinguisherResult {
    Rational gap;
    bool bound_ok = false;
};
DistinguisherResult distinguisher_gap(const Distribution& d1, const Distribution& d2,
                                      std::span<const uint64_t> subset);

/// For every nonzero a in F_p^c, the exact distance of D(sum a_i g_i) from
/// uniform on F_p, plus the joint distance from uniform on F_p^c, and the
/// empirical check of the Fourier reduction: per-combination distances all
/// below p^{-c} * epsilon must force joint distance below epsilon.
struct ComboUniformityReport {
    struct Row {
        std::vector<uint8_t> coeffs;
        Rational distance;
    };
    std::vector<Row> per_combination;
    Rational joint_distance;
    bool factor_ok = true;
};
ComboUniformityReport combo_uniformity_check(std::span<const Polynomial> gs,
                                             const Rational& epsilon,
                                             uint64_t max_table_bytes = kDefaultTableBudget);

/// Exhaustive best approximation of a target distribution on F_p by
/// polynomials of degree <= r in m <= m_max variables, reported per degree
/// (the degree-sweep view). Candidates are canonicalized under variable
/// relabeling and memoized by canonical form; the reported witness is the
/// canonically least minimizer. Exhaustive-within-budget only.
struct ApproximationResult {
    struct DegreeSlice {
        int order;
        Rational best_distance;
        std::vector<uint8_t> witness_coeffs;  // over monomial_basis(field, order, vars_searched)
        int witness_vars;
        bool exhausted;                        // full search completed for this degree
    };
    Distribution target;
    int r_max = 0;
    int m_max = 0;
    std::vector<DegreeSlice> per_degree;
    Rational best_distance;
    bool found_any = false;
    int best_order = 0;
    bool complete = true;  // false when the budget stopped the sweep
};

ApproximationResult best_approximation(const Distribution& target, int r_max, int m_max,
                                       const EnumerationBudget& budget = {});

/// The witness of a degree slice as a Polynomial.
Polynomial approximation_witness(const ApproximationResult::DegreeSlice& slice, FieldParams field);

}  // namespace grm
