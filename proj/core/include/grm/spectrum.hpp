#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grm/eval_table.hpp"
#include "grm/polynomial.hpp"
#include "grm/rational.hpp"

namespace grm {

struct EnumerationBudget {
    uint64_t max_codewords = uint64_t{1} << 28;
    uint64_t max_table_bytes = kDefaultTableBudget;
};

enum class EnumerationMode { full, symmetry_reduced };

std::string mode_str(EnumerationMode mode);
EnumerationMode mode_from_str(const std::string& s);

/// The code RM_p(r, m): evaluations of m-variate polynomials over F_p of
/// total degree at most r.
struct CodeParams {
    FieldParams field = FieldParams(2);
    int order = 0;
    int vars = 0;

    /// Number of reduced monomials of degree <= order: log_p of the code size.
    uint64_t dimension() const;
    BigInt codeword_count() const;  // p^dimension

    bool operator==(const CodeParams& rhs) const {
        return field == rhs.field && order == rhs.order && vars == rhs.vars;
    }
};

/// Exact weight histogram of a code. In full mode counts[w] is the number of
/// codewords of weight w and the counts sum to p^dim. In symmetry-reduced
/// mode counts[w] is the number of orbit representatives enumerated at that
/// weight; only the weight SET is certified.
struct WeightSpectrum {
    CodeParams params;
    EnumerationMode mode = EnumerationMode::full;
    int worker_partitions = 1;
    std::string tool_version;
    std::map<uint64_t, BigInt> counts;

    BigInt total() const;
};

/// Exact weight of one codeword: nonzero count and the relative weight in
/// canonical ell/p^k form.
std::pair<uint64_t, PExactRational> weight(const Polynomial& f,
                                           uint64_t max_table_bytes = kDefaultTableBudget);

/// Exhaustive spectrum over all p^dim coefficient vectors. Iteration follows
/// a reflected base-p Gray order on the coefficient vector, so each step adds
/// one scalar multiple of one precomputed monomial table to the running
/// value table. Workers enumerate disjoint fixed-prefix partitions of the
/// top Gray digits; the merged result is independent of the worker count.
WeightSpectrum enumerate_spectrum(const CodeParams& params, const EnumerationBudget& budget = {},
                                  int workers = 1,
                                  EnumerationMode mode = EnumerationMode::full);

/// Same enumeration over an arbitrary basis of value tables (basis[i] is the
/// table of the i-th basis function). Used to cross-check invariance of the
/// spectrum under affine relabelings of the monomial basis.
WeightSpectrum enumerate_spectrum_with_basis(const CodeParams& params,
                                             std::span<const EvaluationTable> basis,
                                             const EnumerationBudget& budget = {},
                                             int workers = 1);

/// Sorted, duplicate-free relative weights with nonzero count.
std::vector<PExactRational> weight_set(const WeightSpectrum& spectrum);

/// Pointwise sum of partial spectra over the same params. Rejects mismatched
/// params and totals != p^dim (a lost partition).
WeightSpectrum merge_spectra(std::span<const WeightSpectrum> parts);

}  // namespace grm
