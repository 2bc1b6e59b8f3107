#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "grm/rational.hpp"
#include "grm/spectrum.hpp"

namespace grm {

struct PRationality {
    bool is_p_rational = false;
    BigInt ell;       // valid when is_p_rational
    unsigned k = 0;
};

/// True iff q's reduced denominator is a power of p, with the canonical
/// (ell, k) when it is.
PRationality is_p_rational(const TargetValue& q, int p);

/// Exact distance from alpha to the nearest rational ell/p^c:
/// min(alpha - floor(alpha p^c)/p^c, ceil(alpha p^c)/p^c - alpha).
/// Non-increasing in c; zero iff alpha is p-rational with exponent <= c.
Rational delta(const TargetValue& alpha, int c, int p);

/// Empirical gap scan around a target: per enumerated m, the nearest member
/// of weight_set(RM_p(r, m)) and its exact distance. The report never claims
/// a proven epsilon for unscanned m; it is an empirical floor over m <= max_m.
struct GapReport {
    TargetValue alpha;
    int p = 2;
    int order = 1;
    int max_m = 1;
    struct PerM {
        int vars;
        PExactRational nearest;
        Rational distance;
        EnumerationMode mode;
    };
    std::vector<PerM> per_m;
    Rational overall_gap;
    bool attained = false;
    bool complete = true;          // false when the budget stopped the scan early
    int last_completed_m = 0;
};

/// Hook for spectrum reuse (e.g. the on-disk cache); when absent every
/// spectrum is enumerated in place.
using SpectrumProvider = std::function<WeightSpectrum(const CodeParams&)>;

GapReport gap_scan(const TargetValue& alpha, FieldParams field, int order, int max_m,
                   const EnumerationBudget& budget = {}, int workers = 1,
                   const SpectrumProvider& provider = {});

/// Ax divisibility: every weight with nonzero count must be divisible by
/// p^{ceil(m/r)-1}. A violation indicates an implementation bug, never a
/// data finding; the theorem is unconditional.
struct AxCheckResult {
    bool ok = false;
    BigInt divisor;
    std::vector<uint64_t> violations;
};

AxCheckResult ax_check(const WeightSpectrum& spectrum);

enum class MinWeightMode { formula, enumerate_code };

/// Minimum weight of nonzero codewords. Formula mode evaluates
/// (p-b) * p^{m-a-1} with r = a(p-1)+b, 0 <= b < p-1 (and 1 when
/// r >= m(p-1), where the code is all functions); the formula is imported
/// from the classical literature and cross-checked against enumeration
/// wherever both modes run.
BigInt min_weight(const CodeParams& params, MinWeightMode mode,
                  const EnumerationBudget& budget = {},
                  const SpectrumProvider& provider = {});

}  // namespace grm
