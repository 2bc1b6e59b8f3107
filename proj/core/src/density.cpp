#include "grm/density.hpp"

#include <stdexcept>

#include "grm/errors.hpp"

namespace grm {

PRationality is_p_rational(const TargetValue& q, int p) {
    FieldParams field(p);  // validates the prime
    (void)field;
    Rational v = q.value;
    v.canonicalize();
    BigInt den = v.get_den();
    unsigned k = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
        den /= p;
        ++k;
    }
    PRationality out;
    if (den == 1) {
        out.is_p_rational = true;
        out.ell = v.get_num();
        out.k = k;
    }
    return out;
}

Rational delta(const TargetValue& alpha, int c, int p) {
    if (c < 1) throw std::invalid_argument("delta requires c >= 1");
    FieldParams field(p);
    (void)field;
    BigInt pc;
    mpz_ui_pow_ui(pc.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(c));
    Rational scaled = alpha.value * Rational(pc);
    scaled.canonicalize();
    BigInt floor_val;
    mpz_fdiv_q(floor_val.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    Rational below(floor_val, pc);
    below.canonicalize();
    Rational above(floor_val + 1, pc);
    above.canonicalize();
    if (below == alpha.value) return Rational(0);
    Rational down = alpha.value - below;
    Rational up = above - alpha.value;
    return down < up ? down : up;
}

GapReport gap_scan(const TargetValue& alpha, FieldParams field, int order, int max_m,
                   const EnumerationBudget& budget, int workers,
                   const SpectrumProvider& provider) {
    if (max_m < 1) throw std::invalid_argument("gap_scan requires max_m >= 1");
    GapReport report;
    report.alpha = alpha;
    report.p = field.p();
    report.order = order;
    report.max_m = max_m;
    report.overall_gap = Rational(2);  // larger than any distance within [0, 1]

    for (int m = 1; m <= max_m; ++m) {
        CodeParams params{field, order, m};
        WeightSpectrum spectrum;
        try {
            spectrum = provider ? provider(params) : enumerate_spectrum(params, budget, workers);
        } catch (const BudgetError&) {
            report.complete = false;
            break;
        }
        std::vector<PExactRational> weights = weight_set(spectrum);
        GapReport::PerM row{m, weights.front(), Rational(2), spectrum.mode};
        for (const auto& w : weights) {
            Rational d = abs_diff(w.to_rational(), alpha.value);
            if (d < row.distance) {
                row.nearest = w;
                row.distance = d;
            }
        }
        if (row.distance < report.overall_gap) report.overall_gap = row.distance;
        report.per_m.push_back(std::move(row));
        report.last_completed_m = m;
    }
    if (report.per_m.empty()) {
        throw BudgetError("gap_scan could not enumerate any m within budget");
    }
    report.attained = report.overall_gap == 0;
    return report;
}

AxCheckResult ax_check(const WeightSpectrum& spectrum) {
    const CodeParams& params = spectrum.params;
    if (params.order < 1) {
        throw std::invalid_argument("ax_check requires r >= 1 (the theorem quantifies over r >= 1)");
    }
    int exponent = (params.vars + params.order - 1) / params.order - 1;  // ceil(m/r) - 1
    AxCheckResult out;
    mpz_ui_pow_ui(out.divisor.get_mpz_t(), static_cast<unsigned long>(params.field.p()),
                  static_cast<unsigned long>(exponent));
    for (const auto& [w, count] : spectrum.counts) {
        if (count == 0) continue;
        BigInt weight(std::to_string(w));
        if (!mpz_divisible_p(weight.get_mpz_t(), out.divisor.get_mpz_t())) {
            out.violations.push_back(w);
        }
    }
    out.ok = out.violations.empty();
    return out;
}

BigInt min_weight(const CodeParams& params, MinWeightMode mode, const EnumerationBudget& budget,
                  const SpectrumProvider& provider) {
    if (params.order < 1) throw std::invalid_argument("min_weight requires r >= 1");
    const int p = params.field.p();
    if (mode == MinWeightMode::formula) {
        if (params.order >= params.vars * (p - 1)) return BigInt(1);  // all functions
        int a = params.order / (p - 1);
        int b = params.order % (p - 1);
        BigInt power;
        mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(params.vars - a - 1));
        return BigInt(p - b) * power;
    }
    WeightSpectrum spectrum =
        provider ? provider(params) : enumerate_spectrum(params, budget);
    for (const auto& [w, count] : spectrum.counts) {
        if (w > 0 && count > 0) return BigInt(std::to_string(w));
    }
    throw std::logic_error("spectrum has no nonzero weight");
}

}  // namespace grm
