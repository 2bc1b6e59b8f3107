#include "grm/distributions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "grm/errors.hpp"
#include "grm/gray.hpp"

namespace grm {

void Distribution::validate() const {
    uint64_t expected = point_count(field, arity);
    if (masses.size() != expected) {
        throw std::invalid_argument("distribution needs exactly p^c masses");
    }
    Rational sum(0);
    for (const auto& mass : masses) {
        if (mass < 0 || mass > 1) throw std::invalid_argument("distribution mass outside [0, 1]");
        sum += mass;
    }
    if (sum != 1) throw std::invalid_argument("distribution masses sum to " + rational_str(sum));
}

Distribution uniform_distribution(FieldParams field, int arity) {
    Distribution d{field, arity, {}};
    uint64_t n = point_count(field, arity);
    d.masses.assign(static_cast<size_t>(n), Rational(1, static_cast<unsigned long>(n)));
    return d;
}

Distribution point_mass(FieldParams field, int arity, uint64_t at) {
    Distribution d{field, arity, {}};
    uint64_t n = point_count(field, arity);
    if (at >= n) throw std::invalid_argument("point mass outside alphabet");
    d.masses.assign(static_cast<size_t>(n), Rational(0));
    d.masses[static_cast<size_t>(at)] = 1;
    return d;
}

Distribution distribution_of(std::span<const Polynomial> fs, uint64_t max_table_bytes) {
    if (fs.empty()) throw std::invalid_argument("distribution_of needs at least one polynomial");
    const FieldParams field = fs[0].field();
    const int m = fs[0].vars();
    for (const auto& f : fs) {
        if (!(f.field() == field) || f.vars() != m) {
            throw std::invalid_argument("polynomials must share (p, m)");
        }
    }
    const int c = static_cast<int>(fs.size());
    std::vector<std::vector<uint8_t>> tables;
    tables.reserve(fs.size());
    for (const auto& f : fs) tables.push_back(EvaluationTable::tabulate(f, max_table_bytes).to_bytes());

    uint64_t points = point_count(field, m);
    uint64_t alphabet = point_count(field, c);
    std::vector<uint64_t> hits(static_cast<size_t>(alphabet), 0);
    for (uint64_t x = 0; x < points; ++x) {
        uint64_t joint = 0;
        for (size_t i = fs.size(); i-- > 0;) {
            joint = joint * static_cast<uint64_t>(field.p()) + tables[i][static_cast<size_t>(x)];
        }
        ++hits[static_cast<size_t>(joint)];
    }
    Distribution d{field, c, {}};
    d.masses.reserve(hits.size());
    for (uint64_t h : hits) {
        Rational mass(static_cast<unsigned long>(h), static_cast<unsigned long>(points));
        mass.canonicalize();
        d.masses.push_back(std::move(mass));
    }
    return d;
}

namespace {

void check_same_alphabet(const Distribution& d1, const Distribution& d2) {
    if (!(d1.field == d2.field) || d1.arity != d2.arity ||
        d1.masses.size() != d2.masses.size()) {
        throw std::invalid_argument("distributions live on different alphabets");
    }
}

}  // namespace

Rational statistical_distance(const Distribution& d1, const Distribution& d2) {
    check_same_alphabet(d1, d2);
    Rational sum(0);
    for (size_t i = 0; i < d1.masses.size(); ++i) sum += abs_diff(d1.masses[i], d2.masses[i]);
    sum /= 2;
    sum.canonicalize();
    return sum;
}

DistinguisherResult distinguisher_gap(const Distribution& d1, const Distribution& d2,
                                      std::span<const uint64_t> subset) {
    check_same_alphabet(d1, d2);
    Rational p1(0), p2(0);
    for (uint64_t s : subset) {
        if (s >= d1.masses.size()) throw std::invalid_argument("subset element outside alphabet");
        p1 += d1.masses[static_cast<size_t>(s)];
        p2 += d2.masses[static_cast<size_t>(s)];
    }
    DistinguisherResult out;
    out.gap = abs_diff(p1, p2);
    out.bound_ok = out.gap <= statistical_distance(d1, d2);
    return out;
}

ComboUniformityReport combo_uniformity_check(std::span<const Polynomial> gs,
                                             const Rational& epsilon,
                                             uint64_t max_table_bytes) {
    if (gs.empty()) throw std::invalid_argument("combo_uniformity_check needs polynomials");
    const FieldParams field = gs[0].field();
    const int m = gs[0].vars();
    const int p = field.p();
    const int c = static_cast<int>(gs.size());

    ComboUniformityReport report;
    Distribution uniform_single = uniform_distribution(field, 1);
    uint64_t combos = point_count(field, c);
    Rational scaled_eps = epsilon / Rational(static_cast<unsigned long>(combos));
    bool premise = true;
    for (uint64_t a = 1; a < combos; ++a) {
        std::vector<uint8_t> coeffs(static_cast<size_t>(c));
        uint64_t rest = a;
        Polynomial combo(field, m);
        for (int i = 0; i < c; ++i) {
            coeffs[static_cast<size_t>(i)] = static_cast<uint8_t>(rest % static_cast<uint64_t>(p));
            rest /= static_cast<uint64_t>(p);
            if (coeffs[static_cast<size_t>(i)]) {
                combo += gs[static_cast<size_t>(i)].scaled(coeffs[static_cast<size_t>(i)]);
            }
        }
        std::vector<Polynomial> single{combo};
        Rational dist = statistical_distance(distribution_of(single, max_table_bytes), uniform_single);
        if (!(dist < scaled_eps)) premise = false;
        report.per_combination.push_back({std::move(coeffs), std::move(dist)});
    }
    report.joint_distance =
        statistical_distance(distribution_of(gs, max_table_bytes), uniform_distribution(field, c));
    report.factor_ok = !premise || report.joint_distance < epsilon;
    return report;
}

namespace {

// Variable relabelings act on coefficient vectors by permuting basis
// monomials; index_maps[g][j] is where basis monomial j lands.
std::vector<std::vector<size_t>> relabeling_index_maps(const std::vector<Exponents>& basis,
                                                       int vars) {
    std::map<Exponents, size_t> index_of;
    for (size_t j = 0; j < basis.size(); ++j) index_of[basis[j]] = j;
    std::vector<std::vector<size_t>> maps;
    std::vector<size_t> perm(static_cast<size_t>(vars));
    std::iota(perm.begin(), perm.end(), size_t{0});
    do {
        std::vector<size_t> index_map(basis.size());
        for (size_t j = 0; j < basis.size(); ++j) {
            Exponents image(basis[j].size());
            for (size_t i = 0; i < image.size(); ++i) image[perm[i]] = basis[j][i];
            index_map[j] = index_of.at(image);
        }
        maps.push_back(std::move(index_map));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return maps;
}

std::vector<uint8_t> canonical_form(const std::vector<uint8_t>& coeffs,
                                    const std::vector<std::vector<size_t>>& maps) {
    std::vector<uint8_t> best = coeffs;
    std::vector<uint8_t> candidate(coeffs.size());
    for (const auto& map : maps) {
        std::fill(candidate.begin(), candidate.end(), 0);
        for (size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j]) candidate[map[j]] = coeffs[j];
        }
        if (candidate < best) best = candidate;
    }
    return best;
}

}  // namespace

ApproximationResult best_approximation(const Distribution& target, int r_max, int m_max,
                                       const EnumerationBudget& budget) {
    target.validate();
    if (target.arity != 1) {
        throw std::invalid_argument("best_approximation targets a distribution on F_p");
    }
    if (r_max < 0 || m_max < 0) throw std::invalid_argument("negative search caps");
    const FieldParams field = target.field;
    const int p = field.p();

    ApproximationResult result;
    result.target = target;
    result.r_max = r_max;
    result.m_max = m_max;
    result.best_distance = Rational(2);

    for (int order = 0; order <= r_max; ++order) {
        // Nested codes: searching the largest feasible m covers every
        // smaller m, so each degree slice enumerates once.
        int vars = -1;
        for (int m = m_max; m >= 0; --m) {
            CodeParams params{field, order, m};
            BigInt n = params.codeword_count();
            if (n <= BigInt(std::to_string(budget.max_codewords)) &&
                table_bytes_required(field, m) <= budget.max_table_bytes) {
                vars = m;
                break;
            }
        }
        if (vars < 0) {
            result.complete = false;
            continue;
        }
        CodeParams params{field, order, vars};
        std::vector<Exponents> basis = monomial_basis(field, order, vars);
        std::vector<std::vector<uint8_t>> tables;
        tables.reserve(basis.size());
        for (const auto& exps : basis) {
            tables.push_back(tabulate_monomial(field, vars, exps).to_bytes());
        }
        auto index_maps = relabeling_index_maps(basis, vars);

        uint64_t points = point_count(field, vars);
        std::vector<uint8_t> state(static_cast<size_t>(points), 0);
        std::vector<uint8_t> digits(basis.size(), 0);
        std::vector<uint64_t> hits(static_cast<size_t>(p), 0);

        ApproximationResult::DegreeSlice slice;
        slice.order = order;
        slice.best_distance = Rational(2);
        slice.witness_vars = vars;
        slice.exhausted = vars == m_max;
        if (!slice.exhausted) result.complete = false;

        std::unordered_set<std::string> seen;
        auto consider = [&]() {
            std::vector<uint8_t> canon = canonical_form(digits, index_maps);
            std::string key(canon.begin(), canon.end());
            if (!seen.insert(key).second) return;
            std::fill(hits.begin(), hits.end(), 0);
            for (uint8_t v : state) ++hits[v];
            Rational dist(0);
            for (int a = 0; a < p; ++a) {
                Rational mass(static_cast<unsigned long>(hits[static_cast<size_t>(a)]),
                              static_cast<unsigned long>(points));
                mass.canonicalize();
                dist += abs_diff(mass, target.masses[static_cast<size_t>(a)]);
            }
            dist /= 2;
            dist.canonicalize();
            if (dist < slice.best_distance ||
                (dist == slice.best_distance && canon < slice.witness_coeffs)) {
                slice.best_distance = dist;
                slice.witness_coeffs = std::move(canon);
            }
        };

        consider();
        gray_walk(p, static_cast<int>(basis.size()), digits, [&](int j, int8_t d) {
            int s = d > 0 ? 1 : p - 1;
            const auto& table = tables[static_cast<size_t>(j)];
            for (size_t i = 0; i < state.size(); ++i) {
                int v = state[i] + s * table[i];
                state[i] = static_cast<uint8_t>(v % p);
            }
            consider();
        });

        if (slice.best_distance < result.best_distance) {
            result.best_distance = slice.best_distance;
            result.best_order = order;
            result.found_any = true;
        }
        result.per_degree.push_back(std::move(slice));
    }
    if (!result.found_any) {
        throw BudgetError("best_approximation could not search any (r, m) within budget");
    }
    return result;
}

Polynomial approximation_witness(const ApproximationResult::DegreeSlice& slice,
                                 FieldParams field) {
    std::vector<Exponents> basis = monomial_basis(field, slice.order, slice.witness_vars);
    Polynomial f(field, slice.witness_vars);
    for (size_t j = 0; j < slice.witness_coeffs.size(); ++j) {
        if (slice.witness_coeffs[j]) f.add_term(basis[j], slice.witness_coeffs[j]);
    }
    return f;
}

}  // namespace grm
