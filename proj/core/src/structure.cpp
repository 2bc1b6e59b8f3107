#include "grm/structure.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "grm/errors.hpp"
#include "grm/eval_table.hpp"
#include "grm/gray.hpp"

namespace grm {

namespace {

constexpr uint64_t kCombinerCap = uint64_t{1} << 20;       // p^c entries
constexpr uint64_t kInvarianceCap = uint64_t{1} << 16;     // p^m points for the d=1 fast path
constexpr uint64_t kScanCodewordCap = 4096;                // bias scan size used by compress

std::vector<uint8_t> byte_table(const Polynomial& f, uint64_t max_table_bytes) {
    return EvaluationTable::tabulate(f, max_table_bytes).to_bytes();
}

uint64_t checked_pow(int p, int e, uint64_t cap, const char* what) {
    uint64_t n = 1;
    for (int i = 0; i < e; ++i) {
        n *= static_cast<uint64_t>(p);
        if (n > cap) {
            throw BudgetError(std::string(what) + ": p^" + std::to_string(e) + " exceeds cap " +
                              std::to_string(cap));
        }
    }
    return n;
}

// Canonical combiner of f over the factor tables: F value per attained joint
// index, 0 off the image. nullopt when f is not constant on a joint level
// set (i.e. the factors do not compute f).
std::optional<std::vector<uint8_t>> derive_combiner(const std::vector<uint8_t>& f_bytes,
                                                    const std::vector<std::vector<uint8_t>>& factors,
                                                    int p) {
    uint64_t joint = checked_pow(p, static_cast<int>(factors.size()), kCombinerCap, "combiner");
    std::vector<uint8_t> table(static_cast<size_t>(joint), 0);
    std::vector<bool> seen(static_cast<size_t>(joint), false);
    for (size_t x = 0; x < f_bytes.size(); ++x) {
        uint64_t j = 0;
        for (size_t i = factors.size(); i-- > 0;) {
            j = j * static_cast<uint64_t>(p) + factors[i][x];
        }
        if (!seen[static_cast<size_t>(j)]) {
            seen[static_cast<size_t>(j)] = true;
            table[static_cast<size_t>(j)] = f_bytes[x];
        } else if (table[static_cast<size_t>(j)] != f_bytes[x]) {
            return std::nullopt;
        }
    }
    return table;
}

// Enumerates the c-dimensional subspaces of F_p^n as reduced-row-echelon
// bases, in canonical order (pivot columns lexicographic, then free entries
// in odometer order). Returns 0 when the sweep completed, 1 when fn asked to
// stop, 2 when the candidate budget ran out.
template <typename Fn>
int for_each_subspace(int p, int n, int c, uint64_t& candidates, Fn&& fn) {
    if (c > n) return 0;
    std::vector<int> pivots(static_cast<size_t>(c));
    std::iota(pivots.begin(), pivots.end(), 0);
    while (true) {
        std::vector<bool> is_pivot(static_cast<size_t>(n), false);
        for (int j : pivots) is_pivot[static_cast<size_t>(j)] = true;
        std::vector<std::pair<int, int>> free_pos;
        for (int i = 0; i < c; ++i) {
            for (int j = pivots[static_cast<size_t>(i)] + 1; j < n; ++j) {
                if (!is_pivot[static_cast<size_t>(j)]) free_pos.emplace_back(i, j);
            }
        }
        std::vector<std::vector<uint8_t>> rows(static_cast<size_t>(c),
                                               std::vector<uint8_t>(static_cast<size_t>(n), 0));
        for (int i = 0; i < c; ++i) rows[static_cast<size_t>(i)][static_cast<size_t>(pivots[static_cast<size_t>(i)])] = 1;
        std::vector<uint8_t> free_vals(free_pos.size(), 0);
        while (true) {
            if (candidates == 0) return 2;
            --candidates;
            if (fn(rows)) return 1;
            size_t k = 0;
            while (k < free_vals.size() && free_vals[k] == p - 1) {
                free_vals[k] = 0;
                rows[static_cast<size_t>(free_pos[k].first)][static_cast<size_t>(free_pos[k].second)] = 0;
                ++k;
            }
            if (k == free_vals.size()) break;
            ++free_vals[k];
            rows[static_cast<size_t>(free_pos[k].first)][static_cast<size_t>(free_pos[k].second)] =
                free_vals[k];
        }
        int i = c - 1;
        while (i >= 0 && pivots[static_cast<size_t>(i)] == n - c + i) --i;
        if (i < 0) break;
        ++pivots[static_cast<size_t>(i)];
        for (int j = i + 1; j < c; ++j) {
            pivots[static_cast<size_t>(j)] = pivots[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return 0;
}

// Nonconstant monomials of degree <= d with their value tables: the ambient
// space the factor subspaces live in.
struct FactorSpace {
    std::vector<Exponents> monomials;
    std::vector<std::vector<uint8_t>> tables;
};

FactorSpace factor_space(const FieldParams& field, int d, int m, uint64_t max_table_bytes) {
    FactorSpace fs;
    std::vector<Exponents> basis = monomial_basis(field, d, m);
    for (const auto& exps : basis) {
        bool constant = std::all_of(exps.begin(), exps.end(), [](uint8_t e) { return e == 0; });
        if (constant) continue;
        fs.tables.push_back(
            EvaluationTable::tabulate(Polynomial::monomial(field, m, exps),
                                      max_table_bytes)
                .to_bytes());
        fs.monomials.push_back(exps);
    }
    return fs;
}

std::vector<uint8_t> combine_tables(const FactorSpace& fs, const std::vector<uint8_t>& row, int p,
                                    size_t points) {
    std::vector<uint8_t> out(points, 0);
    for (size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 0) continue;
        const auto& mono = fs.tables[j];
        for (size_t x = 0; x < points; ++x) {
            out[x] = static_cast<uint8_t>((out[x] + row[j] * mono[x]) % p);
        }
    }
    return out;
}

Polynomial row_polynomial(const FactorSpace& fs, const std::vector<uint8_t>& row,
                          const FieldParams& field, int m) {
    Polynomial g(field, m);
    for (size_t j = 0; j < row.size(); ++j) {
        if (row[j]) g.add_term(fs.monomials[j], row[j]);
    }
    return g;
}

// Reduced row echelon form over F_p; returns the nonzero rows.
std::vector<std::vector<uint8_t>> rref(const FieldParams& field,
                                       std::vector<std::vector<uint8_t>> rows) {
    if (rows.empty()) return rows;
    const size_t n = rows[0].size();
    size_t rank_rows = 0;
    for (size_t col = 0; col < n && rank_rows < rows.size(); ++col) {
        size_t pivot = rank_rows;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank_rows], rows[pivot]);
        uint8_t inv = field.inv(rows[rank_rows][col]);
        for (size_t j = 0; j < n; ++j) rows[rank_rows][j] = field.mul(rows[rank_rows][j], inv);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == rank_rows || rows[i][col] == 0) continue;
            uint8_t factor = rows[i][col];
            for (size_t j = 0; j < n; ++j) {
                rows[i][j] = field.sub(rows[i][j], field.mul(factor, rows[rank_rows][j]));
            }
        }
        ++rank_rows;
    }
    rows.resize(rank_rows);
    return rows;
}

// Canonical basis of {v : R v = 0} for R in RREF.
std::vector<std::vector<uint8_t>> nullspace(const FieldParams& field,
                                            const std::vector<std::vector<uint8_t>>& rref_rows,
                                            size_t n) {
    std::vector<int> pivot_col_of_row;
    std::vector<bool> is_pivot(n, false);
    for (const auto& row : rref_rows) {
        size_t col = 0;
        while (col < n && row[col] == 0) ++col;
        pivot_col_of_row.push_back(static_cast<int>(col));
        if (col < n) is_pivot[col] = true;
    }
    std::vector<std::vector<uint8_t>> basis;
    for (size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<uint8_t> v(n, 0);
        v[free_col] = 1;
        for (size_t i = 0; i < rref_rows.size(); ++i) {
            v[static_cast<size_t>(pivot_col_of_row[i])] = field.neg(rref_rows[i][free_col]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

struct InvarianceRank {
    int value = 0;                                  // m - dim K
    std::vector<std::vector<uint8_t>> kernel_rref;  // basis of the invariance subspace K
};

// K = {a : f(x + a) = f(x) for all x} is a subspace; for degree-1 factors
// the rank is exactly m - dim K and the quotient forms are a witness.
InvarianceRank invariance_rank(const std::vector<uint8_t>& f_bytes, const FieldParams& field,
                               int m) {
    const uint64_t points = point_count(field, m);
    if (points > kInvarianceCap) {
        throw BudgetError("degree-1 rank fast path supports p^m <= " +
                          std::to_string(kInvarianceCap));
    }
    const int p = field.p();
    std::vector<std::vector<uint8_t>> digits;
    if (p != 2) {
        digits.reserve(static_cast<size_t>(points));
        for (uint64_t x = 0; x < points; ++x) digits.push_back(index_to_point(field, m, x));
    }
    auto invariant_under = [&](uint64_t a) {
        if (p == 2) {
            for (uint64_t x = 0; x < points; ++x) {
                if (f_bytes[static_cast<size_t>(x)] != f_bytes[static_cast<size_t>(x ^ a)]) return false;
            }
            return true;
        }
        const Point& da = digits[static_cast<size_t>(a)];
        for (uint64_t x = 0; x < points; ++x) {
            const Point& dx = digits[static_cast<size_t>(x)];
            uint64_t shifted = 0;
            for (size_t i = dx.size(); i-- > 0;) {
                int v = dx[i] + da[i];
                if (v >= p) v -= p;
                shifted = shifted * static_cast<uint64_t>(p) + static_cast<uint64_t>(v);
            }
            if (f_bytes[static_cast<size_t>(x)] != f_bytes[static_cast<size_t>(shifted)]) return false;
        }
        return true;
    };

    std::vector<bool> in_span(static_cast<size_t>(points), false);
    in_span[0] = true;
    std::vector<uint64_t> span{0};
    std::vector<std::vector<uint8_t>> basis;
    for (uint64_t a = 1; a < points; ++a) {
        if (in_span[static_cast<size_t>(a)]) continue;
        if (!invariant_under(a)) continue;
        basis.push_back(index_to_point(field, m, a));
        std::vector<uint64_t> grown;
        for (uint64_t v : span) {
            Point dv = index_to_point(field, m, v);
            Point dav = index_to_point(field, m, a);
            for (int s = 1; s < p; ++s) {
                Point sum(dv.size());
                for (size_t i = 0; i < dv.size(); ++i) {
                    sum[i] = static_cast<uint8_t>((dv[i] + s * dav[i]) % p);
                }
                uint64_t idx = point_index(field, sum);
                if (!in_span[static_cast<size_t>(idx)]) {
                    in_span[static_cast<size_t>(idx)] = true;
                    grown.push_back(idx);
                }
            }
        }
        span.insert(span.end(), grown.begin(), grown.end());
    }
    InvarianceRank out;
    out.kernel_rref = rref(field, basis);
    out.value = m - static_cast<int>(out.kernel_rref.size());
    return out;
}

Decomposition fast_path_witness(const Polynomial& f, const std::vector<uint8_t>& f_bytes,
                                const InvarianceRank& inv, uint64_t max_table_bytes) {
    const FieldParams& field = f.field();
    const int m = f.vars();
    std::vector<std::vector<uint8_t>> forms =
        nullspace(field, inv.kernel_rref, static_cast<size_t>(m));
    Decomposition out;
    out.factor_degree_bound = 1;
    std::vector<std::vector<uint8_t>> tables;
    for (const auto& coeffs : forms) {
        Polynomial g(field, m);
        for (int j = 0; j < m; ++j) {
            if (coeffs[static_cast<size_t>(j)]) {
                Exponents e(static_cast<size_t>(m), 0);
                e[static_cast<size_t>(j)] = 1;
                g.add_term(e, coeffs[static_cast<size_t>(j)]);
            }
        }
        tables.push_back(byte_table(g, max_table_bytes));
        out.factors.push_back(std::move(g));
    }
    auto combiner = derive_combiner(f_bytes, tables, field.p());
    if (!combiner) throw std::logic_error("invariance quotient forms failed to compute f");
    out.combiner = std::move(*combiner);
    return out;
}

void check_rank_pre(const Polynomial& f) {
    TotalDegree deg = f.total_degree();
    if (deg.is_zero_polynomial() || deg.value() < 1) {
        throw std::invalid_argument("rank requires a nonconstant polynomial");
    }
}

// Staged subspace search. threshold < 0 means unbounded; build_witness
// controls whether the found decomposition is materialized.
RankResult staged_search(const Polynomial& f, int factor_degree, int threshold,
                         const SearchBudget& budget, bool build_witness) {
    const FieldParams& field = f.field();
    const int m = f.vars();
    const int p = field.p();
    std::vector<uint8_t> f_bytes = byte_table(f, budget.max_table_bytes);
    FactorSpace fs = factor_space(field, factor_degree, m, budget.max_table_bytes);
    const int n = static_cast<int>(fs.monomials.size());
    const size_t points = f_bytes.size();

    int c_cap = std::min(budget.max_factors, n);
    if (threshold >= 0) c_cap = std::min(c_cap, threshold);

    for (int c = 1; c <= c_cap; ++c) {
        uint64_t candidates = budget.max_candidates;
        std::vector<std::vector<uint8_t>> found_rows;
        std::vector<uint8_t> found_combiner;
        int rc = for_each_subspace(p, n, c, candidates, [&](const auto& rows) {
            std::vector<std::vector<uint8_t>> tables;
            tables.reserve(rows.size());
            for (const auto& row : rows) tables.push_back(combine_tables(fs, row, p, points));
            auto combiner = derive_combiner(f_bytes, tables, p);
            if (!combiner) return false;
            found_rows = rows;
            found_combiner = std::move(*combiner);
            return true;
        });
        if (rc == 1) {
            RankResult out;
            out.status = RankResult::Status::exact;
            out.value = c;
            if (build_witness) {
                Decomposition witness;
                witness.factor_degree_bound = factor_degree;
                for (const auto& row : found_rows) {
                    witness.factors.push_back(row_polynomial(fs, row, field, m));
                }
                witness.combiner = std::move(found_combiner);
                out.witness = std::move(witness);
            }
            return out;
        }
        if (rc == 2) {
            RankResult out;
            out.status = RankResult::Status::search_exhausted;
            out.value = c;          // stages < c completed with no decomposition
            out.upper_bound = m;    // the coordinate forms always compute f
            return out;
        }
    }
    if (threshold >= 0) {
        RankResult out;
        out.status = RankResult::Status::lower_bound;
        out.value = threshold + 1;
        return out;
    }
    if (c_cap < n) {
        RankResult out;
        out.status = RankResult::Status::search_exhausted;
        out.value = c_cap + 1;
        out.upper_bound = m;
        return out;
    }
    throw std::logic_error("full-space factor search failed to decompose f");
}

RankResult infinite_rank() {
    RankResult out;
    out.status = RankResult::Status::exact;
    out.infinite = true;
    return out;
}

RankResult fast_path_rank(const Polynomial& f, const SearchBudget& budget, bool build_witness) {
    std::vector<uint8_t> f_bytes = byte_table(f, budget.max_table_bytes);
    InvarianceRank inv = invariance_rank(f_bytes, f.field(), f.vars());
    RankResult out;
    out.status = RankResult::Status::exact;
    out.value = inv.value;
    if (build_witness) out.witness = fast_path_witness(f, f_bytes, inv, budget.max_table_bytes);
    return out;
}

}  // namespace

bool Decomposition::verify(const Polynomial& f, uint64_t max_table_bytes) const {
    std::vector<uint8_t> f_bytes = byte_table(f, max_table_bytes);
    const int p = f.field().p();
    std::vector<std::vector<uint8_t>> tables;
    tables.reserve(factors.size());
    for (const auto& g : factors) {
        if (!g.total_degree().at_most(factor_degree_bound)) return false;
        tables.push_back(byte_table(g, max_table_bytes));
    }
    for (size_t x = 0; x < f_bytes.size(); ++x) {
        uint64_t j = 0;
        for (size_t i = tables.size(); i-- > 0;) {
            j = j * static_cast<uint64_t>(p) + tables[i][x];
        }
        if (combiner.at(static_cast<size_t>(j)) != f_bytes[x]) return false;
    }
    return true;
}

RankResult rank(const Polynomial& f, int factor_degree, const SearchBudget& budget) {
    check_rank_pre(f);
    if (factor_degree < 0) throw std::invalid_argument("negative factor degree");
    if (factor_degree == 0) return infinite_rank();
    if (factor_degree == 1) return fast_path_rank(f, budget, true);
    return staged_search(f, factor_degree, -1, budget, true);
}

RankResult rank_exhaustive(const Polynomial& f, int factor_degree, const SearchBudget& budget) {
    check_rank_pre(f);
    if (factor_degree < 1) throw std::invalid_argument("exhaustive search needs factor degree >= 1");
    return staged_search(f, factor_degree, -1, budget, true);
}

RankResult rank_at_most(const Polynomial& f, int factor_degree, int threshold,
                        const SearchBudget& budget) {
    check_rank_pre(f);
    if (factor_degree < 0) throw std::invalid_argument("negative factor degree");
    if (threshold < 0) throw std::invalid_argument("negative rank threshold");
    if (factor_degree == 0) return infinite_rank();
    if (factor_degree == 1) {
        RankResult out = fast_path_rank(f, budget, false);
        if (out.value <= threshold) return fast_path_rank(f, budget, true);
        return out;
    }
    return staged_search(f, factor_degree, threshold, budget, true);
}

RegularityCertificate is_regular_set(std::span<const Polynomial> gs, int threshold,
                                     const SearchBudget& budget) {
    if (gs.empty()) throw std::invalid_argument("is_regular_set needs at least one polynomial");
    if (threshold < 0) throw std::invalid_argument("negative regularity threshold");
    const FieldParams field = gs[0].field();
    const int m = gs[0].vars();
    for (const auto& g : gs) {
        if (!(g.field() == field) || g.vars() != m) {
            throw std::invalid_argument("factor set must share (p, m)");
        }
    }
    const int p = field.p();
    const int c = static_cast<int>(gs.size());
    uint64_t combos = checked_pow(p, c, kCombinerCap, "regularity combination sweep");

    RegularityCertificate cert;
    cert.threshold = threshold;
    for (uint64_t a = 1; a < combos; ++a) {
        RegularityCertificate::Record rec;
        rec.coeffs.resize(static_cast<size_t>(c));
        uint64_t rest = a;
        Polynomial combo(field, m);
        for (int i = 0; i < c; ++i) {
            rec.coeffs[static_cast<size_t>(i)] = static_cast<uint8_t>(rest % static_cast<uint64_t>(p));
            rest /= static_cast<uint64_t>(p);
            if (rec.coeffs[static_cast<size_t>(i)]) {
                combo += gs[static_cast<size_t>(i)].scaled(rec.coeffs[static_cast<size_t>(i)]);
            }
        }
        rec.degree = combo.total_degree();
        if (combo.is_zero()) {
            rec.kind = RegularityCertificate::ComboKind::violation_zero;
        } else if (combo.is_constant()) {
            rec.kind = RegularityCertificate::ComboKind::violation_constant;
        } else if (rec.degree == 1) {
            rec.kind = RegularityCertificate::ComboKind::nonconstant_linear;
        } else {
            RankResult rr = rank_at_most(combo, rec.degree.value() - 1, threshold, budget);
            if (rr.status == RankResult::Status::search_exhausted) {
                rec.kind = RegularityCertificate::ComboKind::inconclusive;
            } else if (rr.status == RankResult::Status::exact && !rr.infinite &&
                       rr.value <= threshold) {
                rec.kind = RegularityCertificate::ComboKind::violation_low_rank;
                rec.rank_value = rr.value;
            } else {
                rec.kind = RegularityCertificate::ComboKind::rank_above_threshold;
                if (rr.status == RankResult::Status::exact && !rr.infinite) {
                    rec.rank_value = rr.value;
                }
            }
        }
        cert.records.push_back(std::move(rec));
    }

    for (size_t i = 0; i < cert.records.size(); ++i) {
        auto kind = cert.records[i].kind;
        bool violating = kind == RegularityCertificate::ComboKind::violation_zero ||
                         kind == RegularityCertificate::ComboKind::violation_constant ||
                         kind == RegularityCertificate::ComboKind::violation_low_rank;
        if (violating) {
            cert.verdict = RegularityCertificate::Verdict::violation;
            cert.first_violation = i;
            break;
        }
    }
    if (cert.verdict != RegularityCertificate::Verdict::violation) {
        bool inconclusive = std::any_of(cert.records.begin(), cert.records.end(), [](const auto& r) {
            return r.kind == RegularityCertificate::ComboKind::inconclusive;
        });
        cert.verdict = inconclusive ? RegularityCertificate::Verdict::unconfirmed
                                    : RegularityCertificate::Verdict::regular;
    }
    return cert;
}

RegularizeResult regularize(const Polynomial& f, const std::function<int(int)>& threshold_map,
                            const SearchBudget& budget) {
    check_rank_pre(f);
    if (!threshold_map) throw std::invalid_argument("regularize needs a threshold map");
    const FieldParams field = f.field();
    const int m = f.vars();
    const int p = field.p();
    const int r = f.total_degree().value();
    std::vector<uint8_t> f_bytes = byte_table(f, budget.max_table_bytes);

    std::vector<Polynomial> factors{f};
    RegularizeResult result;
    result.confirmed = false;

    while (true) {
        int c = static_cast<int>(factors.size());
        if (c > budget.max_factors) break;
        int threshold = threshold_map(c);
        if (threshold < 0) throw std::invalid_argument("threshold map produced a negative value");
        result.certificate = is_regular_set(factors, threshold, budget);
        if (result.certificate.verdict == RegularityCertificate::Verdict::regular) {
            result.confirmed = true;
            break;
        }
        if (result.certificate.verdict == RegularityCertificate::Verdict::unconfirmed) break;
        if (result.refinement_steps >= budget.max_refinements) break;

        const auto& rec = result.certificate.records[*result.certificate.first_violation];
        const auto& coeffs = rec.coeffs;
        if (rec.kind == RegularityCertificate::ComboKind::violation_zero ||
            rec.kind == RegularityCertificate::ComboKind::violation_constant) {
            // The violating combination makes one factor an affine function
            // of the others; drop the highest-index factor involved.
            int drop = -1;
            for (int i = 0; i < c; ++i) {
                if (coeffs[static_cast<size_t>(i)]) drop = i;
            }
            factors.erase(factors.begin() + drop);
        } else {
            Polynomial combo(field, m);
            for (int i = 0; i < c; ++i) {
                if (coeffs[static_cast<size_t>(i)]) {
                    combo += factors[static_cast<size_t>(i)].scaled(coeffs[static_cast<size_t>(i)]);
                }
            }
            RankResult rr = rank_at_most(combo, rec.degree.value() - 1, threshold, budget);
            if (!rr.witness) break;  // same budget as the certificate pass; cannot refine
            // Replace a maximal-degree factor involved in the combination
            // (ties to the larger index) by the witness factors, all of
            // strictly smaller degree: the degree multiset shrinks, which is
            // what terminates the loop.
            int replace = -1;
            int best_degree = -1;
            for (int i = 0; i < c; ++i) {
                if (!coeffs[static_cast<size_t>(i)]) continue;
                int deg = factors[static_cast<size_t>(i)].total_degree().value();
                if (deg >= best_degree) {
                    best_degree = deg;
                    replace = i;
                }
            }
            std::vector<Polynomial> refined = rr.witness->factors;
            factors.erase(factors.begin() + replace);
            factors.insert(factors.begin() + replace, refined.begin(), refined.end());
        }
        ++result.refinement_steps;
    }

    std::vector<std::vector<uint8_t>> tables;
    tables.reserve(factors.size());
    for (const auto& g : factors) tables.push_back(byte_table(g, budget.max_table_bytes));
    auto combiner = derive_combiner(f_bytes, tables, p);
    if (!combiner) throw std::logic_error("regularize factors stopped computing f");
    result.decomposition.factors = std::move(factors);
    result.decomposition.combiner = std::move(*combiner);
    result.decomposition.factor_degree_bound = r;
    return result;
}

std::optional<BiasRankScan::Threshold> BiasRankScan::max_rank_at(const Rational& eps) const {
    for (const auto& threshold : eps_to_max_rank) {
        if (threshold.epsilon >= eps) return threshold;
    }
    return std::nullopt;
}

BiasRankScan bias_rank_scan(FieldParams field, int order, int vars, const SearchBudget& budget) {
    if (order < 1) throw std::invalid_argument("bias_rank_scan requires order >= 1");
    const int p = field.p();
    BiasRankScan scan{field, order, vars, {}, {}};

    std::vector<Exponents> basis = monomial_basis(field, order, vars);
    uint64_t codewords = checked_pow(p, static_cast<int>(basis.size()),
                                     std::max(budget.max_candidates, kScanCodewordCap),
                                     "bias_rank_scan");
    (void)codewords;
    uint64_t points = point_count(field, vars);
    if (points > budget.max_table_bytes) throw BudgetError("bias_rank_scan table too large");

    std::vector<std::vector<uint8_t>> tables;
    std::vector<int> degree_of(basis.size());
    tables.reserve(basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        tables.push_back(
            tabulate_monomial(field, vars, basis[j]).to_bytes());
        degree_of[j] = std::accumulate(basis[j].begin(), basis[j].end(), 0);
    }

    std::vector<uint8_t> state(static_cast<size_t>(points), 0);
    std::vector<uint8_t> digits(basis.size(), 0);
    Distribution uniform = uniform_distribution(field, 1);
    std::vector<uint64_t> hits(static_cast<size_t>(p), 0);

    auto consider = [&]() {
        bool deg_exact = false;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (digits[j] && degree_of[j] == order) {
                deg_exact = true;
                break;
            }
        }
        if (!deg_exact) return;
        std::fill(hits.begin(), hits.end(), 0);
        for (uint8_t v : state) ++hits[v];
        Rational dist(0);
        for (int a = 0; a < p; ++a) {
            Rational mass(static_cast<unsigned long>(hits[static_cast<size_t>(a)]),
                          static_cast<unsigned long>(points));
            mass.canonicalize();
            dist += abs_diff(mass, uniform.masses[static_cast<size_t>(a)]);
        }
        dist /= 2;
        dist.canonicalize();

        BiasRankScan::Row row;
        row.coeffs = digits;
        row.distance = std::move(dist);
        if (order == 1) {
            row.rank_infinite = true;  // degree-0 factor convention
        } else {
            Polynomial poly(field, vars);
            for (size_t j = 0; j < basis.size(); ++j) {
                if (digits[j]) poly.add_term(basis[j], digits[j]);
            }
            RankResult rr = order == 2 ? fast_path_rank(poly, budget, false)
                                       : staged_search(poly, order - 1, -1, budget, false);
            if (rr.status != RankResult::Status::exact) {
                throw BudgetError("bias_rank_scan rank search exhausted; raise max_candidates");
            }
            row.rank_value = rr.value;
        }
        scan.rows.push_back(std::move(row));
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

    // epsilon -> max rank among rows at distance >= epsilon, one entry per
    // distinct observed distance, ascending.
    std::vector<size_t> order_idx(scan.rows.size());
    std::iota(order_idx.begin(), order_idx.end(), size_t{0});
    std::sort(order_idx.begin(), order_idx.end(), [&](size_t a, size_t b) {
        return scan.rows[a].distance > scan.rows[b].distance;
    });
    bool running_infinite = false;
    int running_max = 0;
    std::vector<BiasRankScan::Threshold> descending;
    for (size_t k = 0; k < order_idx.size(); ++k) {
        const auto& row = scan.rows[order_idx[k]];
        running_infinite = running_infinite || row.rank_infinite;
        running_max = std::max(running_max, row.rank_value);
        bool last_of_value =
            k + 1 == order_idx.size() || scan.rows[order_idx[k + 1]].distance != row.distance;
        if (last_of_value) {
            descending.push_back({row.distance, running_infinite, running_max});
        }
    }
    scan.eps_to_max_rank.assign(descending.rbegin(), descending.rend());
    return scan;
}

namespace {

// compress derives thresholds from measured bias->rank tables; the scans are
// pure functions of (p, degree), so they are memoized process-wide.
const BiasRankScan& scan_for_degree(const FieldParams& field, int degree,
                                    const SearchBudget& budget) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, BiasRankScan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(field.p(), degree);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // Largest m whose full degree-<=k enumeration stays at desk scale.
    int best_m = 1;
    for (int m = 1; m <= 8; ++m) {
        CodeParams params{field, degree, m};
        BigInt n = params.codeword_count();
        if (n <= BigInt(static_cast<unsigned long>(kScanCodewordCap))) best_m = m;
    }
    SearchBudget scan_budget = budget;
    scan_budget.max_candidates = std::max(budget.max_candidates, uint64_t{1} << 22);
    return cache.emplace(key, bias_rank_scan(field, degree, best_m, scan_budget)).first->second;
}

}  // namespace

CompressResult compress(const Polynomial& f, const std::function<Rational(int)>& error_map,
                        const SearchBudget& budget) {
    check_rank_pre(f);
    if (!error_map) throw std::invalid_argument("compress needs an error map");
    const FieldParams field = f.field();
    const int p = field.p();
    const int r = f.total_degree().value();

    auto checked_error = [&](int c) {
        Rational e = error_map(c);
        if (!(e > 0 && e < 1)) {
            throw std::invalid_argument("error map must take values in (0, 1)");
        }
        return e;
    };

    // T(c) = 1 + max_k observed-C2(p, k, p^{-c} E(c)), with a one-rank safety
    // margin baked in; floored at 2 so factors of trivially low rank always
    // refine.
    auto threshold_map = [&](int c) {
        Rational eps = checked_error(c) / Rational(checked_pow(p, c, kCombinerCap, "compress"));
        int needed = 0;
        for (int k = 2; k <= r; ++k) {
            auto hit = scan_for_degree(field, k, budget).max_rank_at(eps);
            if (hit) {
                if (hit->infinite) throw std::logic_error("infinite rank in bias scan for k >= 2");
                needed = std::max(needed, hit->max_rank);
            }
        }
        return std::max(needed + 1, 2);
    };

    CompressResult result;
    result.regularization = regularize(f, threshold_map, budget);
    const Decomposition& decomposition = result.regularization.decomposition;
    result.arity = decomposition.arity();
    result.function_table = decomposition.combiner;

    std::vector<uint8_t> f_bytes = byte_table(f, budget.max_table_bytes);
    uint64_t f_points = f_bytes.size();
    uint64_t g_points = result.function_table.size();
    uint64_t f_nonzero = static_cast<uint64_t>(
        std::count_if(f_bytes.begin(), f_bytes.end(), [](uint8_t v) { return v != 0; }));
    uint64_t g_nonzero = static_cast<uint64_t>(std::count_if(
        result.function_table.begin(), result.function_table.end(), [](uint8_t v) { return v != 0; }));
    result.f_relative_weight = Rational(static_cast<unsigned long>(f_nonzero),
                                        static_cast<unsigned long>(f_points));
    result.f_relative_weight.canonicalize();
    result.g_relative_weight = Rational(static_cast<unsigned long>(g_nonzero),
                                        static_cast<unsigned long>(g_points));
    result.g_relative_weight.canonicalize();
    result.achieved_error = abs_diff(result.f_relative_weight, result.g_relative_weight);
    result.error_budget = checked_error(result.arity);

    // Full output-distribution comparison, exact on both sides.
    auto value_masses = [p](const std::vector<uint8_t>& bytes) {
        std::vector<uint64_t> hits(static_cast<size_t>(p), 0);
        for (uint8_t v : bytes) ++hits[v];
        std::vector<Rational> masses;
        for (int a = 0; a < p; ++a) {
            Rational mass(static_cast<unsigned long>(hits[static_cast<size_t>(a)]),
                          static_cast<unsigned long>(bytes.size()));
            mass.canonicalize();
            masses.push_back(std::move(mass));
        }
        return masses;
    };
    std::vector<Rational> fm = value_masses(f_bytes);
    std::vector<Rational> gm = value_masses(result.function_table);
    Rational dist(0);
    for (int a = 0; a < p; ++a) dist += abs_diff(fm[static_cast<size_t>(a)], gm[static_cast<size_t>(a)]);
    dist /= 2;
    dist.canonicalize();
    result.distribution_distance = std::move(dist);

    result.ok = result.regularization.confirmed && result.achieved_error < result.error_budget;
    return result;
}

}  // namespace grm
