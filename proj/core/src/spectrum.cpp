#include "grm/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "grm/errors.hpp"
#include "grm/gray.hpp"
#include "grm/version.hpp"

namespace grm {

std::string mode_str(EnumerationMode mode) {
    return mode == EnumerationMode::full ? "full" : "symmetry-reduced";
}

EnumerationMode mode_from_str(const std::string& s) {
    if (s == "full") return EnumerationMode::full;
    if (s == "symmetry-reduced" || s == "reduced") return EnumerationMode::symmetry_reduced;
    throw std::invalid_argument("unknown enumeration mode '" + s + "'");
}

uint64_t CodeParams::dimension() const {
    if (order < 0) throw std::invalid_argument("negative order");
    if (vars < 0) throw std::invalid_argument("negative variable count");
    // Count exponent vectors with entries <= p-1 and total degree <= order.
    std::vector<uint64_t> ways(static_cast<size_t>(order) + 1, 0);
    ways[0] = 1;
    for (int v = 0; v < vars; ++v) {
        std::vector<uint64_t> next(ways.size(), 0);
        for (size_t d = 0; d < ways.size(); ++d) {
            if (ways[d] == 0) continue;
            for (int e = 0; e < field.p() && d + static_cast<size_t>(e) < next.size(); ++e) {
                uint64_t& slot = next[d + static_cast<size_t>(e)];
                if (slot > UINT64_MAX - ways[d]) throw BudgetError("code dimension overflows");
                slot += ways[d];
            }
        }
        ways = std::move(next);
    }
    return std::accumulate(ways.begin(), ways.end(), uint64_t{0});
}

BigInt CodeParams::codeword_count() const {
    BigInt n;
    mpz_ui_pow_ui(n.get_mpz_t(), static_cast<unsigned long>(field.p()),
                  static_cast<unsigned long>(dimension()));
    return n;
}

BigInt WeightSpectrum::total() const {
    BigInt t = 0;
    for (const auto& [w, c] : counts) {
        (void)w;
        t += c;
    }
    return t;
}

std::pair<uint64_t, PExactRational> weight(const Polynomial& f, uint64_t max_table_bytes) {
    EvaluationTable t = EvaluationTable::tabulate(f, max_table_bytes);
    uint64_t count = t.count_nonzero();
    return {count, PExactRational::from_fraction(BigInt(static_cast<unsigned long>(count)),
                                                 f.field().p(),
                                                 static_cast<unsigned>(f.vars()))};
}

namespace {

// Weight accumulator: dense when p^m is small, map otherwise.
struct CountSink {
    explicit CountSink(uint64_t points) {
        if (points + 1 <= (uint64_t{1} << 20)) dense.assign(static_cast<size_t>(points) + 1, 0);
    }
    void hit(uint64_t w) {
        if (!dense.empty())
            ++dense[static_cast<size_t>(w)];
        else
            ++sparse[w];
    }
    void drain_into(std::map<uint64_t, BigInt>& counts) const {
        if (!dense.empty()) {
            for (uint64_t w = 0; w < dense.size(); ++w) {
                if (dense[static_cast<size_t>(w)]) counts[w] += dense[static_cast<size_t>(w)];
            }
        } else {
            for (const auto& [w, c] : sparse) counts[w] += c;
        }
    }
    std::vector<uint64_t> dense;
    std::map<uint64_t, uint64_t> sparse;
};

std::vector<std::vector<uint64_t>> pack_bit_tables(std::span<const EvaluationTable> basis,
                                                   uint64_t points) {
    size_t words = static_cast<size_t>((points + 63) / 64);
    std::vector<std::vector<uint64_t>> masks(basis.size(), std::vector<uint64_t>(words, 0));
    for (size_t i = 0; i < basis.size(); ++i) {
        for (uint64_t x = 0; x < points; ++x) {
            if (basis[i].get(x)) masks[i][static_cast<size_t>(x >> 6)] |= uint64_t{1} << (x & 63);
        }
    }
    return masks;
}

// Per-block Gray enumeration for p = 2. base holds the fixed-prefix
// codeword's packed table; low digit j toggles masks[j].
template <typename Visit>
void run_block_p2(const std::vector<std::vector<uint64_t>>& masks, int low_digits,
                  std::vector<uint64_t> state, Visit&& visit) {
    std::vector<uint8_t> a(static_cast<size_t>(low_digits), 0);
    if (state.size() == 1) {
        uint64_t st = state[0];
        visit(static_cast<uint64_t>(std::popcount(st)), a);
        gray_walk(2, low_digits, a, [&](int j, int8_t) {
            st ^= masks[static_cast<size_t>(j)][0];
            visit(static_cast<uint64_t>(std::popcount(st)), a);
        });
        return;
    }
    auto popcount_all = [&](const std::vector<uint64_t>& words) {
        uint64_t w = 0;
        for (uint64_t v : words) w += static_cast<uint64_t>(std::popcount(v));
        return w;
    };
    visit(popcount_all(state), a);
    gray_walk(2, low_digits, a, [&](int j, int8_t) {
        const auto& mask = masks[static_cast<size_t>(j)];
        for (size_t i = 0; i < state.size(); ++i) state[i] ^= mask[i];
        visit(popcount_all(state), a);
    });
}

// Per-block Gray enumeration for odd p on byte tables. scaled[j][s-1] is the
// table of s * monomial_j, so a -1 step adds the (p-1)-scaled table.
template <typename Visit>
void run_block_bytes(int p, const std::vector<std::vector<std::vector<uint8_t>>>& scaled,
                     int low_digits, std::vector<uint8_t> state, Visit&& visit) {
    std::vector<uint8_t> a(static_cast<size_t>(low_digits), 0);
    uint64_t nonzero = 0;
    for (uint8_t v : state) nonzero += v != 0;
    visit(nonzero, a);
    gray_walk(p, low_digits, a, [&](int j, int8_t d) {
        int s = d > 0 ? 1 : p - 1;
        const uint8_t* add = scaled[static_cast<size_t>(j)][static_cast<size_t>(s - 1)].data();
        uint64_t w = 0;
        uint8_t* st = state.data();
        const size_t n = state.size();
        for (size_t i = 0; i < n; ++i) {
            uint8_t v = static_cast<uint8_t>(st[i] + add[i]);
            if (v >= p) v = static_cast<uint8_t>(v - p);
            st[i] = v;
            w += v != 0;
        }
        visit(w, a);
    });
}

// Coefficient-vector transforms induced by variable permutations composed
// with translations; used by symmetry-reduced enumeration. image[g][j] is
// the coefficient vector of the j-th basis monomial under group element g.
struct OrbitGroup {
    std::vector<std::vector<std::vector<uint8_t>>> image;
    size_t dim = 0;
    int p = 2;

    bool is_canonical(const std::vector<uint8_t>& coeffs) const {
        std::vector<uint8_t> transformed(dim);
        for (const auto& mat : image) {
            std::fill(transformed.begin(), transformed.end(), 0);
            for (size_t j = 0; j < dim; ++j) {
                uint8_t c = coeffs[j];
                if (c == 0) continue;
                const auto& col = mat[j];
                for (size_t k = 0; k < dim; ++k) {
                    transformed[k] = static_cast<uint8_t>((transformed[k] + c * col[k]) % p);
                }
            }
            if (transformed < coeffs) return false;
        }
        return true;
    }
};

OrbitGroup build_orbit_group(const CodeParams& params, const std::vector<Exponents>& basis) {
    const FieldParams& field = params.field;
    const int m = params.vars;
    uint64_t points = point_count(field, m);
    uint64_t perms = 1;
    for (int i = 2; i <= m; ++i) perms *= static_cast<uint64_t>(i);
    if (perms * points > 100000) {
        throw BudgetError("symmetry-reduced mode: relabeling group has " +
                          std::to_string(perms * points) + " elements (cap 100000)");
    }
    std::map<Exponents, size_t> index_of;
    for (size_t j = 0; j < basis.size(); ++j) index_of[basis[j]] = j;

    OrbitGroup group;
    group.dim = basis.size();
    group.p = field.p();
    std::vector<int> perm(static_cast<size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (uint64_t t = 0; t < points; ++t) {
            Point translation = index_to_point(field, m, t);
            std::vector<std::vector<uint8_t>> linear(
                static_cast<size_t>(m), std::vector<uint8_t>(static_cast<size_t>(m), 0));
            for (int i = 0; i < m; ++i) {
                linear[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])] = 1;
            }
            AffineMap map(field, std::move(linear), translation);
            std::vector<std::vector<uint8_t>> mat(group.dim);
            for (size_t j = 0; j < basis.size(); ++j) {
                Polynomial mono = Polynomial::monomial(field, m, basis[j]);
                Polynomial img = apply_affine(mono, map);
                std::vector<uint8_t> col(group.dim, 0);
                for (const auto& [exps, coeff] : img.terms()) col[index_of.at(exps)] = coeff;
                mat[j] = std::move(col);
            }
            group.image.push_back(std::move(mat));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return group;
}

struct EnumerationPlan {
    uint64_t dim = 0;
    int top_digits = 0;       // fixed per block
    int low_digits = 0;
    uint64_t blocks = 1;      // p^top_digits
    uint64_t points = 0;
};

EnumerationPlan plan_enumeration(const CodeParams& params, const EnumerationBudget& budget,
                                 int workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    EnumerationPlan plan;
    plan.dim = params.dimension();
    plan.points = point_count(params.field, params.vars);

    BigInt codewords = params.codeword_count();
    if (codewords > BigInt(std::to_string(budget.max_codewords))) {
        throw BudgetError("enumeration of RM_" + std::to_string(params.field.p()) + "(" +
                          std::to_string(params.order) + "," + std::to_string(params.vars) +
                          ") needs " + codewords.get_str() + " codewords (dim=" +
                          std::to_string(plan.dim) + ", estimated cost " + codewords.get_str() +
                          " x " + std::to_string(plan.points) + "-point table updates); budget is " +
                          std::to_string(budget.max_codewords));
    }
    uint64_t need = table_bytes_required(params.field, params.vars);
    if (need > budget.max_table_bytes) {
        throw BudgetError("value table needs " + std::to_string(need) + " bytes, budget is " +
                          std::to_string(budget.max_table_bytes));
    }

    int d = 0;
    uint64_t blocks = 1;
    while (blocks < static_cast<uint64_t>(workers) && d < static_cast<int>(plan.dim)) {
        blocks *= static_cast<uint64_t>(params.field.p());
        ++d;
    }
    plan.top_digits = d;
    plan.blocks = blocks;
    plan.low_digits = static_cast<int>(plan.dim) - d;
    return plan;
}

}  // namespace

WeightSpectrum enumerate_spectrum_with_basis(const CodeParams& params,
                                             std::span<const EvaluationTable> basis,
                                             const EnumerationBudget& budget, int workers) {
    EnumerationPlan plan = plan_enumeration(params, budget, workers);
    if (basis.size() != plan.dim) {
        throw std::invalid_argument("basis table count does not match code dimension");
    }
    const FieldParams& field = params.field;
    const int p = field.p();

    // Precompute packed forms of the basis tables once.
    std::vector<std::vector<uint64_t>> masks;
    std::vector<std::vector<std::vector<uint8_t>>> scaled;
    if (p == 2) {
        masks = pack_bit_tables(basis, plan.points);
    } else {
        scaled.resize(basis.size());
        for (size_t j = 0; j < basis.size(); ++j) {
            std::vector<uint8_t> bytes = basis[j].to_bytes();
            scaled[j].assign(static_cast<size_t>(p - 1), bytes);
            for (int s = 2; s < p; ++s) {
                auto& table = scaled[j][static_cast<size_t>(s - 1)];
                for (auto& v : table) v = static_cast<uint8_t>(v * s % p);
            }
        }
    }

    std::vector<CountSink> block_sinks;
    block_sinks.reserve(static_cast<size_t>(plan.blocks));
    for (uint64_t b = 0; b < plan.blocks; ++b) block_sinks.emplace_back(plan.points);

    auto run_block = [&](uint64_t block) {
        // Fixed top Gray digits: digit t of the block id is the coefficient
        // of basis element low_digits + t.
        std::vector<uint8_t> high(static_cast<size_t>(plan.top_digits));
        uint64_t b = block;
        for (int t = 0; t < plan.top_digits; ++t) {
            high[static_cast<size_t>(t)] = static_cast<uint8_t>(b % static_cast<uint64_t>(p));
            b /= static_cast<uint64_t>(p);
        }
        CountSink& sink = block_sinks[static_cast<size_t>(block)];
        auto count_visit = [&](uint64_t w, const std::vector<uint8_t>&) { sink.hit(w); };
        if (p == 2) {
            std::vector<uint64_t> base(masks.empty() ? (plan.points + 63) / 64 : masks[0].size(), 0);
            for (int t = 0; t < plan.top_digits; ++t) {
                if (high[static_cast<size_t>(t)]) {
                    const auto& mask = masks[static_cast<size_t>(plan.low_digits + t)];
                    for (size_t i = 0; i < base.size(); ++i) base[i] ^= mask[i];
                }
            }
            run_block_p2(masks, plan.low_digits, std::move(base), count_visit);
        } else {
            std::vector<uint8_t> base(static_cast<size_t>(plan.points), 0);
            for (int t = 0; t < plan.top_digits; ++t) {
                uint8_t c = high[static_cast<size_t>(t)];
                if (c) {
                    const auto& table =
                        scaled[static_cast<size_t>(plan.low_digits + t)][static_cast<size_t>(c - 1)];
                    for (size_t i = 0; i < base.size(); ++i) {
                        base[i] = static_cast<uint8_t>((base[i] + table[i]) % p);
                    }
                }
            }
            run_block_bytes(p, scaled, plan.low_digits, std::move(base), count_visit);
        }
    };

    if (workers == 1 || plan.blocks == 1) {
        for (uint64_t b = 0; b < plan.blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (uint64_t b = static_cast<uint64_t>(w); b < plan.blocks;
                     b += static_cast<uint64_t>(workers)) {
                    run_block(b);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    WeightSpectrum spectrum;
    spectrum.params = params;
    spectrum.mode = EnumerationMode::full;
    spectrum.worker_partitions = workers;
    spectrum.tool_version = kToolVersion;
    for (const auto& sink : block_sinks) sink.drain_into(spectrum.counts);
    return spectrum;
}

namespace {

WeightSpectrum enumerate_reduced(const CodeParams& params, const std::vector<Exponents>& basis,
                                 std::span<const EvaluationTable> tables,
                                 const EnumerationBudget& budget) {
    EnumerationPlan plan = plan_enumeration(params, budget, 1);
    OrbitGroup group = build_orbit_group(params, basis);
    const int p = params.field.p();

    // Single block; the canonical-form check dominates, so the generic byte
    // core is used for every p.
    std::vector<std::vector<std::vector<uint8_t>>> scaled(tables.size());
    for (size_t j = 0; j < tables.size(); ++j) {
        std::vector<uint8_t> bytes = tables[j].to_bytes();
        scaled[j].assign(static_cast<size_t>(p - 1), bytes);
        for (int s = 2; s < p; ++s) {
            auto& table = scaled[j][static_cast<size_t>(s - 1)];
            for (auto& v : table) v = static_cast<uint8_t>(v * s % p);
        }
    }
    CountSink sink(plan.points);
    std::vector<uint8_t> coeffs(static_cast<size_t>(plan.dim), 0);
    auto visit = [&](uint64_t w, const std::vector<uint8_t>& a) {
        std::copy(a.begin(), a.end(), coeffs.begin());
        if (group.is_canonical(coeffs)) sink.hit(w);
    };
    run_block_bytes(p, scaled, static_cast<int>(plan.dim),
                    std::vector<uint8_t>(static_cast<size_t>(plan.points), 0), visit);

    WeightSpectrum spectrum;
    spectrum.params = params;
    spectrum.mode = EnumerationMode::symmetry_reduced;
    spectrum.worker_partitions = 1;
    spectrum.tool_version = kToolVersion;
    sink.drain_into(spectrum.counts);
    return spectrum;
}

}  // namespace

WeightSpectrum enumerate_spectrum(const CodeParams& params, const EnumerationBudget& budget,
                                  int workers, EnumerationMode mode) {
    std::vector<Exponents> basis = monomial_basis(params.field, params.order, params.vars);
    std::vector<EvaluationTable> tables;
    tables.reserve(basis.size());
    for (const auto& exps : basis) {
        tables.push_back(tabulate_monomial(params.field, params.vars, exps));
    }
    if (mode == EnumerationMode::symmetry_reduced) {
        return enumerate_reduced(params, basis, tables, budget);
    }
    return enumerate_spectrum_with_basis(params, tables, budget, workers);
}

std::vector<PExactRational> weight_set(const WeightSpectrum& spectrum) {
    std::vector<PExactRational> out;
    out.reserve(spectrum.counts.size());
    for (const auto& [w, count] : spectrum.counts) {
        if (count > 0) {
            out.push_back(PExactRational::from_fraction(BigInt(std::to_string(w)),
                                                        spectrum.params.field.p(),
                                                        static_cast<unsigned>(spectrum.params.vars)));
        }
    }
    return out;  // counts map is ordered by weight, so this is sorted
}

WeightSpectrum merge_spectra(std::span<const WeightSpectrum> parts) {
    if (parts.empty()) throw std::invalid_argument("no spectra to merge");
    WeightSpectrum out;
    out.params = parts[0].params;
    out.mode = parts[0].mode;
    out.worker_partitions = 0;
    out.tool_version = parts[0].tool_version;
    if (out.mode != EnumerationMode::full) {
        throw std::invalid_argument("only full-mode spectra can be merged");
    }
    for (const auto& part : parts) {
        if (!(part.params == out.params) || part.mode != out.mode) {
            throw std::invalid_argument("cannot merge spectra with mismatched params");
        }
        out.worker_partitions += part.worker_partitions;
        for (const auto& [w, c] : part.counts) out.counts[w] += c;
    }
    BigInt expected = out.params.codeword_count();
    if (out.total() != expected) {
        throw std::invalid_argument("merged spectrum totals " + out.total().get_str() +
                                    " codewords, expected " + expected.get_str() +
                                    " (lost or duplicated partition)");
    }
    return out;
}

}  // namespace grm
