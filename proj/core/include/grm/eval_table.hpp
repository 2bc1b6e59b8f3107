#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grm/polynomial.hpp"

namespace grm {

inline constexpr uint64_t kDefaultTableBudget = uint64_t{1} << 26;  // bytes

/// p^m as a uint64, rejecting sizes that cannot be indexed.
uint64_t point_count(const FieldParams& field, int vars);

/// Point x = (x_1..x_m) lives at index sum x_i * p^{i-1}: x_1 is the least
/// significant digit. This layout is shared by every table, joint-value
/// index and cache file in the library.
uint64_t point_index(const FieldParams& field, std::span<const uint8_t> point);
Point index_to_point(const FieldParams& field, int vars, uint64_t idx);

/// Packed table of all p^m values of a function F_p^m -> F_p. For p = 2 the
/// storage is one bit per point with word-wise population count; for p in
/// {3, 5, 7} one byte per point counted in a single linear pass.
class EvaluationTable {
   public:
    static EvaluationTable zeros(FieldParams field, int vars);
    static EvaluationTable from_values(FieldParams field, int vars, std::span<const uint8_t> values);
    static EvaluationTable tabulate(const Polynomial& f,
                                    uint64_t max_table_bytes = kDefaultTableBudget);

    const FieldParams& field() const { return field_; }
    int vars() const { return vars_; }
    uint64_t size() const { return size_; }
    uint64_t storage_bytes() const;

    uint8_t get(uint64_t idx) const {
        if (field_.p() == 2) return static_cast<uint8_t>((bits_[idx >> 6] >> (idx & 63)) & 1);
        return bytes_[idx];
    }
    void set(uint64_t idx, uint8_t value);

    /// this += scalar * other, entrywise mod p.
    void add_scaled(const EvaluationTable& other, uint8_t scalar);

    uint64_t count_nonzero() const;
    std::vector<uint8_t> to_bytes() const;

    bool operator==(const EvaluationTable& rhs) const;

   private:
    EvaluationTable(FieldParams field, int vars);

    FieldParams field_;
    int vars_;
    uint64_t size_;
    std::vector<uint64_t> bits_;   // p == 2
    std::vector<uint8_t> bytes_;   // p in {3, 5, 7}
};

/// Value table of a single monomial; the building block of incremental
/// tabulation.
EvaluationTable tabulate_monomial(FieldParams field, int vars, const Exponents& exps);

/// Required table bytes for (p, m), for budget checks before allocation.
uint64_t table_bytes_required(const FieldParams& field, int vars);

}  // namespace grm
