#include "grm/eval_table.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "grm/errors.hpp"

namespace grm {

uint64_t point_count(const FieldParams& field, int vars) {
    if (vars < 0) throw std::invalid_argument("negative variable count");
    uint64_t n = 1;
    for (int i = 0; i < vars; ++i) {
        if (n > (uint64_t{1} << 62) / static_cast<uint64_t>(field.p())) {
            throw BudgetError("p^m does not fit an addressable table: p=" +
                              std::to_string(field.p()) + " m=" + std::to_string(vars));
        }
        n *= static_cast<uint64_t>(field.p());
    }
    return n;
}

uint64_t point_index(const FieldParams& field, std::span<const uint8_t> point) {
    uint64_t idx = 0;
    for (size_t i = point.size(); i-- > 0;) {
        idx = idx * static_cast<uint64_t>(field.p()) + point[i] % field.p();
    }
    return idx;
}

Point index_to_point(const FieldParams& field, int vars, uint64_t idx) {
    Point x(static_cast<size_t>(vars));
    for (int i = 0; i < vars; ++i) {
        x[static_cast<size_t>(i)] = static_cast<uint8_t>(idx % static_cast<uint64_t>(field.p()));
        idx /= static_cast<uint64_t>(field.p());
    }
    return x;
}

uint64_t table_bytes_required(const FieldParams& field, int vars) {
    uint64_t n = point_count(field, vars);
    return field.p() == 2 ? (n + 7) / 8 : n;
}

EvaluationTable::EvaluationTable(FieldParams field, int vars)
    : field_(field), vars_(vars), size_(point_count(field, vars)) {
    if (field_.p() == 2) {
        bits_.assign(static_cast<size_t>((size_ + 63) / 64), 0);
    } else {
        bytes_.assign(static_cast<size_t>(size_), 0);
    }
}

EvaluationTable EvaluationTable::zeros(FieldParams field, int vars) {
    return EvaluationTable(field, vars);
}

EvaluationTable EvaluationTable::from_values(FieldParams field, int vars,
                                             std::span<const uint8_t> values) {
    EvaluationTable t(field, vars);
    if (values.size() != t.size_) throw std::invalid_argument("value vector has wrong length");
    for (uint64_t i = 0; i < t.size_; ++i) t.set(i, values[i]);
    return t;
}

uint64_t EvaluationTable::storage_bytes() const {
    return field_.p() == 2 ? bits_.size() * 8 : bytes_.size();
}

void EvaluationTable::set(uint64_t idx, uint8_t value) {
    value = field_.reduce(value);
    if (field_.p() == 2) {
        uint64_t mask = uint64_t{1} << (idx & 63);
        if (value)
            bits_[idx >> 6] |= mask;
        else
            bits_[idx >> 6] &= ~mask;
    } else {
        bytes_[idx] = value;
    }
}

void EvaluationTable::add_scaled(const EvaluationTable& other, uint8_t scalar) {
    if (!(field_ == other.field_) || vars_ != other.vars_) {
        throw std::invalid_argument("table shape mismatch");
    }
    scalar = field_.reduce(scalar);
    if (scalar == 0) return;
    if (field_.p() == 2) {
        for (size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
        return;
    }
    const int p = field_.p();
    for (size_t i = 0; i < bytes_.size(); ++i) {
        int v = bytes_[i] + scalar * other.bytes_[i];
        bytes_[i] = static_cast<uint8_t>(v % p);
    }
}

uint64_t EvaluationTable::count_nonzero() const {
    if (field_.p() == 2) {
        uint64_t count = 0;
        for (uint64_t w : bits_) count += static_cast<uint64_t>(std::popcount(w));
        return count;
    }
    uint64_t count = 0;
    for (uint8_t v : bytes_) count += v != 0;
    return count;
}

std::vector<uint8_t> EvaluationTable::to_bytes() const {
    std::vector<uint8_t> out(static_cast<size_t>(size_));
    for (uint64_t i = 0; i < size_; ++i) out[static_cast<size_t>(i)] = get(i);
    return out;
}

bool EvaluationTable::operator==(const EvaluationTable& rhs) const {
    return field_ == rhs.field_ && vars_ == rhs.vars_ && bits_ == rhs.bits_ && bytes_ == rhs.bytes_;
}

EvaluationTable tabulate_monomial(FieldParams field, int vars, const Exponents& exps) {
    if (exps.size() != static_cast<size_t>(vars)) {
        throw std::invalid_argument("exponent vector length does not match variable count");
    }
    EvaluationTable t = EvaluationTable::zeros(field, vars);
    Point x(static_cast<size_t>(vars), 0);
    const uint64_t n = t.size();
    for (uint64_t idx = 0; idx < n; ++idx) {
        int prod = 1;
        for (size_t i = 0; i < x.size() && prod != 0; ++i) {
            if (exps[i] != 0) prod = (prod * field.pow(x[i], exps[i])) % field.p();
        }
        if (prod != 0) t.set(idx, static_cast<uint8_t>(prod));
        // odometer with x_1 in the least significant position
        size_t i = 0;
        while (i < x.size() && x[i] == field.p() - 1) x[i++] = 0;
        if (i < x.size()) ++x[i];
    }
    return t;
}

EvaluationTable EvaluationTable::tabulate(const Polynomial& f, uint64_t max_table_bytes) {
    uint64_t need = table_bytes_required(f.field(), f.vars());
    if (need > max_table_bytes) {
        throw BudgetError("evaluation table needs " + std::to_string(need) +
                          " bytes, budget is " + std::to_string(max_table_bytes));
    }
    EvaluationTable t = EvaluationTable::zeros(f.field(), f.vars());
    // One monomial table at a time, accumulated into the running table.
    for (const auto& [exps, coeff] : f.terms()) {
        t.add_scaled(tabulate_monomial(f.field(), f.vars(), exps), coeff);
    }
    return t;
}

}  // namespace grm
