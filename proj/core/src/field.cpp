#include "grm/field.hpp"

#include <stdexcept>
#include <string>

namespace grm {

FieldParams::FieldParams(int p) : p_(p) {
    if (!is_supported_prime(p)) {
        throw std::invalid_argument("unsupported prime p=" + std::to_string(p) +
                                    " (supported: 2, 3, 5, 7)");
    }
}

uint8_t FieldParams::inv(uint8_t a) const {
    if (a % p_ == 0) throw std::invalid_argument("inverse of 0 in F_p");
    // p <= 7, Fermat: a^{p-2}
    return pow(a, static_cast<unsigned>(p_ - 2));
}

uint8_t FieldParams::pow(uint8_t a, unsigned e) const noexcept {
    int base = a % p_;
    int acc = 1;
    while (e > 0) {
        if (e & 1u) acc = (acc * base) % p_;
        base = (base * base) % p_;
        e >>= 1u;
    }
    return static_cast<uint8_t>(acc);
}

uint8_t FieldParams::reduce(long long v) const noexcept {
    long long r = v % p_;
    if (r < 0) r += p_;
    return static_cast<uint8_t>(r);
}

}  // namespace grm
