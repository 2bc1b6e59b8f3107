#pragma once

#include <cstdint>

namespace grm {

/// The prime field F_p. Only small primes are supported: enumeration is
/// feasible only for tiny p and the packed-table strategies are specialized
/// per prime (bit packing for p = 2, byte lanes for 3, 5, 7).
class FieldParams {
   public:
    explicit FieldParams(int p);

    int p() const noexcept { return p_; }

    uint8_t add(uint8_t a, uint8_t b) const noexcept {
        int s = a + b;
        return static_cast<uint8_t>(s >= p_ ? s - p_ : s);
    }
    uint8_t sub(uint8_t a, uint8_t b) const noexcept {
        int s = a - b;
        return static_cast<uint8_t>(s < 0 ? s + p_ : s);
    }
    uint8_t neg(uint8_t a) const noexcept { return a == 0 ? 0 : static_cast<uint8_t>(p_ - a); }
    uint8_t mul(uint8_t a, uint8_t b) const noexcept { return static_cast<uint8_t>((a * b) % p_); }
    uint8_t inv(uint8_t a) const;                 // throws std::invalid_argument on 0
    uint8_t pow(uint8_t a, unsigned e) const noexcept;
    uint8_t reduce(long long v) const noexcept;   // canonical representative in [0, p)

    bool operator==(const FieldParams&) const noexcept = default;

    static bool is_supported_prime(int p) noexcept { return p == 2 || p == 3 || p == 5 || p == 7; }

   private:
    int p_;
};

}  // namespace grm
