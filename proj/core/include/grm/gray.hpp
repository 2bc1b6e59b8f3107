#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace grm {

/// Loopless reflected mixed-radix Gray walk over `digits` base-`radix`
/// digits. `a` is reset to all zeros (the first visited state) and then
/// apply(j, dir) fires once per step with the changed digit and its +1/-1
/// direction; exactly radix^digits states are visited including the initial
/// one. Successive states differ in a single digit by one unit, which is
/// what makes incremental table updates one add per codeword.
template <typename Apply>
void gray_walk(int radix, int digits, std::vector<uint8_t>& a, Apply&& apply) {
    a.assign(static_cast<size_t>(digits), 0);
    std::vector<int8_t> dir(static_cast<size_t>(digits), 1);
    std::vector<int> focus(static_cast<size_t>(digits) + 1);
    std::iota(focus.begin(), focus.end(), 0);
    while (true) {
        int j = focus[0];
        focus[0] = 0;
        if (j == digits) break;
        int8_t d = dir[static_cast<size_t>(j)];
        a[static_cast<size_t>(j)] = static_cast<uint8_t>(a[static_cast<size_t>(j)] + d);
        apply(j, d);
        if (a[static_cast<size_t>(j)] == 0 ||
            a[static_cast<size_t>(j)] == static_cast<uint8_t>(radix - 1)) {
            dir[static_cast<size_t>(j)] = static_cast<int8_t>(-d);
            focus[static_cast<size_t>(j)] = focus[static_cast<size_t>(j) + 1];
            focus[static_cast<size_t>(j) + 1] = j + 1;
        }
    }
}

}  // namespace grm
