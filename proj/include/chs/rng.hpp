#pragma once

#include <array>
#include <cstdint>

namespace chs {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Pure
/// function of (counter, key); no state, so draws are independent of the
/// order in which they are requested.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Box-Muller pair from one Philox block.
std::array<double, 2> normal_pair(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

}  // namespace chs
