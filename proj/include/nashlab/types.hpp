#pragma once

#include <cstdint>

namespace nashlab {

using NodeId = int32_t;
using InfosetId = int32_t;
using PlayerId = int32_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr InfosetId kNoInfoset = -1;
inline constexpr PlayerId kChancePlayer = -1;

}  // namespace nashlab
