#ifndef MBW_VANNMAN_HPP
#define MBW_VANNMAN_HPP

#include <span>

#include "mbw/point.hpp"

namespace mbw {

/// Vannman (1991) board-drying data: percentage of checked area for 36
/// boards under drying schedule 1 (x) and schedule 2 (y), in table order.
/// Row 19's schedule-2 entry is printed "0,02" in some reproductions and is
/// stored as 0.02.
std::span<const Point> vannman_data();

}  // namespace mbw

#endif  // MBW_VANNMAN_HPP
