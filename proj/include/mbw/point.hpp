#ifndef MBW_POINT_HPP
#define MBW_POINT_HPP

namespace mbw {

/// One bivariate lifetime observation.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

}  // namespace mbw

#endif  // MBW_POINT_HPP
