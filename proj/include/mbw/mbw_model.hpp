#ifndef MBW_MBW_MODEL_HPP
#define MBW_MBW_MODEL_HPP

#include <iosfwd>
#include <vector>

#include "mbw/bivariate_weibull.hpp"

namespace mbw {

/// Modified bivariate Weibull: with probability p a draw is uniform on the
/// square `rect` (early failures), otherwise it comes from `base`.
struct MbwParams {
  BivariateWeibull base;
  RectUniform rect;
  double p = 0.5;

  double q() const { return 1.0 - p; }
  void validate() const;
};

double mbw_pdf(double x, double y, const MbwParams& m);
double mbw_cdf(double x, double y, const MbwParams& m);
double mbw_survival(double x, double y, const MbwParams& m);

/// Piecewise hazard. Beyond the far edges of the square the uniform
/// component is exhausted and the hazard is that of the base distribution.
double mbw_hazard(double x, double y, const MbwParams& m);

/// w = p R_1 / R, the share of the surviving mass held by the uniform part.
double mixture_weight(double x, double y, const MbwParams& m);

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double step = 0.05;

  void validate() const;
};

struct GridRow {
  double x = 0.0;
  double y = 0.0;
  double f = 0.0;
  double R = 0.0;
  double h = 0.0;
};

/// Evaluations on a rectangular lattice, x-major (all y for the first x,
/// then the next x). h is the ratio f/R at each node.
std::vector<GridRow> hazard_grid(const MbwParams& m, const GridSpec& grid);

/// CSV with header `x,y,f,R,h`, 17 significant digits.
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

}  // namespace mbw

#endif  // MBW_MBW_MODEL_HPP
