#include "mbw/mbw_model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

void require_nonnegative(double x, double y, const char* what) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw DomainError(std::string(what) + ": coordinates must be >= 0");
  }
}

bool beyond_square(double x, double y, const RectUniform& r) {
  return x >= r.x0 + r.d || y >= r.y0 + r.d;
}

std::vector<double> lattice(double lo, double hi, double step) {
  std::vector<double> nodes;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    nodes.push_back(lo + static_cast<double>(i) * step);
  }
  return nodes;
}

}  // namespace

void MbwParams::validate() const {
  base.validate();
  rect.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("mixing weight p must lie in (0, 1)");
  }
}

double mbw_pdf(double x, double y, const MbwParams& m) {
  require_nonnegative(x, y, "mbw_pdf");
  m.validate();
  const double weibull_part = m.q() * bvw_pdf(x, y, m.base);
  if (m.rect.contains(x, y)) {
    return m.p / (m.rect.d * m.rect.d) + weibull_part;
  }
  return weibull_part;
}

double mbw_cdf(double x, double y, const MbwParams& m) {
  require_nonnegative(x, y, "mbw_cdf");
  m.validate();
  return m.p * rect_cdf(x, y, m.rect) + m.q() * bvw_cdf(x, y, m.base);
}

double mbw_survival(double x, double y, const MbwParams& m) {
  require_nonnegative(x, y, "mbw_survival");
  m.validate();
  return m.p * rect_survival(x, y, m.rect) + m.q() * bvw_survival(x, y, m.base);
}

double mbw_hazard(double x, double y, const MbwParams& m) {
  require_nonnegative(x, y, "mbw_hazard");
  m.validate();
  if (beyond_square(x, y, m.rect)) {
    return bvw_hazard(x, y, m.base);
  }
  const double r = mbw_survival(x, y, m);
  if (!(r > 0.0)) {
    throw OverflowError("mbw_hazard: survival is not positive");
  }
  return mbw_pdf(x, y, m) / r;
}

double mixture_weight(double x, double y, const MbwParams& m) {
  require_nonnegative(x, y, "mixture_weight");
  m.validate();
  if (beyond_square(x, y, m.rect)) {
    return 0.0;
  }
  const double r = mbw_survival(x, y, m);
  if (!(r > 0.0)) {
    throw OverflowError("mixture_weight: survival is not positive");
  }
  return m.p * rect_survival(x, y, m.rect) / r;
}

void GridSpec::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError("grid step must be positive");
  }
  if (!(x_min >= 0.0) || !(y_min >= 0.0)) {
    throw DomainError("grid ranges must start at a nonnegative value");
  }
  if (!(x_max >= x_min) || !(y_max >= y_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_max)) {
    throw DomainError("grid maximum must not be below its minimum");
  }
}

std::vector<GridRow> hazard_grid(const MbwParams& m, const GridSpec& grid) {
  grid.validate();
  m.validate();
  const auto xs = lattice(grid.x_min, grid.x_max, grid.step);
  const auto ys = lattice(grid.y_min, grid.y_max, grid.step);
  std::vector<GridRow> rows;
  rows.reserve(xs.size() * ys.size());
  for (double x : xs) {
    for (double y : ys) {
      GridRow row{x, y, mbw_pdf(x, y, m), mbw_survival(x, y, m), 0.0};
      row.h = row.f / row.R;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "x,y,f,R,h\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.x, r.y, r.f, r.R,
                  r.h);
    out << buf;
  }
}

}  // namespace mbw
