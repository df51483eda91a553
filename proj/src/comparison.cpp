#include "mbw/comparison.hpp"

namespace mbw {

ModelComparison compare_models(std::span<const Point> data, const ComparisonOptions& opt) {
  ModelComparison c;
  c.m1 = fit_m1(data);
  c.m2 = fit_m2(data);
  compute_se(data, c.m2);

  std::vector<CopulaFamily> families;
  if (opt.family) {
    families.push_back(*opt.family);
  } else {
    families = {CopulaFamily::Gfgm, CopulaFamily::Gaussian};
  }
  for (CopulaFamily f : families) {
    FitConfig cfg;
    cfg.family = f;
    cfg.min_pts = opt.min_pts;
    cfg.eps = opt.eps;
    FitResult r = fit_mbw(data, cfg);
    compute_se(data, r);
    c.m3_candidates.push_back(std::move(r));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.m3_candidates.size(); ++i) {
    if (c.m3_candidates[i].aic < c.m3_candidates[best].aic) {
      best = i;
    }
  }
  c.m3 = c.m3_candidates[best];
  c.m3_vs_m2 = deviance_test(c.m3, c.m2);
  c.m2_vs_m1 = deviance_test(c.m2, c.m1);
  return c;
}

}  // namespace mbw
