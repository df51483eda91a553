#ifndef MBW_TESTS_PROPERTIES_IMPL_HPP
#define MBW_TESTS_PROPERTIES_IMPL_HPP

#include <algorithm>
#include <cmath>

namespace mbw::testing {

template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace mbw::testing

#endif  // MBW_TESTS_PROPERTIES_IMPL_HPP
