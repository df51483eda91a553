#ifndef MBW_NELDER_MEAD_HPP
#define MBW_NELDER_MEAD_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mbw {

struct NelderMeadOptions {
  /// Offset of each initial vertex from the start along one axis.
  double initial_step = 0.1;
  /// Converged when max f - min f over the simplex falls below this.
  double f_tol = 1e-8;
  /// Total objective evaluations across all restarts.
  std::size_t max_evaluations = 5000;
  /// After convergence the search restarts from the best vertex with a fresh
  /// simplex, until a restart no longer improves the minimum by f_tol.
  int max_restarts = 8;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  int restarts = 0;
  bool converged = false;
};

/// Derivative-free simplex minimisation. Non-finite objective values are
/// treated as +inf, so infeasible points can be signalled that way.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& opt = {});

}  // namespace mbw

#endif  // MBW_NELDER_MEAD_HPP
