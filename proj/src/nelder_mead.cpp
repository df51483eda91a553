#include "mbw/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Search {
  const std::function<double(std::span<const double>)>& f;
  const NelderMeadOptions& opt;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;

  double eval(const std::vector<double>& x) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
  }

  bool exhausted() const { return evaluations >= opt.max_evaluations; }

  // One simplex run from `start`. Returns true when the f-spread criterion
  // was met before the budget ran out.
  bool run(std::vector<double>& best_x, double& best_f) {
    const std::size_t n = best_x.size();
    std::vector<std::vector<double>> simplex(n + 1, best_x);
    std::vector<double> values(n + 1);
    values[0] = best_f;
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += opt.initial_step;
      values[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point_along = [&](std::vector<double>& out, double t, const std::vector<double>& w) {
      for (std::size_t j = 0; j < n; ++j) {
        out[j] = centroid[j] + t * (w[j] - centroid[j]);
      }
    };

    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[n - 1];

      best_x = simplex[lo];
      best_f = values[lo];
      if (std::isfinite(values[hi]) && values[hi] - values[lo] < opt.f_tol) {
        return true;
      }
      if (exhausted()) {
        return false;
      }
      ++iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == hi) {
          continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
          centroid[j] += simplex[k][j] / static_cast<double>(n);
        }
      }

      point_along(trial, -1.0, simplex[hi]);  // reflection
      const double fr = eval(trial);
      if (fr < values[lo]) {
        point_along(trial2, -2.0, simplex[hi]);  // expansion
        const double fe = eval(trial2);
        if (fe < fr) {
          simplex[hi] = trial2, values[hi] = fe;
        } else {
          simplex[hi] = trial, values[hi] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[hi] = trial, values[hi] = fr;
        continue;
      }
      if (fr < values[hi]) {
        point_along(trial2, -0.5, simplex[hi]);  // outside contraction
        const double fc = eval(trial2);
        if (fc <= fr) {
          simplex[hi] = trial2, values[hi] = fc;
          continue;
        }
      } else {
        point_along(trial2, 0.5, simplex[hi]);  // inside contraction
        const double fc = eval(trial2);
        if (fc < values[hi]) {
          simplex[hi] = trial2, values[hi] = fc;
          continue;
        }
      }
      for (std::size_t k = 0; k <= n; ++k) {  // shrink toward the best vertex
        if (k == lo) {
          continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
          simplex[k][j] = simplex[lo][j] + 0.5 * (simplex[k][j] - simplex[lo][j]);
        }
        values[k] = eval(simplex[k]);
      }
    }
  }
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& opt) {
  if (start.empty()) {
    throw DomainError("nelder_mead: empty parameter vector");
  }
  Search search{f, opt};
  NelderMeadResult result;
  result.x = std::move(start);
  result.value = search.eval(result.x);
  if (!std::isfinite(result.value)) {
    throw DomainError("nelder_mead: objective is not finite at the starting point");
  }

  bool converged = search.run(result.x, result.value);
  for (int r = 0; converged && r < opt.max_restarts && !search.exhausted(); ++r) {
    const double before = result.value;
    converged = search.run(result.x, result.value);
    ++result.restarts;
    if (before - result.value < opt.f_tol) {
      break;
    }
  }
  result.converged = converged;
  result.evaluations = search.evaluations;
  result.iterations = search.iterations;
  return result;
}

}  // namespace mbw
