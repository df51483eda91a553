#include "mbw/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::vector<std::size_t> region_query(std::span<const Point> points, std::size_t i,
                                      double eps2) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (dist2(points[i], points[j]) <= eps2) {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace

void DbscanParams::validate() const {
  if (min_pts < 1) {
    throw DomainError("DBSCAN min_pts must be at least 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("DBSCAN eps must be positive and finite");
  }
}

int ClusterLabels::cluster_count() const {
  int top = kNoise;
  for (int l : labels) {
    top = std::max(top, l);
  }
  return top + 1;
}

ClusterLabels dbscan(std::span<const Point> points, const DbscanParams& params) {
  params.validate();
  constexpr int kUnvisited = -2;
  const double eps2 = params.eps * params.eps;
  ClusterLabels out;
  out.labels.assign(points.size(), kUnvisited);

  int next_id = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (out.labels[i] != kUnvisited) {
      continue;
    }
    auto seeds = region_query(points, i, eps2);
    if (seeds.size() < params.min_pts) {
      out.labels[i] = ClusterLabels::kNoise;
      continue;
    }
    const int id = next_id++;
    out.labels[i] = id;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (out.labels[j] == ClusterLabels::kNoise) {
        out.labels[j] = id;  // border point
        continue;
      }
      if (out.labels[j] != kUnvisited) {
        continue;
      }
      out.labels[j] = id;
      auto more = region_query(points, j, eps2);
      if (more.size() >= params.min_pts) {
        queue.insert(queue.end(), more.begin(), more.end());
      }
    }
  }
  return out;
}

std::vector<double> k_distances(std::span<const Point> points, std::size_t min_pts) {
  if (min_pts < 1 || points.size() < min_pts) {
    throw DomainError("k_distances: need at least min_pts points");
  }
  std::vector<double> kd;
  kd.reserve(points.size());
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      d2[j] = dist2(points[i], points[j]);
    }
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(min_pts - 1),
                     d2.end());
    kd.push_back(std::sqrt(d2[min_pts - 1]));
  }
  std::sort(kd.begin(), kd.end());
  return kd;
}

double select_eps(std::span<const Point> points, std::size_t min_pts) {
  const auto kd = k_distances(points, min_pts);
  const double lo = kd.front();
  const double hi = kd.back();
  if (!(hi > lo)) {
    throw DegenerateError("select_eps: all k-distances are equal");
  }
  const double last = static_cast<double>(kd.size() - 1);
  std::size_t best = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kd.size(); ++i) {
    const double gap = static_cast<double>(i) / last - (kd[i] - lo) / (hi - lo);
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (!(kd[best] > 0.0)) {
    throw DegenerateError("select_eps: knee sits at zero distance");
  }
  return kd[best];
}

OriginCluster origin_cluster(std::span<const Point> points, const ClusterLabels& labels) {
  if (labels.labels.size() != points.size()) {
    throw DomainError("origin_cluster: label count does not match point count");
  }
  OriginCluster out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int l = labels.labels[i];
    if (l == ClusterLabels::kNoise) {
      continue;
    }
    const double r2 = points[i].x * points[i].x + points[i].y * points[i].y;
    if (r2 < best || (r2 == best && l < out.id)) {
      best = r2;
      out.id = l;
    }
  }
  if (out.id == ClusterLabels::kNoise) {
    throw NoClusterError("every point was labelled noise");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels.labels[i] == out.id) {
      out.indices.push_back(i);
      out.members.push_back(points[i]);
    }
  }
  return out;
}

}  // namespace mbw
