#ifndef MBW_CLUSTERING_HPP
#define MBW_CLUSTERING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mbw/point.hpp"

namespace mbw {

struct DbscanParams {
  std::size_t min_pts = 4;
  double eps = 1.0;

  void validate() const;
};

/// One label per input point: a cluster id numbered from 0 in discovery
/// order, or kNoise.
struct ClusterLabels {
  static constexpr int kNoise = -1;

  std::vector<int> labels;

  int cluster_count() const;
};

/// Density-based clustering. A point is core when at least min_pts points,
/// itself included, lie within the closed eps-ball around it. Border points
/// join the first cluster that reaches them.
ClusterLabels dbscan(std::span<const Point> points, const DbscanParams& params);

/// Sorted distance to the min_pts-th nearest neighbour (the point itself
/// counted first), i.e. the smallest eps that makes each point core.
std::vector<double> k_distances(std::span<const Point> points, std::size_t min_pts);

/// Knee of the sorted k-distance curve: the point farthest below the chord
/// joining its endpoints, with both axes rescaled to [0, 1].
double select_eps(std::span<const Point> points, std::size_t min_pts);

struct OriginCluster {
  int id = ClusterLabels::kNoise;
  std::vector<std::size_t> indices;
  std::vector<Point> members;
};

/// The cluster owning the point nearest the origin (ties: lower id).
OriginCluster origin_cluster(std::span<const Point> points, const ClusterLabels& labels);

}  // namespace mbw

#endif  // MBW_CLUSTERING_HPP
