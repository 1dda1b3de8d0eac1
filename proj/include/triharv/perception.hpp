#pragma once

#include <cstdint>
#include <vector>

#include "triharv/geometry.hpp"

namespace triharv {

/// Pinhole camera model. Depth values are 16-bit units scaled by depth_scale
/// to meters; 0 means invalid.
struct Intrinsics {
  double fx = 0.0, fy = 0.0;  // px
  double cx = 0.0, cy = 0.0;  // px
  int width = 0, height = 0;
  double depth_scale = 0.001;  // m per unit

  void validate() const;
};

struct DepthFrame {
  std::vector<std::uint16_t> data;  // row-major, width*height
  Intrinsics intrinsics;
  Pose extrinsics_to_color;  // depth frame -> color frame
};

using Mask = std::vector<std::uint8_t>;  // nonzero = masked, color resolution

struct DetectionSet {
  std::vector<Mask> masks;

  int count() const { return static_cast<int>(masks.size()); }
};

/// Re-projects each valid depth pixel into the color camera; z-buffering
/// keeps the nearest depth per target pixel, unmapped pixels stay 0.
/// Output units follow the input depth_scale.
std::vector<std::uint16_t> align_depth_to_color(const DepthFrame& depth,
                                                const Intrinsics& color_intr);

/// Back-projects masked pixels with valid depth:
/// (x, y, z) = ((u-cx) d / fx, (v-cy) d / fy, d), d in meters.
std::vector<Vec3> backproject_masked_cloud(
    const std::vector<std::uint16_t>& aligned_depth, const Mask& mask,
    const Intrinsics& intr);

struct ClusterSet {
  std::vector<std::vector<int>> clusters;  // point indices, ascending range
  std::vector<double> mean_ranges;
  std::vector<int> discarded;  // sigma-rule outliers
};

/// 1D k-means on point ranges |p|, quantile-seeded, then a sigma-rule outlier
/// discard. Clusters come back ordered by ascending mean range.
ClusterSet range_histogram_cluster(const std::vector<Vec3>& points, int k,
                                   double outlier_sigma = 2.5);

struct FruitEstimate {
  Vec3 centroid = Vec3::Zero();
  Quat orientation = Quat::Identity();  // PCA box axes
  Vec3 extent = Vec3::Zero();           // per-axis min-max span (m)
  int point_count = 0;
  double mean_range = 0.0;
  bool degenerate = false;  // rank < 3: centroid-only estimate
};

/// Centroid plus PCA oriented bounding box. Axes are ordered by descending
/// variance, sign-fixed (component along +z >= 0, ties broken along +x then
/// +y), third axis completes a right-handed frame.
FruitEstimate estimate_fruit_pose(const std::vector<Vec3>& cluster);

/// Full geometric pipeline for one frame: align, back-project every mask,
/// cluster the combined cloud with k = detection count, estimate each fruit.
std::vector<FruitEstimate> detect_fruits(const DepthFrame& depth,
                                         const Intrinsics& color_intr,
                                         const DetectionSet& detections,
                                         double outlier_sigma = 2.5);

}  // namespace triharv
