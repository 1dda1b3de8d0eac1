#include "triharv/perception.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "triharv/errors.hpp"

namespace triharv {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw InvalidConfig("focal lengths must be positive");
  if (width < 1 || height < 1) throw InvalidConfig("resolution must be >= 1x1");
  if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
    throw InvalidConfig("principal point outside the image");
  if (!(depth_scale > 0.0)) throw InvalidConfig("depth_scale must be positive");
}

std::vector<std::uint16_t> align_depth_to_color(const DepthFrame& depth,
                                                const Intrinsics& color_intr) {
  depth.intrinsics.validate();
  color_intr.validate();
  const Intrinsics& di = depth.intrinsics;
  if (depth.data.size() !=
      static_cast<std::size_t>(di.width) * static_cast<std::size_t>(di.height))
    throw ShapeMismatch("depth buffer does not match its intrinsics");

  std::vector<std::uint16_t> out(
      static_cast<std::size_t>(color_intr.width) * color_intr.height, 0);
  for (int v = 0; v < di.height; ++v) {
    for (int u = 0; u < di.width; ++u) {
      const std::uint16_t raw = depth.data[v * di.width + u];
      if (raw == 0) continue;
      const double d = raw * di.depth_scale;
      const Vec3 pd{(u - di.cx) * d / di.fx, (v - di.cy) * d / di.fy, d};
      const Vec3 pc = depth.extrinsics_to_color.apply(pd);
      if (pc.z() <= 0.0) continue;
      const long uc =
          std::lround(color_intr.fx * pc.x() / pc.z() + color_intr.cx);
      const long vc =
          std::lround(color_intr.fy * pc.y() / pc.z() + color_intr.cy);
      if (uc < 0 || uc >= color_intr.width || vc < 0 || vc >= color_intr.height)
        continue;
      const double units = pc.z() / di.depth_scale;
      if (units >= 65535.5) continue;
      const auto value = static_cast<std::uint16_t>(std::lround(units));
      if (value == 0) continue;
      std::uint16_t& slot = out[vc * color_intr.width + uc];
      if (slot == 0 || value < slot) slot = value;  // keep the nearest surface
    }
  }
  return out;
}

std::vector<Vec3> backproject_masked_cloud(
    const std::vector<std::uint16_t>& aligned_depth, const Mask& mask,
    const Intrinsics& intr) {
  intr.validate();
  const std::size_t n =
      static_cast<std::size_t>(intr.width) * static_cast<std::size_t>(intr.height);
  if (aligned_depth.size() != n || mask.size() != n)
    throw ShapeMismatch("depth/mask buffers do not match the intrinsics");

  std::vector<Vec3> cloud;
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const std::size_t i = static_cast<std::size_t>(v) * intr.width + u;
      if (!mask[i]) continue;
      const std::uint16_t raw = aligned_depth[i];
      if (raw == 0) continue;
      const double d = raw * intr.depth_scale;
      cloud.emplace_back((u - intr.cx) * d / intr.fx,
                         (v - intr.cy) * d / intr.fy, d);
    }
  }
  return cloud;
}

ClusterSet range_histogram_cluster(const std::vector<Vec3>& points, int k,
                                   double outlier_sigma) {
  if (points.empty()) throw EmptyInput();
  if (k < 1) throw InvalidConfig("cluster count must be >= 1");
  const int n = static_cast<int>(points.size());
  if (k > n)
    throw KExceedsPoints(std::to_string(k) + " clusters, " +
                         std::to_string(n) + " points");
  if (!(outlier_sigma > 0.0))
    throw InvalidConfig("outlier_sigma must be positive");

  std::vector<double> ranges(n);
  for (int i = 0; i < n; ++i) ranges[i] = points[i].norm();

  // Quantile seeding over the sorted ranges.
  std::vector<double> sorted = ranges;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centers(k);
  for (int j = 0; j < k; ++j) {
    const double pos = (j + 0.5) / k * (n - 1);
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, n - 1);
    const double s = pos - lo;
    centers[j] = (1.0 - s) * sorted[lo] + s * sorted[hi];
  }

  std::vector<int> label(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int bestj = 0;
      double bestd = std::abs(ranges[i] - centers[0]);
      for (int j = 1; j < k; ++j) {
        const double d = std::abs(ranges[i] - centers[j]);
        if (d < bestd) {
          bestd = d;
          bestj = j;
        }
      }
      if (label[i] != bestj) {
        label[i] = bestj;
        changed = true;
      }
    }
    if (!changed) break;
    for (int j = 0; j < k; ++j) {
      double sum = 0.0;
      int cnt = 0;
      for (int i = 0; i < n; ++i)
        if (label[i] == j) {
          sum += ranges[i];
          ++cnt;
        }
      if (cnt > 0) centers[j] = sum / cnt;  // empty clusters keep their center
    }
  }

  // Sigma-rule discard, one pass.
  ClusterSet out;
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[label[i]].push_back(i);
  std::vector<std::vector<int>> kept(k);
  for (int j = 0; j < k; ++j) {
    if (members[j].empty()) continue;
    double mean = 0.0;
    for (int i : members[j]) mean += ranges[i];
    mean /= members[j].size();
    double var = 0.0;
    for (int i : members[j]) var += (ranges[i] - mean) * (ranges[i] - mean);
    var /= members[j].size();
    const double sd = std::sqrt(var);
    for (int i : members[j]) {
      if (sd > 0.0 && std::abs(ranges[i] - mean) > outlier_sigma * sd)
        out.discarded.push_back(i);
      else
        kept[j].push_back(i);
    }
  }

  // Order clusters by ascending mean range of the kept points.
  std::vector<double> means(k);
  for (int j = 0; j < k; ++j) {
    if (kept[j].empty()) {
      means[j] = centers[j];
      continue;
    }
    double m = 0.0;
    for (int i : kept[j]) m += ranges[i];
    means[j] = m / kept[j].size();
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return means[a] < means[b]; });
  for (int j : order) {
    out.clusters.push_back(std::move(kept[j]));
    out.mean_ranges.push_back(means[j]);
  }
  std::sort(out.discarded.begin(), out.discarded.end());
  return out;
}

FruitEstimate estimate_fruit_pose(const std::vector<Vec3>& cluster) {
  if (cluster.empty()) throw EmptyInput();
  FruitEstimate est;
  est.point_count = static_cast<int>(cluster.size());
  Vec3 mean = Vec3::Zero();
  double mean_range = 0.0;
  for (const Vec3& p : cluster) {
    mean += p;
    mean_range += p.norm();
  }
  est.centroid = mean / cluster.size();
  est.mean_range = mean_range / cluster.size();

  auto aabb_extent = [&]() {
    Vec3 lo = cluster.front(), hi = cluster.front();
    for (const Vec3& p : cluster) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    return Vec3(hi - lo);
  };

  if (cluster.size() < 4) {
    est.degenerate = true;
    est.extent = aabb_extent();
    return est;
  }

  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : cluster) {
    const Vec3 d = p - est.centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cluster.size());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  // Eigen returns ascending eigenvalues; we want descending variance.
  const Vec3 evals = eig.eigenvalues().reverse();
  Mat3 axes;
  for (int i = 0; i < 3; ++i) axes.col(i) = eig.eigenvectors().col(2 - i);

  if (evals[2] <= std::max(1e-16, 1e-10 * evals[0])) {
    est.degenerate = true;
    est.extent = aabb_extent();
    return est;
  }

  auto fix_sign = [](Vec3 v) {
    constexpr double eps = 1e-9;
    if (v.z() > eps) return v;
    if (v.z() < -eps) return Vec3(-v);
    if (v.x() > eps) return v;
    if (v.x() < -eps) return Vec3(-v);
    return v.y() >= 0.0 ? v : Vec3(-v);
  };
  Mat3 r;
  r.col(0) = fix_sign(axes.col(0));
  r.col(1) = fix_sign(axes.col(1));
  r.col(2) = r.col(0).cross(r.col(1));  // right-handed by construction
  est.orientation = Quat(r).normalized();

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& p : cluster) {
    const Vec3 local = r.transpose() * (p - est.centroid);
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }
  est.extent = hi - lo;
  return est;
}

std::vector<FruitEstimate> detect_fruits(const DepthFrame& depth,
                                         const Intrinsics& color_intr,
                                         const DetectionSet& detections,
                                         double outlier_sigma) {
  std::vector<FruitEstimate> out;
  if (detections.count() == 0) return out;
  const auto aligned = align_depth_to_color(depth, color_intr);
  std::vector<Vec3> cloud;
  for (const Mask& m : detections.masks) {
    const auto part = backproject_masked_cloud(aligned, m, color_intr);
    cloud.insert(cloud.end(), part.begin(), part.end());
  }
  if (cloud.empty() || static_cast<int>(cloud.size()) < detections.count())
    return out;

  const ClusterSet clusters =
      range_histogram_cluster(cloud, detections.count(), outlier_sigma);
  for (const auto& idx : clusters.clusters) {
    if (idx.empty()) continue;
    std::vector<Vec3> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(cloud[i]);
    out.push_back(estimate_fruit_pose(pts));
  }
  return out;
}

}  // namespace triharv
