#include "triharv/render.hpp"

#include <cmath>
#include <limits>

namespace triharv {

std::optional<double> ray_box_hit(const Vec3& origin, const Vec3& dir,
                                  const BoxTarget& box) {
  // Slab test in the box frame.
  const Pose inv = box.pose.inverse();
  const Vec3 o = inv.apply(origin);
  const Vec3 d = inv.rotate(dir);
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double h = box.half_extents[i];
    if (std::abs(d[i]) < 1e-12) {
      if (o[i] < -h || o[i] > h) return std::nullopt;
      continue;
    }
    double ta = (-h - o[i]) / d[i];
    double tb = (h - o[i]) / d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  if (t0 <= 0.0) return std::nullopt;  // camera inside or behind
  return t0;
}

std::optional<double> ray_sphere_hit(const Vec3& origin, const Vec3& dir,
                                     const SphereTarget& sphere) {
  const Vec3 oc = origin - sphere.center;
  const double a = dir.squaredNorm();
  const double b = 2.0 * oc.dot(dir);
  const double c = oc.squaredNorm() - sphere.radius * sphere.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  if (t <= 0.0) return std::nullopt;
  return t;
}

Rendered render_depth(const RenderScene& scene, const Intrinsics& intr,
                      const Pose& camera_pose) {
  intr.validate();
  const std::size_t npx =
      static_cast<std::size_t>(intr.width) * static_cast<std::size_t>(intr.height);
  const int n_obj =
      static_cast<int>(scene.boxes.size() + scene.spheres.size());

  Rendered out;
  out.depth.assign(npx, 0);
  out.detections.masks.assign(n_obj, Mask(npx, 0));
  std::vector<int> winner(npx, -1);
  std::vector<double> best_z(npx, std::numeric_limits<double>::infinity());

  const Vec3 origin = camera_pose.position;
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      // Ray with unit z in the camera frame, so the hit parameter is camera z.
      const Vec3 dir_cam{(u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0};
      const Vec3 dir = camera_pose.rotate(dir_cam);
      const std::size_t i = static_cast<std::size_t>(v) * intr.width + u;
      int obj = 0;
      for (const auto& box : scene.boxes) {
        if (auto t = ray_box_hit(origin, dir, box); t && *t < best_z[i]) {
          best_z[i] = *t;
          winner[i] = obj;
        }
        ++obj;
      }
      for (const auto& sph : scene.spheres) {
        if (auto t = ray_sphere_hit(origin, dir, sph); t && *t < best_z[i]) {
          best_z[i] = *t;
          winner[i] = obj;
        }
        ++obj;
      }
      if (winner[i] >= 0) {
        const double units = best_z[i] / intr.depth_scale;
        if (units >= 1.0 && units < 65535.5) {
          out.depth[i] = static_cast<std::uint16_t>(std::lround(units));
          out.detections.masks[winner[i]][i] = 255;
        }
      }
    }
  }
  return out;
}

}  // namespace triharv
