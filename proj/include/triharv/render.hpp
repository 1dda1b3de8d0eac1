#pragma once

#include <optional>
#include <vector>

#include "triharv/perception.hpp"

namespace triharv {

/// Box primitive posed in the world; half extents along the box axes.
struct BoxTarget {
  Pose pose;
  Vec3 half_extents = Vec3::Constant(0.02);
};

struct SphereTarget {
  Vec3 center = Vec3::Zero();
  double radius = 0.03;
};

struct RenderScene {
  std::vector<BoxTarget> boxes;
  std::vector<SphereTarget> spheres;
};

struct Rendered {
  std::vector<std::uint16_t> depth;  // camera-frame z in depth units
  DetectionSet detections;           // one mask per scene object, boxes first
};

/// Ray-casts the scene from `camera_pose` (camera +z forward, +x right,
/// +y down). Depth quantizes camera z to the intrinsics' depth_scale with
/// nearest-surface z-buffering; each object gets the mask of pixels it wins.
Rendered render_depth(const RenderScene& scene, const Intrinsics& intr,
                      const Pose& camera_pose);

/// First intersection of a ray with a box, in ray-parameter units.
std::optional<double> ray_box_hit(const Vec3& origin, const Vec3& dir,
                                  const BoxTarget& box);
std::optional<double> ray_sphere_hit(const Vec3& origin, const Vec3& dir,
                                     const SphereTarget& sphere);

}  // namespace triharv
