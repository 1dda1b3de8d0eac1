#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triharv/chain.hpp"
#include "triharv/voxel_grid.hpp"

namespace triharv {

struct SelfPair {
  std::string chain_a;
  int capsule_a = 0;
  std::string chain_b;
  int capsule_b = 0;
};

struct CollisionScene {
  OccupancyGrid grid;
  std::vector<ChainSpec> chains;
  std::vector<SelfPair> self_pairs;

  const ChainSpec* find_chain(const std::string& name) const;

  /// Rejects self pairs between adjacent capsules on the same chain.
  void validate() const;
};

/// std::map keeps chain iteration order deterministic.
using JointMap = std::map<std::string, JointVector>;

/// Voxel occupied iff any point lies within `inflation` of the voxel's AABB.
/// Grid bounds cover every point plus the inflation reach.
OccupancyGrid grid_from_points(const std::vector<Vec3>& points,
                               double voxel_size, double inflation);

struct CollisionReport {
  bool colliding = false;
  std::string detail;  // first offending capsule/voxel or self pair

  explicit operator bool() const { return colliding; }
};

/// True iff any capsule of an assigned chain intersects an occupied voxel, or
/// any declared self pair with both chains assigned intersects.
/// Capsule-voxel test: exact segment-to-AABB distance <= radius.
CollisionReport config_in_collision(const CollisionScene& scene,
                                    const JointMap& assignments);

/// Linear joint-space interpolation of `chain` from q_from to q_to, checked at
/// ceil(max|dq|/step)+1 waypoints including both ends; other chains held at
/// their `assignments` values. step must lie in (0, 0.1].
bool path_in_collision(const CollisionScene& scene, const JointMap& assignments,
                       const std::string& chain, const JointVector& q_from,
                       const JointVector& q_to, double step);

// Exact distance helpers used by the checks (exposed for tests).
double segment_aabb_distance(const Vec3& a, const Vec3& b, const Vec3& lo,
                             const Vec3& hi);
double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                const Vec3& q2);

/// Capsule endpoints posed in the world given the chain's link frames.
std::pair<Vec3, Vec3> capsule_world_segment(const Capsule& c,
                                            const std::vector<Pose>& frames);

}  // namespace triharv
