#pragma once

#include <cstdint>

#include "triharv/collision.hpp"
#include "triharv/kinematics.hpp"

namespace triharv {

struct NbvConfig {
  double weight_pos = 1.0;    // position weight
  double weight_rot = 10.0;   // roll/pitch weight; orientation is prioritized
  double d_min = 0.45;        // minimum standoff from the target position (m)
  double fixed_roll = 0.0;
  double fixed_pitch = 0.0;
  bool yaw_free = true;
  int n_starts = 64;
  std::uint64_t seed = 0;
  int descent_iters = 25;
  IkConfig ik;

  void validate() const;
};

struct NbvSolution {
  JointVector q;
  Pose pose;
  double cost = 0.0;
  double standoff = 0.0;
  int starts_tried = 0;
  bool feasible = false;
};

/// Weighted viewpoint cost: A*|dp|^2 + B*(wrapped droll^2 + dpitch^2), plus
/// the wrapped yaw term when yaw is not free.
double nbv_cost(const Pose& pose, const Pose& goal, const NbvConfig& cfg);

/// Multi-start viewpoint search. Candidates sit on the d_min sphere around
/// the target position, restricted to the hemisphere facing the chain base,
/// tool x-axis toward the target, roll/pitch fixed. Each candidate is refined
/// with IK and a projected local cost descent; colliding or out-of-standoff
/// candidates are rejected. Infeasibility is a result, not an error.
NbvSolution plan_nbv(const ChainSpec& chain, const CollisionScene& scene,
                     const Pose& target, const NbvConfig& cfg);

}  // namespace triharv
