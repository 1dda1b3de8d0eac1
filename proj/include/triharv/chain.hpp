#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "triharv/geometry.hpp"

namespace triharv {

using JointVector = Eigen::VectorXd;

/// One revolute joint: rotation about `axis` after the fixed transform
/// `origin_offset` from the parent frame.
struct JointSpec {
  Vec3 axis = Vec3::UnitZ();
  Pose origin_offset;
  double limit_lo = -M_PI;
  double limit_hi = M_PI;
};

/// Capsule attached to the frame of joint `parent_joint` (after that joint's
/// rotation). Endpoints are expressed in the link frame.
struct Capsule {
  int parent_joint = 0;
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.01;
};

using CapsuleSet = std::vector<Capsule>;

struct ChainSpec {
  std::string name;
  Pose base_pose;
  std::vector<JointSpec> joints;
  Pose tool_offset;
  CapsuleSet link_geometry;

  int dof() const { return static_cast<int>(joints.size()); }

  bool admissible(const JointVector& q) const;
  JointVector clamp_to_limits(const JointVector& q) const;

  /// Mid-range configuration, used as a default seed.
  JointVector mid_config() const;

  /// Throws InvalidConfig on non-unit axes, inverted limits, or capsules
  /// referencing joints outside the chain.
  void validate() const;
};

}  // namespace triharv
