#pragma once

#include <string>
#include <vector>

#include "triharv/bimanual.hpp"
#include "triharv/nbv.hpp"
#include "triharv/perception.hpp"
#include "triharv/simworld.hpp"

namespace triharv {

/// Mission-level configuration: scripted navigation replaces teleoperation,
/// ground-truth localization replaces LiDAR SLAM.
struct MissionConfig {
  std::vector<Vec3> navigation_waypoints;  // scripted base positions
  int max_attempts = 2;
  NbvConfig nbv;
  IkConfig ik;
  Pose mount_offset;   // viewing-arm tool -> dual-arm mount
  Pose camera_offset;  // viewing-arm tool -> camera (+z forward)
  JointVector stow_base;
  JointVector stow_left;
  JointVector stow_right;
  double base_move_duration = 3.0;  // s to reach a commanded waypoint
  double reach_tol = 0.005;
  int reach_starts = 32;
  int workspace_samples = 20000;
  double workspace_voxel = 0.03;
  std::uint64_t workspace_seed = 42;
  double sim_dt = 1e-3;
  Intrinsics camera;

  void validate() const;
};

struct Scenario {
  std::string environment;  // "indoor" | "outdoor"
  ChainSpec base_arm;       // 6-DOF viewing arm, world frame
  ChainSpec left_arm;       // 4-DOF holder, mount frame
  ChainSpec right_arm;      // 3-DOF gripper, mount frame
  OccupancyGrid grid;       // world-frame obstacles
  std::vector<SelfPair> self_pairs;
  PendulumTarget target;
  NoiseModel noise;
  HarvestSequenceSpec sequence;
  MissionConfig mission;

  void validate() const;
};

/// Chain with its base re-expressed under a new parent frame.
ChainSpec rebase_chain(const ChainSpec& chain, const Pose& parent);

}  // namespace triharv
