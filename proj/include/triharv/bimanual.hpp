#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "triharv/collision.hpp"
#include "triharv/kinematics.hpp"

namespace triharv {

/// Predefined harvest sequence parameters. Extend trajectories are joint-space
/// waypoint lists executed before the reach phases.
struct HarvestSequenceSpec {
  std::vector<JointVector> extend_left;
  std::vector<JointVector> extend_right;
  Vec3 peduncle_offset{0.0, 0.0, 0.10};  // fruit frame, toward the cord anchor
  double hold_radius = 0.03;
  double grasp_radius = 0.04;
  double twist_angle = M_PI / 2.0;
  std::map<std::string, double> phase_durations{
      {"extend", 2.0},      {"left_reach", 2.0}, {"hold", 1.0},
      {"right_reach", 2.0}, {"twist", 1.5},      {"retract", 2.0}};
  double interp_step = 0.05;  // rad between path waypoints

  double duration(const std::string& phase) const;
  void validate() const;
};

/// Task-space coupling between the two arms' goals: the right arm targets the
/// fruit centroid, the left arm the peduncle point offset in the fruit frame.
struct ArmGoals {
  Vec3 left = Vec3::Zero();
  Vec3 right = Vec3::Zero();
};
ArmGoals task_space_transform(const Pose& fruit_pose,
                              const HarvestSequenceSpec& spec);

enum class ReachStatus { Ok, Unreachable, NoCollisionFreeSolution };

struct ReachProblem {
  std::string chain;  // chain name in the scene
  JointVector q0;
  Vec3 goal_position;
  const CollisionScene* scene = nullptr;
  JointMap others;  // fixed configurations of the remaining chains
  double tol = 0.005;
  int n_starts = 32;
  std::uint64_t seed = 0;
};

struct ReachResult {
  ReachStatus status = ReachStatus::Unreachable;
  JointVector q;
  double displacement = 0.0;  // |q - q0|
  int feasible_candidates = 0;

  bool ok() const { return status == ReachStatus::Ok; }
};

/// Minimizes |q - q0|^2 subject to |fk_position(q) - goal| <= tol, joint
/// limits, and collision freedom. Multi-start projected descent alternating
/// IK projection onto the goal ball and displacement descent steps.
ReachResult solve_min_displacement_reach(const ReachProblem& problem);

struct Waypoint {
  double t = 0.0;  // seconds
  JointVector q;
  double ee_twist = 0.0;  // end-effector rotary angle (not a chain joint)
};

struct TrajectorySegment {
  std::string chain;
  std::string label;  // phase name
  std::vector<Waypoint> waypoints;

  double start_time() const { return waypoints.front().t; }
  double end_time() const { return waypoints.back().t; }
};

enum class PhaseCause { Unreachable, NoCollisionFreeSolution };

struct HarvestPlan {
  bool ok = false;
  std::vector<TrajectorySegment> segments;
  std::string failed_phase;
  PhaseCause cause = PhaseCause::Unreachable;
  JointVector q_left_hold;
  JointVector q_right_grasp;
  ArmGoals goals;
  double t_hold = 0.0;        // left reach done, hold dwell starts
  double t_grasp = 0.0;       // right reach done
  double t_twist_done = 0.0;  // detach moment
  double t_end = 0.0;
};

/// Plans the hold-then-twist sequence: extend (both arms), left reach + hold,
/// right reach, right end-effector twist, retract to the initial
/// configurations. Every inter-waypoint move is collision checked with the
/// other arm held at its current configuration.
HarvestPlan plan_harvest_sequence(const Pose& fruit_pose,
                                  const JointVector& q0_left,
                                  const JointVector& q0_right,
                                  const CollisionScene& scene,
                                  const HarvestSequenceSpec& spec,
                                  std::uint64_t seed = 0);

/// Linear in joint space, uniform in time, endpoints exact. At least two
/// waypoints; ceil(max|dq|/step)+1 when the move is non-trivial.
std::vector<Waypoint> interpolate_joint_path(const JointVector& q_from,
                                             const JointVector& q_to,
                                             double step, double duration);

}  // namespace triharv
