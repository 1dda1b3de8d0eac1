#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "triharv/chain.hpp"
#include "triharv/voxel_grid.hpp"

namespace triharv {

/// Tool-frame pose: base ∘ Π_k (offset_k ∘ Rot(axis_k, q_k)) ∘ tool_offset.
/// Throws DimensionMismatch if q length differs from the joint count.
Pose forward_kinematics(const ChainSpec& chain, const JointVector& q);

/// World pose of every link frame (after each joint's rotation), plus the
/// tool frame at the back. Size = dof + 1.
std::vector<Pose> forward_kinematics_frames(const ChainSpec& chain,
                                            const JointVector& q);

/// Central-difference 6xN Jacobian. Rows 0-2: position (m/rad). Rows 3-5:
/// world-frame rotation log of the relative orientation (rad/rad).
/// h must lie in (0, 1e-2].
Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian_numeric(
    const ChainSpec& chain, const JointVector& q, double h);

struct IkConfig {
  double tol_pos = 1e-4;    // m
  double tol_rot = 1e-3;    // rad
  int max_iters = 200;
  double damping = 0.05;    // DLS lambda
  double step_clamp = 0.2;  // rad per iteration, per joint
  double fd_step = 1e-6;    // Jacobian finite-difference step
};

struct IkResult {
  JointVector q;
  bool converged = false;
  int iterations = 0;
  double residual_pos = 0.0;  // masked position error norm (m)
  double residual_rot = 0.0;  // masked rotation error norm (rad)
};

// Mask bits select constrained pose components. Bits 0-2: x, y, z. Bits 3-5:
// world-frame rotation error components; constraining bits 3 and 4 pins roll
// and pitch while leaving yaw free.
inline constexpr unsigned kMaskPosition = 0b000111;
inline constexpr unsigned kMaskRotation = 0b111000;
inline constexpr unsigned kMaskFull = 0b111111;
inline constexpr unsigned kMaskPosRollPitch = 0b011111;

/// Damped least-squares IK. Joint limits are enforced by clamping every
/// step; the seed is clamped too. Non-convergence is reported in the result,
/// not thrown.
IkResult ik_damped_ls(const ChainSpec& chain, const Pose& target,
                      const JointVector& seed, unsigned mask,
                      const IkConfig& cfg = {});

struct ReachableSet {
  std::vector<Vec3> points;
  OccupancyGrid voxels;  // voxel marked = some sample landed inside

  bool contains(const Vec3& p) const { return voxels.get_point(p); }
};

/// n uniform joint-space samples mapped through FK. Deterministic per seed.
ReachableSet sample_reachable_set(const ChainSpec& chain, int n,
                                  std::uint64_t seed,
                                  double voxel_size = 0.05);

}  // namespace triharv
