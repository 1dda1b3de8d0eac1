#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace triharv {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Rigid transform: position in meters plus unit quaternion.
/// The quaternion is re-normalized after every composing operation.
/// Euler reporting uses the Z-Y-X (yaw-pitch-roll) convention.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return {}; }
  static Pose translation(const Vec3& p) { return {p, Quat::Identity()}; }
  static Pose from_rpy(const Vec3& p, double roll, double pitch, double yaw);

  Pose compose(const Pose& rhs) const;
  Pose inverse() const;

  /// Transforms a point.
  Vec3 apply(const Vec3& pt) const;
  /// Rotates a direction (no translation).
  Vec3 rotate(const Vec3& v) const;

  /// Returns (roll, pitch, yaw), Z-Y-X convention.
  Vec3 rpy() const;

  Mat3 rotation_matrix() const { return orientation.toRotationMatrix(); }
};

inline Pose operator*(const Pose& a, const Pose& b) { return a.compose(b); }

/// Axis-angle vector of a unit quaternion, |result| in [0, pi].
Vec3 rotation_log(const Quat& q);
Quat rotation_exp(const Vec3& w);

Quat quat_about(const Vec3& axis, double angle);

/// Minimal rotation taking direction `from` onto direction `to`.
Quat rotation_between(const Vec3& from, const Vec3& to);

}  // namespace triharv
