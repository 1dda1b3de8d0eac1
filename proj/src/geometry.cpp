#include "triharv/geometry.hpp"

#include <cmath>

namespace triharv {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

Pose Pose::from_rpy(const Vec3& p, double roll, double pitch, double yaw) {
  Quat q = quat_about(Vec3::UnitZ(), yaw) * quat_about(Vec3::UnitY(), pitch) *
           quat_about(Vec3::UnitX(), roll);
  q.normalize();
  return {p, q};
}

Pose Pose::compose(const Pose& rhs) const {
  Pose out;
  out.position = position + orientation * rhs.position;
  out.orientation = orientation * rhs.orientation;
  out.orientation.normalize();
  return out;
}

Pose Pose::inverse() const {
  Pose out;
  out.orientation = orientation.conjugate();
  out.orientation.normalize();
  out.position = -(out.orientation * position);
  return out;
}

Vec3 Pose::apply(const Vec3& pt) const { return position + orientation * pt; }

Vec3 Pose::rotate(const Vec3& v) const { return orientation * v; }

Vec3 Pose::rpy() const {
  const Mat3 r = orientation.toRotationMatrix();
  // R = Rz(yaw) Ry(pitch) Rx(roll); r(2,0) = -sin(pitch)
  const double sp = -r(2, 0);
  const double pitch = std::asin(std::clamp(sp, -1.0, 1.0));
  double roll, yaw;
  if (std::abs(sp) < 1.0 - 1e-12) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: yaw/roll coupled, fold everything into roll.
    roll = std::atan2(-r(1, 2), r(1, 1));
    yaw = 0.0;
  }
  return {roll, pitch, yaw};
}

Vec3 rotation_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 v(q.x(), q.y(), q.z());
  const double vn = v.norm();
  if (vn < 1e-12) return 2.0 * v;
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * v;
}

Quat rotation_exp(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    q.normalize();
    return q;
  }
  return quat_about(w / angle, angle);
}

Quat quat_about(const Vec3& axis, double angle) {
  return Quat(Eigen::AngleAxisd(angle, axis.normalized()));
}

Quat rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 f = from.normalized();
  const Vec3 t = to.normalized();
  const double c = std::clamp(f.dot(t), -1.0, 1.0);
  if (c > 1.0 - 1e-12) return Quat::Identity();
  if (c < -1.0 + 1e-12) {
    // Opposite directions: pick any perpendicular axis.
    Vec3 axis = f.cross(Vec3::UnitX());
    if (axis.squaredNorm() < 1e-12) axis = f.cross(Vec3::UnitY());
    return quat_about(axis.normalized(), M_PI);
  }
  const Vec3 axis = f.cross(t).normalized();
  return quat_about(axis, std::acos(c));
}

}  // namespace triharv
