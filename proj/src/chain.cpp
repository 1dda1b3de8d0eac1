#include "triharv/chain.hpp"

#include <cmath>

#include "triharv/errors.hpp"

namespace triharv {

bool ChainSpec::admissible(const JointVector& q) const {
  if (q.size() != dof()) return false;
  for (int k = 0; k < dof(); ++k) {
    if (!std::isfinite(q[k])) return false;
    if (q[k] < joints[k].limit_lo || q[k] > joints[k].limit_hi) return false;
  }
  return true;
}

JointVector ChainSpec::clamp_to_limits(const JointVector& q) const {
  if (q.size() != dof())
    throw DimensionMismatch(name + ": q has " + std::to_string(q.size()) +
                            " values, chain has " + std::to_string(dof()) +
                            " joints");
  JointVector out = q;
  for (int k = 0; k < dof(); ++k)
    out[k] = std::clamp(out[k], joints[k].limit_lo, joints[k].limit_hi);
  return out;
}

JointVector ChainSpec::mid_config() const {
  JointVector q(dof());
  for (int k = 0; k < dof(); ++k)
    q[k] = 0.5 * (joints[k].limit_lo + joints[k].limit_hi);
  return q;
}

void ChainSpec::validate() const {
  for (std::size_t k = 0; k < joints.size(); ++k) {
    const auto& j = joints[k];
    if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      throw InvalidConfig(name + ": joint " + std::to_string(k) +
                          " axis is not unit length");
    if (!(j.limit_lo < j.limit_hi))
      throw InvalidConfig(name + ": joint " + std::to_string(k) +
                          " limits are not ordered");
  }
  for (const auto& c : link_geometry) {
    if (c.parent_joint < 0 || c.parent_joint >= dof())
      throw InvalidConfig(name + ": capsule parent joint out of range");
    if (!(c.radius > 0.0))
      throw InvalidConfig(name + ": capsule radius must be positive");
  }
}

}  // namespace triharv
