#include "triharv/kinematics.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "triharv/errors.hpp"
#include "triharv/rng.hpp"

namespace triharv {

namespace {

void check_dims(const ChainSpec& chain, const JointVector& q) {
  if (q.size() != chain.dof())
    throw DimensionMismatch(chain.name + ": q has " +
                            std::to_string(q.size()) + " values, chain has " +
                            std::to_string(chain.dof()) + " joints");
  for (int k = 0; k < q.size(); ++k)
    if (!std::isfinite(q[k]))
      throw DimensionMismatch(chain.name + ": non-finite joint value");
}

}  // namespace

Pose forward_kinematics(const ChainSpec& chain, const JointVector& q) {
  check_dims(chain, q);
  Pose t = chain.base_pose;
  for (int k = 0; k < chain.dof(); ++k) {
    const JointSpec& j = chain.joints[k];
    t = t * j.origin_offset;
    t.orientation = (t.orientation * quat_about(j.axis, q[k])).normalized();
  }
  return t * chain.tool_offset;
}

std::vector<Pose> forward_kinematics_frames(const ChainSpec& chain,
                                            const JointVector& q) {
  check_dims(chain, q);
  std::vector<Pose> frames;
  frames.reserve(chain.dof() + 1);
  Pose t = chain.base_pose;
  for (int k = 0; k < chain.dof(); ++k) {
    const JointSpec& j = chain.joints[k];
    t = t * j.origin_offset;
    t.orientation = (t.orientation * quat_about(j.axis, q[k])).normalized();
    frames.push_back(t);
  }
  frames.push_back(t * chain.tool_offset);
  return frames;
}

Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian_numeric(
    const ChainSpec& chain, const JointVector& q, double h) {
  if (!(h > 0.0) || h > 1e-2)
    throw StepOutOfRange("jacobian step must lie in (0, 1e-2], got " +
                         std::to_string(h));
  check_dims(chain, q);
  const int n = chain.dof();
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, n);
  for (int k = 0; k < n; ++k) {
    JointVector qp = q, qm = q;
    qp[k] += h;
    qm[k] -= h;
    const Pose pp = forward_kinematics(chain, qp);
    const Pose pm = forward_kinematics(chain, qm);
    jac.block<3, 1>(0, k) = (pp.position - pm.position) / (2.0 * h);
    const Vec3 w =
        rotation_log(pp.orientation * pm.orientation.conjugate()) / (2.0 * h);
    jac.block<3, 1>(3, k) = w;
  }
  return jac;
}

IkResult ik_damped_ls(const ChainSpec& chain, const Pose& target,
                      const JointVector& seed, unsigned mask,
                      const IkConfig& cfg) {
  check_dims(chain, seed);
  std::vector<int> rows;
  for (int i = 0; i < 6; ++i)
    if (mask & (1u << i)) rows.push_back(i);
  if (rows.empty()) throw InvalidConfig("ik mask selects no components");

  IkResult res;
  res.q = chain.clamp_to_limits(seed);

  const int m = static_cast<int>(rows.size());
  for (int iter = 0; iter <= cfg.max_iters; ++iter) {
    const Pose pose = forward_kinematics(chain, res.q);
    Eigen::Matrix<double, 6, 1> err;
    err.head<3>() = target.position - pose.position;
    err.tail<3>() =
        rotation_log(target.orientation * pose.orientation.conjugate());

    double rp = 0.0, rr = 0.0;
    Eigen::VectorXd e(m);
    for (int i = 0; i < m; ++i) {
      e[i] = err[rows[i]];
      if (rows[i] < 3)
        rp += e[i] * e[i];
      else
        rr += e[i] * e[i];
    }
    res.residual_pos = std::sqrt(rp);
    res.residual_rot = std::sqrt(rr);
    res.iterations = iter;
    if (res.residual_pos <= cfg.tol_pos && res.residual_rot <= cfg.tol_rot) {
      res.converged = true;
      return res;
    }
    if (iter == cfg.max_iters) break;

    const auto jac = jacobian_numeric(chain, res.q, cfg.fd_step);
    Eigen::MatrixXd jm(m, chain.dof());
    for (int i = 0; i < m; ++i) jm.row(i) = jac.row(rows[i]);

    const Eigen::MatrixXd jjt =
        jm * jm.transpose() +
        cfg.damping * cfg.damping * Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd dq = jm.transpose() * jjt.ldlt().solve(e);
    const double inf_norm = dq.cwiseAbs().maxCoeff();
    if (inf_norm > cfg.step_clamp) dq *= cfg.step_clamp / inf_norm;
    res.q = chain.clamp_to_limits(res.q + dq);
  }
  res.converged = false;
  return res;
}

ReachableSet sample_reachable_set(const ChainSpec& chain, int n,
                                  std::uint64_t seed, double voxel_size) {
  if (n < 1) throw InvalidConfig("sample count must be >= 1");
  if (!(voxel_size > 0.0)) throw InvalidConfig("voxel size must be positive");
  Rng rng(seed);
  ReachableSet out;
  out.points.reserve(n);
  JointVector q(chain.dof());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < chain.dof(); ++k)
      q[k] = rng.uniform(chain.joints[k].limit_lo, chain.joints[k].limit_hi);
    out.points.push_back(forward_kinematics(chain, q).position);
  }

  Vec3 lo = out.points.front(), hi = out.points.front();
  for (const Vec3& p : out.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  out.voxels.voxel_size = voxel_size;
  out.voxels.origin = lo - Vec3::Constant(0.5 * voxel_size);
  const Vec3 span = hi - out.voxels.origin;
  Eigen::Vector3i dims;
  for (int i = 0; i < 3; ++i)
    dims[i] = std::max(1, static_cast<int>(std::ceil(span[i] / voxel_size)) + 1);
  out.voxels.resize_cleared(dims);
  for (const Vec3& p : out.points) {
    const Eigen::Vector3i v = out.voxels.voxel_of(p);
    if (out.voxels.in_bounds(v)) out.voxels.set(v, true);
  }
  return out;
}

}  // namespace triharv
