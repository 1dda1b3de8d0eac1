#include "triharv/nbv.hpp"

#include <cmath>

#include "triharv/errors.hpp"
#include "triharv/rng.hpp"

namespace triharv {

void NbvConfig::validate() const {
  if (weight_pos < 0.0 || weight_rot < 0.0 || weight_pos + weight_rot <= 0.0)
    throw InvalidConfig("nbv weights must be non-negative with positive sum");
  if (!(d_min > 0.0)) throw InvalidConfig("d_min must be positive");
  if (n_starts < 1) throw InvalidConfig("n_starts must be >= 1");
}

double nbv_cost(const Pose& pose, const Pose& goal, const NbvConfig& cfg) {
  const Vec3 rp = pose.rpy();
  const Vec3 rg = goal.rpy();
  double rot = wrap_angle(rp.x() - rg.x()) * wrap_angle(rp.x() - rg.x()) +
               wrap_angle(rp.y() - rg.y()) * wrap_angle(rp.y() - rg.y());
  if (!cfg.yaw_free) {
    const double dy = wrap_angle(rp.z() - rg.z());
    rot += dy * dy;
  }
  return cfg.weight_pos * (pose.position - goal.position).squaredNorm() +
         cfg.weight_rot * rot;
}

namespace {

std::vector<Vec3> fibonacci_directions(int n) {
  // Fibonacci lattice on the unit sphere, deterministic.
  std::vector<Vec3> dirs;
  dirs.reserve(n);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * M_PI * i / golden;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

}  // namespace

NbvSolution plan_nbv(const ChainSpec& chain, const CollisionScene& scene,
                     const Pose& target, const NbvConfig& cfg) {
  cfg.validate();
  if (!target.position.allFinite())
    throw InvalidConfig("nbv target must be finite");

  const double target_yaw = target.rpy().z();
  const Pose goal{target.position,
                  Pose::from_rpy(Vec3::Zero(), cfg.fixed_roll, cfg.fixed_pitch,
                                 target_yaw)
                      .orientation};

  Vec3 to_base = chain.base_pose.position - target.position;
  if (to_base.norm() < 1e-9) to_base = -Vec3::UnitX();
  const Vec3 base_dir = to_base.normalized();

  // Standoff margin keeps IK position tolerance from nudging candidates
  // below d_min.
  const double standoff_margin = std::max(2.0 * cfg.ik.tol_pos, 1e-3);
  const double radius = cfg.d_min + standoff_margin;
  const unsigned mask = cfg.yaw_free ? kMaskPosRollPitch : kMaskFull;

  std::vector<Vec3> candidates;
  for (const Vec3& d : fibonacci_directions(2 * cfg.n_starts)) {
    if (d.dot(base_dir) < 0.0) continue;
    candidates.push_back(d);
    if (static_cast<int>(candidates.size()) >= cfg.n_starts) break;
  }

  Rng rng(cfg.seed);
  NbvSolution best;
  auto standoff_of = [&](const Pose& p) {
    return (p.position - target.position).norm();
  };
  auto feasible_config = [&](const JointVector& q, const Pose& pose) {
    if (!chain.admissible(q)) return false;
    if (standoff_of(pose) < cfg.d_min - 1e-9) return false;
    JointMap assign{{chain.name, q}};
    return !config_in_collision(scene, assign).colliding;
  };

  for (const Vec3& dir : candidates) {
    ++best.starts_tried;
    const Vec3 vp = target.position + radius * dir;
    const Vec3 look = target.position - vp;
    const double yaw = std::atan2(look.y(), look.x());
    const Pose cand_target =
        Pose::from_rpy(vp, cfg.fixed_roll, cfg.fixed_pitch, yaw);

    JointVector seed = chain.mid_config();
    for (int k = 0; k < seed.size(); ++k) seed[k] += rng.uniform(-0.3, 0.3);
    seed = chain.clamp_to_limits(seed);

    IkResult ik = ik_damped_ls(chain, cand_target, seed, mask, cfg.ik);
    if (!ik.converged) continue;

    JointVector q = ik.q;
    Pose pose = forward_kinematics(chain, q);
    double cost = nbv_cost(pose, goal, cfg);

    // Local cost descent; the standoff constraint is enforced by projecting
    // the tool position back onto the standoff sphere.
    double alpha = 0.05;
    const double gh = 1e-5;
    for (int it = 0; it < cfg.descent_iters && alpha > 1e-5; ++it) {
      JointVector grad(q.size());
      for (int k = 0; k < q.size(); ++k) {
        JointVector qp = q, qm = q;
        qp[k] += gh;
        qm[k] -= gh;
        grad[k] = (nbv_cost(forward_kinematics(chain, qp), goal, cfg) -
                   nbv_cost(forward_kinematics(chain, qm), goal, cfg)) /
                  (2.0 * gh);
      }
      const double gn = grad.norm();
      if (gn < 1e-12) break;
      JointVector q_try = chain.clamp_to_limits(q - (alpha / gn) * grad);
      Pose pose_try = forward_kinematics(chain, q_try);
      if (standoff_of(pose_try) < cfg.d_min) {
        const Vec3 away = (pose_try.position - target.position).normalized();
        const Pose proj_target{target.position + radius * away,
                               cand_target.orientation};
        IkResult proj = ik_damped_ls(chain, proj_target, q_try, mask, cfg.ik);
        if (!proj.converged) {
          alpha *= 0.5;
          continue;
        }
        q_try = proj.q;
        pose_try = forward_kinematics(chain, q_try);
      }
      const double cost_try = nbv_cost(pose_try, goal, cfg);
      if (cost_try < cost - 1e-14 &&
          standoff_of(pose_try) >= cfg.d_min - 1e-9) {
        q = q_try;
        pose = pose_try;
        cost = cost_try;
        alpha = std::min(alpha * 1.5, 0.2);
      } else {
        alpha *= 0.5;
      }
    }

    if (!feasible_config(q, pose)) continue;
    if (!best.feasible || cost < best.cost) {
      best.feasible = true;
      best.q = q;
      best.pose = pose;
      best.cost = cost;
      best.standoff = standoff_of(pose);
    }
  }
  return best;
}

}  // namespace triharv
