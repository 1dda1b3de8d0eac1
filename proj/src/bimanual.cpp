#include "triharv/bimanual.hpp"

#include <algorithm>
#include <cmath>

#include "triharv/errors.hpp"
#include "triharv/rng.hpp"

namespace triharv {

double HarvestSequenceSpec::duration(const std::string& phase) const {
  auto it = phase_durations.find(phase);
  if (it == phase_durations.end() || !(it->second > 0.0))
    throw InvalidConfig("missing or non-positive duration for phase " + phase);
  return it->second;
}

void HarvestSequenceSpec::validate() const {
  if (!(twist_angle > 0.0)) throw InvalidConfig("twist_angle must be positive");
  if (!(hold_radius > 0.0) || !(grasp_radius > 0.0))
    throw InvalidConfig("hold/grasp radii must be positive");
  if (!(interp_step > 0.0) || interp_step > 0.1)
    throw InvalidConfig("interp_step must lie in (0, 0.1]");
  for (const char* p :
       {"extend", "left_reach", "hold", "right_reach", "twist", "retract"})
    duration(p);
}

ArmGoals task_space_transform(const Pose& fruit_pose,
                              const HarvestSequenceSpec& spec) {
  if (!fruit_pose.position.allFinite())
    throw InvalidConfig("fruit pose must be finite");
  ArmGoals g;
  g.right = fruit_pose.position;
  g.left = fruit_pose.position + fruit_pose.rotate(spec.peduncle_offset);
  return g;
}

namespace {

double position_residual(const ChainSpec& chain, const JointVector& q,
                         const Vec3& goal) {
  return (forward_kinematics(chain, q).position - goal).norm();
}

}  // namespace

ReachResult solve_min_displacement_reach(const ReachProblem& problem) {
  if (!problem.scene) throw InvalidConfig("reach problem needs a scene");
  const ChainSpec* chain = problem.scene->find_chain(problem.chain);
  if (!chain) throw UnknownChain(problem.chain);
  if (problem.q0.size() != chain->dof())
    throw DimensionMismatch(problem.chain + ": q0");
  if (!chain->admissible(problem.q0))
    throw InvalidConfig(problem.chain + ": q0 violates joint limits");
  if (!(problem.tol > 0.0)) throw InvalidConfig("reach tol must be positive");

  IkConfig ik_cfg;
  ik_cfg.tol_pos = 0.75 * problem.tol;
  ik_cfg.max_iters = 150;
  const Pose target = Pose::translation(problem.goal_position);

  Rng rng(problem.seed);
  ReachResult best;
  bool any_reached = false;

  const int starts = std::max(1, problem.n_starts);
  for (int s = 0; s < starts; ++s) {
    JointVector start = problem.q0;
    if (s > 0) {
      for (int k = 0; k < chain->dof(); ++k)
        start[k] =
            rng.uniform(chain->joints[k].limit_lo, chain->joints[k].limit_hi);
    }

    IkResult proj =
        ik_damped_ls(*chain, target, start, kMaskPosition, ik_cfg);
    if (!proj.converged) continue;
    JointVector q = proj.q;

    // Displacement descent: pull toward q0, accepting steps that stay inside
    // the goal ball directly and re-projecting the ones that leave it.
    for (int outer = 0; outer < 80; ++outer) {
      bool improved = false;
      for (double beta : {0.5, 0.25, 0.1, 0.04}) {
        const JointVector q_try = q + beta * (problem.q0 - q);
        JointVector q_cand;
        if (position_residual(*chain, q_try, problem.goal_position) <=
            problem.tol) {
          q_cand = q_try;
        } else {
          IkResult re = ik_damped_ls(*chain, target, q_try, kMaskPosition,
                                     ik_cfg);
          if (!re.converged) continue;
          q_cand = re.q;
        }
        if ((q_cand - problem.q0).norm() <
            (q - problem.q0).norm() - 1e-12) {
          q = q_cand;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }

    if (position_residual(*chain, q, problem.goal_position) > problem.tol)
      continue;
    any_reached = true;

    JointMap assign = problem.others;
    assign[problem.chain] = q;
    if (config_in_collision(*problem.scene, assign).colliding) continue;

    ++best.feasible_candidates;
    const double disp = (q - problem.q0).norm();
    if (best.status != ReachStatus::Ok || disp < best.displacement) {
      best.status = ReachStatus::Ok;
      best.q = q;
      best.displacement = disp;
    }
  }

  if (best.status != ReachStatus::Ok)
    best.status = any_reached ? ReachStatus::NoCollisionFreeSolution
                              : ReachStatus::Unreachable;
  return best;
}

std::vector<Waypoint> interpolate_joint_path(const JointVector& q_from,
                                             const JointVector& q_to,
                                             double step, double duration) {
  if (q_from.size() != q_to.size())
    throw DimensionMismatch("interpolation endpoints");
  if (!(step > 0.0)) throw StepOutOfRange("interpolation step must be > 0");
  if (!(duration > 0.0)) throw InvalidConfig("duration must be positive");

  const double span = (q_to - q_from).cwiseAbs().maxCoeff();
  const int n =
      std::max(2, static_cast<int>(std::ceil(span / step)) + 1);
  std::vector<Waypoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    out.push_back({duration * s, q_from + s * (q_to - q_from), 0.0});
  }
  return out;
}

namespace {

JointVector sample_waypoints(const std::vector<Waypoint>& wps, double t) {
  if (t <= wps.front().t) return wps.front().q;
  if (t >= wps.back().t) return wps.back().q;
  for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
    if (t <= wps[i + 1].t) {
      const double dt = wps[i + 1].t - wps[i].t;
      const double s = dt > 0.0 ? (t - wps[i].t) / dt : 0.0;
      return wps[i].q + s * (wps[i + 1].q - wps[i].q);
    }
  }
  return wps.back().q;
}

/// Joint-space tour through a waypoint list, time split proportionally to
/// leg length, shifted to start at t0.
std::vector<Waypoint> tour_waypoints(const JointVector& q_start,
                                     const std::vector<JointVector>& stops,
                                     double step, double duration, double t0) {
  std::vector<JointVector> pts{q_start};
  for (const auto& q : stops) pts.push_back(q);
  std::vector<double> lengths;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = (pts[i + 1] - pts[i]).cwiseAbs().maxCoeff();
    lengths.push_back(len);
    total += len;
  }
  std::vector<Waypoint> out;
  if (pts.size() == 1 || total <= 0.0) {
    out.push_back({t0, q_start, 0.0});
    out.push_back({t0 + duration, pts.back(), 0.0});
    return out;
  }
  double t = t0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double leg_dur =
        duration * (total > 0.0 ? lengths[i] / total : 1.0 / lengths.size());
    if (!(leg_dur > 0.0)) continue;
    auto leg = interpolate_joint_path(pts[i], pts[i + 1], step, leg_dur);
    for (std::size_t w = out.empty() ? 0 : 1; w < leg.size(); ++w)
      out.push_back({t + leg[w].t, leg[w].q, 0.0});
    t += leg_dur;
  }
  if (out.empty()) {
    out.push_back({t0, q_start, 0.0});
    out.push_back({t0 + duration, pts.back(), 0.0});
  }
  return out;
}

/// Collision check for two simultaneously moving arms: test the combined
/// configuration at every waypoint time of either trajectory.
bool parallel_motion_collides(const CollisionScene& scene,
                              const std::string& left_name,
                              const std::vector<Waypoint>& left,
                              const std::string& right_name,
                              const std::vector<Waypoint>& right) {
  std::vector<double> times;
  for (const auto& w : left) times.push_back(w.t);
  for (const auto& w : right) times.push_back(w.t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (double t : times) {
    JointMap cfg{{left_name, sample_waypoints(left, t)},
                 {right_name, sample_waypoints(right, t)}};
    if (config_in_collision(scene, cfg).colliding) return true;
  }
  return false;
}

}  // namespace

HarvestPlan plan_harvest_sequence(const Pose& fruit_pose,
                                  const JointVector& q0_left,
                                  const JointVector& q0_right,
                                  const CollisionScene& scene,
                                  const HarvestSequenceSpec& spec,
                                  std::uint64_t seed) {
  spec.validate();
  const std::string kLeft = "left", kRight = "right";
  if (!scene.find_chain(kLeft) || !scene.find_chain(kRight))
    throw UnknownChain("harvest sequence needs chains 'left' and 'right'");

  HarvestPlan plan;
  plan.goals = task_space_transform(fruit_pose, spec);
  auto fail = [&](const std::string& phase, PhaseCause cause) {
    plan.ok = false;
    plan.failed_phase = phase;
    plan.cause = cause;
    return plan;
  };

  double t = 0.0;

  // Phase 1: predefined horizontal extension, both arms together.
  const double d_extend = spec.duration("extend");
  auto left_extend = tour_waypoints(q0_left, spec.extend_left,
                                    spec.interp_step, d_extend, t);
  auto right_extend = tour_waypoints(q0_right, spec.extend_right,
                                     spec.interp_step, d_extend, t);
  if (parallel_motion_collides(scene, kLeft, left_extend, kRight,
                               right_extend))
    return fail("extend", PhaseCause::NoCollisionFreeSolution);
  plan.segments.push_back({kLeft, "extend", left_extend});
  plan.segments.push_back({kRight, "extend", right_extend});
  t += d_extend;
  const JointVector left_ready = left_extend.back().q;
  const JointVector right_ready = right_extend.back().q;

  // Phase 2: left arm reaches the peduncle point, then holds.
  ReachProblem left_problem;
  left_problem.chain = kLeft;
  left_problem.q0 = left_ready;
  left_problem.goal_position = plan.goals.left;
  left_problem.scene = &scene;
  left_problem.others = {{kRight, right_ready}};
  left_problem.seed = seed;
  const ReachResult left_reach = solve_min_displacement_reach(left_problem);
  if (!left_reach.ok())
    return fail("left_reach",
                left_reach.status == ReachStatus::Unreachable
                    ? PhaseCause::Unreachable
                    : PhaseCause::NoCollisionFreeSolution);
  if (path_in_collision(scene, {{kRight, right_ready}}, kLeft, left_ready,
                        left_reach.q, spec.interp_step))
    return fail("left_reach", PhaseCause::NoCollisionFreeSolution);
  plan.q_left_hold = left_reach.q;

  auto left_move = interpolate_joint_path(left_ready, left_reach.q,
                                          spec.interp_step,
                                          spec.duration("left_reach"));
  TrajectorySegment left_seg{kLeft, "left_reach", {}};
  for (auto& w : left_move) left_seg.waypoints.push_back({t + w.t, w.q, 0.0});
  t += spec.duration("left_reach");
  plan.t_hold = t;
  // Hold dwell appended to the same phase segment.
  left_seg.waypoints.push_back(
      {t + spec.duration("hold"), left_reach.q, 0.0});
  plan.segments.push_back(std::move(left_seg));
  t += spec.duration("hold");

  // Phase 3: right arm reaches the fruit centroid.
  ReachProblem right_problem;
  right_problem.chain = kRight;
  right_problem.q0 = right_ready;
  right_problem.goal_position = plan.goals.right;
  right_problem.scene = &scene;
  right_problem.others = {{kLeft, left_reach.q}};
  right_problem.seed = seed + 1;
  const ReachResult right_reach = solve_min_displacement_reach(right_problem);
  if (!right_reach.ok())
    return fail("right_reach",
                right_reach.status == ReachStatus::Unreachable
                    ? PhaseCause::Unreachable
                    : PhaseCause::NoCollisionFreeSolution);
  if (path_in_collision(scene, {{kLeft, left_reach.q}}, kRight, right_ready,
                        right_reach.q, spec.interp_step))
    return fail("right_reach", PhaseCause::NoCollisionFreeSolution);
  plan.q_right_grasp = right_reach.q;

  auto right_move = interpolate_joint_path(right_ready, right_reach.q,
                                           spec.interp_step,
                                           spec.duration("right_reach"));
  TrajectorySegment right_seg{kRight, "right_reach", {}};
  for (auto& w : right_move)
    right_seg.waypoints.push_back({t + w.t, w.q, 0.0});
  plan.segments.push_back(std::move(right_seg));
  t += spec.duration("right_reach");
  plan.t_grasp = t;

  // Phase 4: rotary end-effector twist; the chain itself stays put.
  const double d_twist = spec.duration("twist");
  const int n_twist = std::max(
      2, static_cast<int>(std::ceil(spec.twist_angle / spec.interp_step)) + 1);
  TrajectorySegment twist_seg{kRight, "twist", {}};
  for (int i = 0; i < n_twist; ++i) {
    const double s = static_cast<double>(i) / (n_twist - 1);
    twist_seg.waypoints.push_back(
        {t + s * d_twist, right_reach.q, s * spec.twist_angle});
  }
  plan.segments.push_back(std::move(twist_seg));
  t += d_twist;
  plan.t_twist_done = t;

  // Phase 5: both arms retract to their initial configurations.
  const double d_retract = spec.duration("retract");
  auto left_back = tour_waypoints(left_reach.q, {q0_left}, spec.interp_step,
                                  d_retract, t);
  auto right_back = tour_waypoints(right_reach.q, {q0_right}, spec.interp_step,
                                   d_retract, t);
  if (parallel_motion_collides(scene, kLeft, left_back, kRight, right_back))
    return fail("retract", PhaseCause::NoCollisionFreeSolution);
  for (auto& w : right_back) w.ee_twist = spec.twist_angle;
  plan.segments.push_back({kLeft, "retract", left_back});
  plan.segments.push_back({kRight, "retract", right_back});
  t += d_retract;
  plan.t_end = t;

  plan.ok = true;
  return plan;
}

}  // namespace triharv
