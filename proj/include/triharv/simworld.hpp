#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "triharv/bimanual.hpp"
#include "triharv/collision.hpp"

namespace triharv {

inline constexpr double kGravity = 9.80665;  // m/s^2

/// Fruit on a taut cord, modeled as a damped spherical pendulum.
/// theta is the polar angle from the downward vertical (signed, so planar
/// swings pass smoothly through the nadir), phi the azimuth.
struct PendulumTarget {
  Vec3 anchor = Vec3::Zero();
  double cord_length = 0.3;  // m
  double mass = 0.15;        // kg
  double damping = 0.0;      // 1/s
  double theta = 0.0, phi = 0.0;
  double theta_dot = 0.0, phi_dot = 0.0;
  double fruit_radius = 0.03;

  Vec3 bob_position() const;
  /// Fruit frame: +z points up the cord toward the anchor.
  Pose fruit_pose() const;
  /// Kinetic plus potential energy relative to the nadir.
  double energy() const;
};

/// One RK4 step of the pendulum under an external acceleration field.
/// dt must lie in (0, 0.01].
PendulumTarget step_pendulum(const PendulumTarget& target, double dt,
                             const Vec3& excitation);

struct NoiseModel {
  double pose_noise_sigma = 0.0;  // m, perception noise per axis
  double wind_amplitude = 0.0;    // m/s^2 equivalent excitation
  double slip_probability = 0.0;  // per grasp, at detach time
  std::uint64_t seed = 0;

  void validate() const;
};

/// Sum of three seeded sinusoidal gusts, mostly horizontal. Deterministic
/// per (amplitude, seed) and continuous in time, so mission phases and
/// execution can share one stream.
class WindExcitation {
 public:
  WindExcitation(double amplitude, std::uint64_t seed);
  Vec3 at(double t) const;

 private:
  double amplitude_;
  std::array<double, 3> freq_{};
  std::array<double, 3> phase_{};
  std::array<Vec3, 3> dir_{};
};

enum class FailureCause { None, Slip, Infeasible, MissedGrasp, MissedHold };
const char* to_string(FailureCause cause);

struct PhaseOutcome {
  std::string phase;
  bool ok = true;
  std::string note;
};

struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  std::string environment;
  std::vector<PhaseOutcome> phases;
  bool success = false;
  FailureCause failure_cause = FailureCause::None;
  double wall_time = 0.0;  // simulated seconds
  JointVector final_q_left;
  JointVector final_q_right;
};

/// Execution-time world: the pendulum, the collision scene with the dual-arm
/// chains already re-based into the world frame, and the mount pose.
struct World {
  PendulumTarget target;
  CollisionScene scene;
  Pose mount_pose;
  double t0 = 0.0;   // global clock at execution start
  double dt = 1e-3;  // execution clock quantum
};

/// Plays a harvest plan against the true world on a shared clock. Hold is
/// checked against the true peduncle point at hold time (a successful hold
/// freezes the fruit), grasp against the true fruit center, and detachment
/// draws a slip event. Grasp misses outrank hold misses, which outrank slip:
/// the recorded cause is the one that decided the harvest.
TrialRecord simulate_execution(const HarvestPlan& plan, const World& world,
                               const NoiseModel& noise,
                               const HarvestSequenceSpec& spec);

/// True iff the peduncle point lies in the left arm's reachable summary and
/// the fruit point in the right arm's. Points are expressed in the frame the
/// summaries were sampled in.
bool workspace_contains(const ReachableSet& left_summary,
                        const ReachableSet& right_summary,
                        const Vec3& peduncle_point, const Vec3& fruit_point);

}  // namespace triharv
