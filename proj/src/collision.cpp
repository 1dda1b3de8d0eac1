#include "triharv/collision.hpp"

#include <algorithm>
#include <cmath>

#include "triharv/errors.hpp"
#include "triharv/kinematics.hpp"

namespace triharv {

const ChainSpec* CollisionScene::find_chain(const std::string& name) const {
  for (const auto& c : chains)
    if (c.name == name) return &c;
  return nullptr;
}

void CollisionScene::validate() const {
  for (const auto& c : chains) c.validate();
  for (const auto& p : self_pairs) {
    const ChainSpec* a = find_chain(p.chain_a);
    const ChainSpec* b = find_chain(p.chain_b);
    if (!a) throw UnknownChain(p.chain_a);
    if (!b) throw UnknownChain(p.chain_b);
    if (p.capsule_a < 0 ||
        p.capsule_a >= static_cast<int>(a->link_geometry.size()) ||
        p.capsule_b < 0 ||
        p.capsule_b >= static_cast<int>(b->link_geometry.size()))
      throw InvalidConfig("self pair capsule index out of range");
    if (p.chain_a == p.chain_b) {
      const int ja = a->link_geometry[p.capsule_a].parent_joint;
      const int jb = b->link_geometry[p.capsule_b].parent_joint;
      if (std::abs(ja - jb) <= 1)
        throw InvalidConfig("self pair joins adjacent capsules on chain " +
                            p.chain_a);
    }
  }
}

OccupancyGrid grid_from_points(const std::vector<Vec3>& points,
                               double voxel_size, double inflation) {
  if (points.empty()) throw EmptyPointSet();
  if (!(voxel_size > 0.0)) throw InvalidConfig("voxel size must be positive");
  if (inflation < 0.0) throw InvalidConfig("inflation must be non-negative");

  Vec3 lo = points.front(), hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  OccupancyGrid grid;
  grid.voxel_size = voxel_size;
  grid.origin = lo - Vec3::Constant(inflation + 0.5 * voxel_size);
  const Vec3 span = hi + Vec3::Constant(inflation) - grid.origin;
  Eigen::Vector3i dims;
  for (int i = 0; i < 3; ++i)
    dims[i] = std::max(
        1, static_cast<int>(std::ceil(span[i] / voxel_size)) + 1);
  grid.resize_cleared(dims);

  for (const Vec3& p : points) {
    const Eigen::Vector3i v0 = grid.voxel_of(p - Vec3::Constant(inflation));
    const Eigen::Vector3i v1 = grid.voxel_of(p + Vec3::Constant(inflation));
    for (int z = std::max(0, v0.z()); z <= std::min(dims.z() - 1, v1.z()); ++z)
      for (int y = std::max(0, v0.y()); y <= std::min(dims.y() - 1, v1.y());
           ++y)
        for (int x = std::max(0, v0.x()); x <= std::min(dims.x() - 1, v1.x());
             ++x) {
          const Eigen::Vector3i v{x, y, z};
          if (grid.get(v)) continue;
          const Vec3 vmin = grid.voxel_min(v);
          const Vec3 vmax = grid.voxel_max(v);
          const Vec3 clamped = p.cwiseMax(vmin).cwiseMin(vmax);
          if ((p - clamped).norm() <= inflation) grid.set(v, true);
        }
  }
  return grid;
}

double segment_aabb_distance(const Vec3& a, const Vec3& b, const Vec3& lo,
                             const Vec3& hi) {
  const Vec3 d = b - a;

  // Breakpoints where a coordinate crosses a box face; between consecutive
  // breakpoints every per-axis residual is affine, so the squared distance
  // is a quadratic in t and can be minimized exactly.
  std::vector<double> ts{0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-300) continue;
    for (double bound : {lo[i], hi[i]}) {
      const double t = (bound - a[i]) / d[i];
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  auto point_dist2 = [&](double t) {
    const Vec3 p = a + t * d;
    const Vec3 c = p.cwiseMax(lo).cwiseMin(hi);
    return (p - c).squaredNorm();
  };

  double best = std::min(point_dist2(0.0), point_dist2(1.0));
  for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
    const double t0 = ts[s], t1 = ts[s + 1];
    if (t1 - t0 < 1e-15) continue;
    const double tm = 0.5 * (t0 + t1);
    // Per-axis affine residual alpha + beta*t in this interval's regime.
    double A = 0.0, B = 0.0;
    const Vec3 pm = a + tm * d;
    for (int i = 0; i < 3; ++i) {
      double alpha, beta;
      if (pm[i] < lo[i]) {
        alpha = lo[i] - a[i];
        beta = -d[i];
      } else if (pm[i] > hi[i]) {
        alpha = a[i] - hi[i];
        beta = d[i];
      } else {
        continue;
      }
      A += beta * beta;
      B += 2.0 * alpha * beta;
    }
    if (A > 0.0) {
      const double t = std::clamp(-B / (2.0 * A), t0, t1);
      best = std::min(best, point_dist2(t));
    } else {
      best = std::min(best, point_dist2(tm));
    }
  }
  return std::sqrt(std::max(0.0, best));
}

double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                const Vec3& q2) {
  // Closest points between two segments (Ericson, RTCD 5.1.9).
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s, t;
  constexpr double kEps = 1e-14;
  if (a <= kEps && e <= kEps) return r.norm();
  if (a <= kEps) {
    s = 0.0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      t = 0.0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

std::pair<Vec3, Vec3> capsule_world_segment(const Capsule& c,
                                            const std::vector<Pose>& frames) {
  const Pose& f = frames.at(static_cast<std::size_t>(c.parent_joint));
  return {f.apply(c.a), f.apply(c.b)};
}

namespace {

bool capsule_hits_grid(const OccupancyGrid& grid, const Vec3& a, const Vec3& b,
                       double radius, Eigen::Vector3i* hit) {
  if (grid.empty()) return false;
  const Vec3 lo = a.cwiseMin(b) - Vec3::Constant(radius);
  const Vec3 hi = a.cwiseMax(b) + Vec3::Constant(radius);
  const Eigen::Vector3i v0 = grid.voxel_of(lo);
  const Eigen::Vector3i v1 = grid.voxel_of(hi);
  for (int z = std::max(0, v0.z()); z <= std::min(grid.dims.z() - 1, v1.z());
       ++z)
    for (int y = std::max(0, v0.y()); y <= std::min(grid.dims.y() - 1, v1.y());
         ++y)
      for (int x = std::max(0, v0.x());
           x <= std::min(grid.dims.x() - 1, v1.x()); ++x) {
        const Eigen::Vector3i v{x, y, z};
        if (!grid.get(v)) continue;
        if (segment_aabb_distance(a, b, grid.voxel_min(v), grid.voxel_max(v)) <=
            radius) {
          *hit = v;
          return true;
        }
      }
  return false;
}

}  // namespace

CollisionReport config_in_collision(const CollisionScene& scene,
                                    const JointMap& assignments) {
  std::map<std::string, std::vector<Pose>> frames;
  for (const auto& [name, q] : assignments) {
    const ChainSpec* chain = scene.find_chain(name);
    if (!chain) throw UnknownChain(name);
    frames[name] = forward_kinematics_frames(*chain, q);
  }

  for (const auto& [name, q] : assignments) {
    const ChainSpec* chain = scene.find_chain(name);
    const auto& fr = frames[name];
    for (std::size_t i = 0; i < chain->link_geometry.size(); ++i) {
      const auto [a, b] = capsule_world_segment(chain->link_geometry[i], fr);
      Eigen::Vector3i hit;
      if (capsule_hits_grid(scene.grid, a, b, chain->link_geometry[i].radius,
                            &hit)) {
        return {true, name + " capsule " + std::to_string(i) + " hits voxel (" +
                          std::to_string(hit.x()) + "," +
                          std::to_string(hit.y()) + "," +
                          std::to_string(hit.z()) + ")"};
      }
    }
  }

  for (const auto& p : scene.self_pairs) {
    auto ita = frames.find(p.chain_a);
    auto itb = frames.find(p.chain_b);
    if (ita == frames.end() || itb == frames.end()) continue;
    const ChainSpec* ca = scene.find_chain(p.chain_a);
    const ChainSpec* cb = scene.find_chain(p.chain_b);
    const Capsule& capa = ca->link_geometry.at(p.capsule_a);
    const Capsule& capb = cb->link_geometry.at(p.capsule_b);
    const auto [a1, b1] = capsule_world_segment(capa, ita->second);
    const auto [a2, b2] = capsule_world_segment(capb, itb->second);
    if (segment_segment_distance(a1, b1, a2, b2) <= capa.radius + capb.radius)
      return {true, "self pair " + p.chain_a + "[" +
                        std::to_string(p.capsule_a) + "] vs " + p.chain_b +
                        "[" + std::to_string(p.capsule_b) + "]"};
  }
  return {};
}

bool path_in_collision(const CollisionScene& scene, const JointMap& assignments,
                       const std::string& chain, const JointVector& q_from,
                       const JointVector& q_to, double step) {
  if (!(step > 0.0) || step > 0.1)
    throw StepOutOfRange("path step must lie in (0, 0.1], got " +
                         std::to_string(step));
  const ChainSpec* spec = scene.find_chain(chain);
  if (!spec) throw UnknownChain(chain);
  if (q_from.size() != spec->dof() || q_to.size() != spec->dof())
    throw DimensionMismatch(chain + ": path endpoints");

  const double span = (q_to - q_from).cwiseAbs().maxCoeff();
  const int n = static_cast<int>(std::ceil(span / step)) + 1;
  JointMap cfg = assignments;
  for (int i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    cfg[chain] = q_from + t * (q_to - q_from);
    if (config_in_collision(scene, cfg).colliding) return true;
  }
  return false;
}

}  // namespace triharv
