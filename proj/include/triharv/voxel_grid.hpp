#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "triharv/geometry.hpp"

namespace triharv {

/// Dense 3D voxel bitset. Storage is row-major x-fastest:
/// index = x + dims.x * (y + dims.y * z), packed LSB-first into bytes.
struct OccupancyGrid {
  Vec3 origin = Vec3::Zero();
  double voxel_size = 0.02;
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  std::vector<std::uint8_t> bits;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  }

  bool empty() const { return voxel_count() == 0; }

  void resize_cleared(const Eigen::Vector3i& d) {
    dims = d;
    bits.assign((voxel_count() + 7) / 8, 0);
  }

  bool in_bounds(const Eigen::Vector3i& v) const {
    return v.x() >= 0 && v.y() >= 0 && v.z() >= 0 && v.x() < dims.x() &&
           v.y() < dims.y() && v.z() < dims.z();
  }

  std::size_t index_of(const Eigen::Vector3i& v) const {
    return static_cast<std::size_t>(v.x()) +
           static_cast<std::size_t>(dims.x()) *
               (static_cast<std::size_t>(v.y()) +
                static_cast<std::size_t>(dims.y()) *
                    static_cast<std::size_t>(v.z()));
  }

  Eigen::Vector3i voxel_of(const Vec3& p) const {
    return {static_cast<int>(std::floor((p.x() - origin.x()) / voxel_size)),
            static_cast<int>(std::floor((p.y() - origin.y()) / voxel_size)),
            static_cast<int>(std::floor((p.z() - origin.z()) / voxel_size))};
  }

  Vec3 voxel_min(const Eigen::Vector3i& v) const {
    return origin + voxel_size * v.cast<double>();
  }

  Vec3 voxel_max(const Eigen::Vector3i& v) const {
    return voxel_min(v) + Vec3::Constant(voxel_size);
  }

  Vec3 voxel_center(const Eigen::Vector3i& v) const {
    return voxel_min(v) + Vec3::Constant(0.5 * voxel_size);
  }

  bool get(const Eigen::Vector3i& v) const {
    if (!in_bounds(v)) return false;
    const std::size_t i = index_of(v);
    return (bits[i >> 3] >> (i & 7)) & 1;
  }

  void set(const Eigen::Vector3i& v, bool value) {
    const std::size_t i = index_of(v);
    if (value)
      bits[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    else
      bits[i >> 3] &= static_cast<std::uint8_t>(~(1u << (i & 7)));
  }

  bool get_point(const Vec3& p) const { return get(voxel_of(p)); }

  std::size_t occupied_count() const;

  /// Hex encoding of the packed bitset, two chars per byte.
  std::string to_hex() const;
  static std::vector<std::uint8_t> bits_from_hex(const std::string& hex,
                                                 std::size_t voxel_count);
};

}  // namespace triharv
