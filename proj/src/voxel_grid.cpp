#include "triharv/voxel_grid.hpp"

#include <bit>

#include "triharv/errors.hpp"

namespace triharv {

std::size_t OccupancyGrid::occupied_count() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += std::popcount(b);
  return n;
}

std::string OccupancyGrid::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bits.size() * 2);
  for (std::uint8_t b : bits) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> OccupancyGrid::bits_from_hex(
    const std::string& hex, std::size_t voxel_count) {
  const std::size_t expect = (voxel_count + 7) / 8;
  if (hex.size() != expect * 2)
    throw InvalidConfig("occupancy hex length " + std::to_string(hex.size()) +
                        " does not match voxel count " +
                        std::to_string(voxel_count));
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw InvalidConfig("bad hex digit in occupancy field");
  };
  std::vector<std::uint8_t> out(expect);
  for (std::size_t i = 0; i < expect; ++i)
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) |
                                       nibble(hex[2 * i + 1]));
  return out;
}

}  // namespace triharv
