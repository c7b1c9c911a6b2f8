#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "inls/radial.hpp"

namespace inls {

// Checkpoint layout (little-endian):
//   magic "INLS" | version u16 | N u16 | M u32 | h f64 | t f64
//   followed by M complex samples as interleaved f64 (re, im) pairs.
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  RadialField field;
  double time = 0.0;
};

namespace detail {
template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint writer assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint truncated");
  return v;
}
} // namespace detail

inline void save_checkpoint(const std::string& path, const RadialField& u,
                            double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  os.write("INLS", 4);
  detail::put<std::uint16_t>(os, kCheckpointVersion);
  detail::put<std::uint16_t>(os, static_cast<std::uint16_t>(u.grid->dim()));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(u.size()));
  detail::put<double>(os, u.grid->spacing());
  detail::put<double>(os, t);
  for (const auto& v : u.values) {
    detail::put<double>(os, v.real());
    detail::put<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "INLS", 4) != 0)
    throw std::runtime_error("bad checkpoint magic: " + path);
  const auto version = detail::get<std::uint16_t>(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version");
  const auto N = detail::get<std::uint16_t>(is);
  const auto M = detail::get<std::uint32_t>(is);
  const double h = detail::get<double>(is);
  const double t = detail::get<double>(is);
  Checkpoint cp;
  cp.time = t;
  cp.field = RadialField(build_grid(N, M, h * static_cast<double>(M)));
  for (std::uint32_t j = 0; j < M; ++j) {
    const double re = detail::get<double>(is);
    const double im = detail::get<double>(is);
    cp.field[j] = Complex(re, im);
  }
  return cp;
}

} // namespace inls
