#pragma once

// Little-endian binary primitives shared by the model files.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccdrift::detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated model file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline void put_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(os, v);
}

inline double get_f64(std::istream& is) {
  const std::uint64_t v = get_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

inline void put_i64(std::ostream& os, std::int64_t v) { put_u64(os, static_cast<std::uint64_t>(v)); }
inline std::int64_t get_i64(std::istream& is) { return static_cast<std::int64_t>(get_u64(is)); }

inline void put_str(std::ostream& os, const std::string& s) {
  put_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_str(std::istream& is) {
  const auto n = get_u64(is);
  if (n > (1u << 24)) throw std::runtime_error("corrupt model file: string length");
  std::string s(n, '\0');
  if (!is.read(s.data(), static_cast<std::streamsize>(n))) throw std::runtime_error("truncated model file");
  return s;
}

inline void expect_magic(std::istream& is, const std::string& magic) {
  std::string got(magic.size(), '\0');
  if (!is.read(got.data(), static_cast<std::streamsize>(got.size())) || got != magic)
    throw std::runtime_error("not a " + magic + " file");
}

}  // namespace ccdrift::detail
