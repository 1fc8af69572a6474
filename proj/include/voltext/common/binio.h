#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "voltext/common/error.h"

namespace voltext::binio {

// Little-endian writers/readers, byte by byte so the files are portable.
// Short reads throw FormatError.

template <class U>
void put_uint(std::ostream& out, U v) {
  static_assert(std::is_unsigned_v<U>);
  char b[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = char((v >> (8 * i)) & 0xff);
  out.write(b, sizeof(U));
}

template <class U>
U get_uint(std::istream& in) {
  static_assert(std::is_unsigned_v<U>);
  unsigned char b[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(U))) {
    fail(ErrorCode::kFormatError, "unexpected end of file");
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= U(b[i]) << (8 * i);
  return v;
}

inline void put_u32(std::ostream& o, std::uint32_t v) { put_uint(o, v); }
inline void put_u64(std::ostream& o, std::uint64_t v) { put_uint(o, v); }
inline void put_i64(std::ostream& o, std::int64_t v) { put_uint(o, std::uint64_t(v)); }
inline void put_f32(std::ostream& o, float v) { put_uint(o, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::ostream& o, double v) { put_uint(o, std::bit_cast<std::uint64_t>(v)); }

inline std::uint32_t get_u32(std::istream& i) { return get_uint<std::uint32_t>(i); }
inline std::uint64_t get_u64(std::istream& i) { return get_uint<std::uint64_t>(i); }
inline std::int64_t get_i64(std::istream& i) { return std::int64_t(get_uint<std::uint64_t>(i)); }
inline float get_f32(std::istream& i) { return std::bit_cast<float>(get_uint<std::uint32_t>(i)); }
inline double get_f64(std::istream& i) { return std::bit_cast<double>(get_uint<std::uint64_t>(i)); }

inline void put_string(std::ostream& o, const std::string& s) {
  put_u32(o, std::uint32_t(s.size()));
  o.write(s.data(), std::streamsize(s.size()));
}

inline std::string get_string(std::istream& in, std::size_t max_len = 1u << 20) {
  auto n = get_u32(in);
  if (n > max_len) fail(ErrorCode::kFormatError, "string length out of range");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) fail(ErrorCode::kFormatError, "unexpected end of file");
  return s;
}

inline void put_magic(std::ostream& o, const char (&magic)[5]) { o.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
  char b[4];
  if (!in.read(b, 4) || std::memcmp(b, magic, 4) != 0) {
    fail(ErrorCode::kFormatError, std::string("bad magic, expected ") + magic);
  }
}

}  // namespace voltext::binio
