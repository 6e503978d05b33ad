#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace gluedtrees {

// A fixed-width bit string naming a vertex. The entrance is always named 0
// and the all-ones string is reserved as the oracle's "not a vertex" reply,
// so it never names anything.
class VertexName {
 public:
  VertexName() = default;
  VertexName(std::uint64_t bits, int width) : bits_(bits), width_(width) {
    if (width < 1 || width > 62) throw std::invalid_argument("VertexName: width out of range");
    if (width < 64 && (bits >> width) != 0)
      throw std::invalid_argument("VertexName: bits exceed width");
  }

  static VertexName zero(int width) { return VertexName(0, width); }
  static VertexName all_ones(int width) { return VertexName(mask(width), width); }
  static std::uint64_t mask(int width) { return (1ull << width) - 1; }

  std::uint64_t bits() const { return bits_; }
  int width() const { return width_; }
  bool is_all_ones() const { return bits_ == mask(width_); }
  bool is_zero() const { return bits_ == 0; }

  // Binary rendering, most significant bit first.
  std::string to_string() const {
    std::string s(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i)
      if (bits_ >> (width_ - 1 - i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  static VertexName parse(const std::string& s) {
    if (s.empty() || s.size() > 62) throw std::invalid_argument("VertexName: bad string length");
    std::uint64_t b = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("VertexName: not a bit string");
      b = b << 1 | static_cast<std::uint64_t>(c == '1');
    }
    return VertexName(b, static_cast<int>(s.size()));
  }

  friend bool operator==(const VertexName& a, const VertexName& b) {
    return a.bits_ == b.bits_ && a.width_ == b.width_;
  }
  friend bool operator!=(const VertexName& a, const VertexName& b) { return !(a == b); }
  friend bool operator<(const VertexName& a, const VertexName& b) {
    return a.bits_ != b.bits_ ? a.bits_ < b.bits_ : a.width_ < b.width_;
  }

 private:
  std::uint64_t bits_ = 0;
  int width_ = 1;
};

struct VertexNameHash {
  std::size_t operator()(const VertexName& v) const {
    return std::hash<std::uint64_t>()(v.bits() * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(v.width()));
  }
};

}  // namespace gluedtrees
