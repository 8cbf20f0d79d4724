#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"

namespace rdsbench {

// Row-major binary pixel grid. One byte per pixel, value 0 or 1.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w < 0 || h < 0) throw Error("mask dimensions must be non-negative");
  }

  std::size_t size() const { return bits.size(); }

  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  void set(int x, int y, bool on) {
    bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] =
        on ? 1 : 0;
  }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }

  bool same_dims(const BinaryMask& other) const {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
    return a.width == b.width && a.height == b.height && a.bits == b.bits;
  }
};

// Row-major probability grid, values in [0, 1].
struct ProbMask {
  int width = 0;
  int height = 0;
  std::vector<double> probs;

  ProbMask() = default;
  ProbMask(int w, int h, double fill = 0.0)
      : width(w), height(h), probs(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w < 0 || h < 0) throw Error("mask dimensions must be non-negative");
  }

  std::size_t size() const { return probs.size(); }

  static ProbMask from_binary(const BinaryMask& m) {
    ProbMask p(m.width, m.height);
    for (std::size_t i = 0; i < m.bits.size(); ++i) p.probs[i] = m.bits[i] ? 1.0 : 0.0;
    return p;
  }

  void validate() const {
    if (probs.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw Error("probability mask size does not match dimensions");
    for (double p : probs)
      if (!(p >= 0.0 && p <= 1.0)) throw Error("probability outside [0,1]: " + std::to_string(p));
  }
};

inline void require_same_dims(int wa, int ha, int wb, int hb, const char* what) {
  if (wa != wb || ha != hb)
    throw DimensionMismatchError(std::string(what) + ": " + std::to_string(wa) + "x" +
                                 std::to_string(ha) + " vs " + std::to_string(wb) + "x" +
                                 std::to_string(hb));
}

// Index-keyed pairwise summation. The reduction tree depends only on the
// element count, so chunked/parallel callers that sum identical ranges get
// bit-identical results.
template <typename F>
double pairwise_sum(std::size_t begin, std::size_t end, F&& value_at) {
  const std::size_t n = end - begin;
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += value_at(i);
    return s;
  }
  const std::size_t mid = begin + n / 2;
  return pairwise_sum(begin, mid, value_at) + pairwise_sum(mid, end, value_at);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::size_t{0}, v.size(), [&](std::size_t i) { return v[i]; });
}

} // namespace rdsbench
