#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"
#include "rdsbench/mask.hpp"

namespace rdsbench {

// Run-length transport encoding of a binary mask as carried in prediction
// files. Runs are row-major and alternate background/foreground starting
// with background; a leading zero lets the mask start with foreground.
// Canonical form has no zero-length run after the first.
struct TransportedMask {
  std::string token_name; // seg token this mask answers, e.g. "seg000"
  int width = 0;
  int height = 0;
  std::vector<std::uint64_t> rle;
};

inline TransportedMask rle_encode(const BinaryMask& mask, std::string token_name = {}) {
  TransportedMask t;
  t.token_name = std::move(token_name);
  t.width = mask.width;
  t.height = mask.height;
  if (mask.bits.empty()) return t;

  std::uint8_t current = 0; // runs start with background
  std::uint64_t run = 0;
  for (std::uint8_t b : mask.bits) {
    const std::uint8_t v = b ? 1 : 0;
    if (v == current) {
      ++run;
    } else {
      t.rle.push_back(run);
      current = v;
      run = 1;
    }
  }
  t.rle.push_back(run);
  return t;
}

inline BinaryMask rle_decode(const TransportedMask& t) {
  if (t.width < 0 || t.height < 0) throw FormatError("negative mask dimensions in RLE payload");
  const auto total =
      static_cast<std::uint64_t>(t.width) * static_cast<std::uint64_t>(t.height);

  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < t.rle.size(); ++i) {
    if (t.rle[i] == 0 && i != 0)
      throw FormatError("zero-length run at position " + std::to_string(i) +
                        " (only a leading zero is allowed)");
    sum += t.rle[i];
  }
  if (sum != total)
    throw FormatError("run lengths sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(total));

  BinaryMask mask(t.width, t.height);
  std::size_t pos = 0;
  std::uint8_t current = 0;
  for (std::uint64_t run : t.rle) {
    for (std::uint64_t k = 0; k < run; ++k) mask.bits[pos++] = current;
    current = current ? 0 : 1;
  }
  return mask;
}

} // namespace rdsbench
