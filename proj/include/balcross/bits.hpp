// bits.hpp
//
// Plain bit vectors (one byte per bit) and their two text forms: the '0'/'1'
// string, leftmost character = position 1, and the hexadecimal string with the
// most significant nibble first.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace balcross {

using BitVector = std::vector<std::uint8_t>;

inline std::size_t hamming_weight(std::span<const std::uint8_t> bits) {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

inline std::string to_bit_string(std::span<const std::uint8_t> bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] != 0) out[i] = '1';
  return out;
}

inline BitVector parse_bit_string(std::string_view text) {
  BitVector bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string may only contain '0' and '1': " +
                                  std::string(text));
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

/// Groups bits into nibbles from the left, position 1 being the most
/// significant bit of the first digit. A trailing partial nibble is padded
/// with zeros on the right.
inline std::string to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1U;
      if (i + j < bits.size() && bits[i + j] != 0) nibble |= 1U;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

inline BitVector from_hex(std::string_view hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4)
    throw std::invalid_argument("hex string length does not match bit length");
  BitVector bits(length, 0);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[d];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("invalid hex digit in: " + std::string(hex));
    }
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t pos = d * 4 + j;
      const bool set = ((nibble >> (3 - j)) & 1U) != 0;
      if (pos < length) {
        bits[pos] = set ? 1 : 0;
      } else if (set) {
        throw std::invalid_argument("hex padding bits must be zero");
      }
    }
  }
  return bits;
}

}  // namespace balcross
