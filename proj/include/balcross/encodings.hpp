// encodings.hpp
//
// Fixed-weight bitstrings ((n,k)-combinations) and their two alternative
// encodings:
//
//   zero lengths  the k+1 run lengths of zeros around the k ones; entry 1
//                 counts the zeros before the first one and entry k+1 the
//                 zeros after the last one, so the entries sum to n-k.
//   map of ones   the 1-based positions of the ones (the support), in any
//                 order.
//
// Example for x = 01001101 (n=8, k=4): zero lengths (1,2,0,1,0), map of ones
// (2,5,6,8).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "balcross/bits.hpp"
#include "balcross/random.hpp"

namespace balcross {

/// A bitstring of length n carrying exactly k ones.
class BalancedBitstring {
 public:
  BalancedBitstring(BitVector bits, std::size_t k) : bits_(std::move(bits)), k_(k) {
    if (hamming_weight(bits_) != k_)
      throw std::invalid_argument("bitstring weight " + std::to_string(hamming_weight(bits_)) +
                                  " differs from prescribed weight " + std::to_string(k_));
  }

  /// Takes the weight of `bits` as the prescribed weight.
  static BalancedBitstring from_bits(BitVector bits) {
    const std::size_t k = hamming_weight(bits);
    return BalancedBitstring(std::move(bits), k);
  }

  static BalancedBitstring parse(std::string_view text) { return from_bits(parse_bit_string(text)); }

  const BitVector& bits() const noexcept { return bits_; }
  std::size_t n() const noexcept { return bits_.size(); }
  std::size_t k() const noexcept { return k_; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  std::string str() const { return to_bit_string(bits_); }

  friend bool operator==(const BalancedBitstring&, const BalancedBitstring&) = default;

 private:
  BitVector bits_;
  std::size_t k_;
};

class ZeroLengthsCoding {
 public:
  ZeroLengthsCoding(std::vector<std::size_t> runs, std::size_t n, std::size_t k)
      : runs_(std::move(runs)), n_(n), k_(k) {
    if (k_ > n_) throw std::invalid_argument("zero lengths coding: weight exceeds length");
    if (runs_.size() != k_ + 1)
      throw std::invalid_argument("zero lengths coding must have k+1 entries");
    const std::size_t total = std::accumulate(runs_.begin(), runs_.end(), std::size_t{0});
    if (total != n_ - k_)
      throw std::invalid_argument("zero lengths coding entries sum to " + std::to_string(total) +
                                  ", expected n-k = " + std::to_string(n_ - k_));
  }

  const std::vector<std::size_t>& runs() const noexcept { return runs_; }
  std::size_t operator[](std::size_t i) const { return runs_[i]; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  friend bool operator==(const ZeroLengthsCoding&, const ZeroLengthsCoding&) = default;

 private:
  std::vector<std::size_t> runs_;
  std::size_t n_;
  std::size_t k_;
};

/// Support of a bitstring as 1-based positions. Order is not significant for
/// decoding but is preserved as given.
class MapOfOnes {
 public:
  MapOfOnes(std::vector<std::size_t> positions, std::size_t n)
      : positions_(std::move(positions)), n_(n) {
    std::vector<bool> seen(n_ + 1, false);
    for (std::size_t p : positions_) {
      if (p < 1 || p > n_)
        throw std::invalid_argument("map of ones position " + std::to_string(p) +
                                    " outside [1.." + std::to_string(n_) + "]");
      if (seen[p]) throw std::invalid_argument("map of ones has duplicate position " + std::to_string(p));
      seen[p] = true;
    }
  }

  const std::vector<std::size_t>& positions() const noexcept { return positions_; }
  std::size_t operator[](std::size_t i) const { return positions_[i]; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return positions_.size(); }

  friend bool operator==(const MapOfOnes&, const MapOfOnes&) = default;

 private:
  std::vector<std::size_t> positions_;
  std::size_t n_;
};

inline ZeroLengthsCoding encode_zero_lengths(const BalancedBitstring& x) {
  std::vector<std::size_t> runs;
  runs.reserve(x.k() + 1);
  std::size_t gap = 0;
  for (std::uint8_t b : x.bits()) {
    if (b != 0) {
      runs.push_back(gap);
      gap = 0;
    } else {
      ++gap;
    }
  }
  runs.push_back(gap);
  return ZeroLengthsCoding(std::move(runs), x.n(), x.k());
}

inline BalancedBitstring decode_zero_lengths(const ZeroLengthsCoding& r) {
  BitVector bits;
  bits.reserve(r.n());
  for (std::size_t i = 0; i < r.runs().size(); ++i) {
    bits.insert(bits.end(), r[i], 0);
    if (i < r.k()) bits.push_back(1);
  }
  return BalancedBitstring(std::move(bits), r.k());
}

inline MapOfOnes encode_map_of_ones(const BalancedBitstring& x) {
  std::vector<std::size_t> positions;
  positions.reserve(x.k());
  for (std::size_t i = 0; i < x.n(); ++i)
    if (x[i]) positions.push_back(i + 1);
  return MapOfOnes(std::move(positions), x.n());
}

inline BalancedBitstring decode_map_of_ones(const MapOfOnes& q) {
  BitVector bits(q.n(), 0);
  for (std::size_t p : q.positions()) bits[p - 1] = 1;
  return BalancedBitstring(std::move(bits), q.k());
}

/// Draws each bit with a fair coin, left to right. Once k ones have been
/// placed the rest is zero-filled; once n-k zeros have been placed the rest is
/// one-filled.
template <ChoiceSource Choices>
BalancedBitstring random_balanced(std::size_t n, std::size_t k, Choices& choices) {
  if (k > n) throw std::invalid_argument("random_balanced: weight exceeds length");
  BitVector bits(n, 0);
  std::size_t ones = 0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ones == k) {
      bits[i] = 0;
    } else if (zeros == n - k) {
      bits[i] = 1;
    } else if (choices.coin()) {
      bits[i] = 1;
      ++ones;
    } else {
      ++zeros;
    }
  }
  return BalancedBitstring(std::move(bits), k);
}

using BigInt = boost::multiprecision::cpp_int;

/// Number of (n,k)-combinations, C(n,k), computed exactly.
inline BigInt search_space_size(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("search_space_size: weight exceeds length");
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

}  // namespace balcross
