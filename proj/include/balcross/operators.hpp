// operators.hpp
//
// Crossover and mutation operators.
//
//   one-point      baseline; the child weight is unconstrained
//   counter-based  bit-by-bit uniform copy with ones/zeros counters
//   zero-lengths   run-length copy with an accumulator bounding the zero sum
//   map-of-ones    position copy that removes shared positions from both parents
//
// The three balanced operators build the child left to right. The shuffled
// variants permute the parents' bitstrings with a fresh random permutation,
// run the operator, and apply the inverse permutation to the child.
//
// In every operator a coin returning false selects the first parent.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "balcross/bits.hpp"
#include "balcross/encodings.hpp"
#include "balcross/random.hpp"

namespace balcross {

class CrossoverKind {
 public:
  enum class Tag { OnePoint, CounterBased, ZeroLengths, MapOfOnes };

  constexpr CrossoverKind(Tag tag, bool shuffled = false) : tag_(tag), shuffled_(shuffled) {
    if (tag == Tag::OnePoint && shuffled)
      throw std::invalid_argument("one-point crossover has no shuffled variant");
  }

  constexpr Tag tag() const noexcept { return tag_; }
  constexpr bool shuffled() const noexcept { return shuffled_; }
  constexpr bool balanced() const noexcept { return tag_ != Tag::OnePoint; }

  /// "op", "cb", "zl" or "moo", with "-s" appended for shuffled variants.
  std::string code() const {
    std::string base;
    switch (tag_) {
      case Tag::OnePoint: base = "op"; break;
      case Tag::CounterBased: base = "cb"; break;
      case Tag::ZeroLengths: base = "zl"; break;
      case Tag::MapOfOnes: base = "moo"; break;
    }
    return shuffled_ ? base + "-s" : base;
  }

  static CrossoverKind parse(std::string_view code) {
    bool shuffled = false;
    std::string_view base = code;
    if (base.size() > 2 && base.substr(base.size() - 2) == "-s") {
      shuffled = true;
      base.remove_suffix(2);
    }
    Tag tag;
    if (base == "op") {
      tag = Tag::OnePoint;
    } else if (base == "cb") {
      tag = Tag::CounterBased;
    } else if (base == "zl") {
      tag = Tag::ZeroLengths;
    } else if (base == "moo") {
      tag = Tag::MapOfOnes;
    } else {
      throw std::invalid_argument("unknown crossover code: " + std::string(code));
    }
    return CrossoverKind(tag, shuffled);
  }

  /// All seven operators in the order op, cb, zl, moo, cb-s, zl-s, moo-s.
  static std::vector<CrossoverKind> all() {
    return {CrossoverKind(Tag::OnePoint),         CrossoverKind(Tag::CounterBased),
            CrossoverKind(Tag::ZeroLengths),      CrossoverKind(Tag::MapOfOnes),
            CrossoverKind(Tag::CounterBased, true), CrossoverKind(Tag::ZeroLengths, true),
            CrossoverKind(Tag::MapOfOnes, true)};
  }

  friend constexpr bool operator==(CrossoverKind, CrossoverKind) = default;

 private:
  Tag tag_;
  bool shuffled_;
};

/// A permutation of the n positions. Slot i of a permuted string holds the
/// bit found at position source(i) of the original (0-based internally).
class PositionPermutation {
 public:
  explicit PositionPermutation(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size(), false);
    for (std::size_t p : perm_) {
      if (p >= perm_.size() || seen[p]) throw std::invalid_argument("not a permutation");
      seen[p] = true;
    }
  }

  static PositionPermutation identity(std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    return PositionPermutation(std::move(perm));
  }

  /// Uniform over all n! permutations (Fisher-Yates).
  template <ChoiceSource Choices>
  static PositionPermutation random(std::size_t n, Choices& choices) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[choices.below(i)]);
    PositionPermutation out;
    out.perm_ = std::move(perm);
    return out;
  }

  std::size_t size() const noexcept { return perm_.size(); }
  std::size_t source(std::size_t slot) const { return perm_[slot]; }

  BitVector apply(std::span<const std::uint8_t> bits) const {
    BitVector out(bits.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) out[i] = bits[perm_[i]];
    return out;
  }

  BitVector invert(std::span<const std::uint8_t> bits) const {
    BitVector out(bits.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) out[perm_[i]] = bits[i];
    return out;
  }

 private:
  PositionPermutation() = default;
  std::vector<std::size_t> perm_;
};

/// Both offspring of one-point crossover with the cut after position `cut`
/// (1 <= cut <= n-1): (p1[1..cut] p2[cut+1..n], p2[1..cut] p1[cut+1..n]).
inline std::pair<BitVector, BitVector> one_point_children(std::span<const std::uint8_t> p1,
                                                          std::span<const std::uint8_t> p2,
                                                          std::size_t cut) {
  if (p1.size() != p2.size()) throw std::invalid_argument("one-point crossover: length mismatch");
  if (cut < 1 || cut >= p1.size()) throw std::invalid_argument("one-point crossover: cut out of range");
  BitVector a(p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(cut));
  a.insert(a.end(), p2.begin() + static_cast<std::ptrdiff_t>(cut), p2.end());
  BitVector b(p2.begin(), p2.begin() + static_cast<std::ptrdiff_t>(cut));
  b.insert(b.end(), p1.begin() + static_cast<std::ptrdiff_t>(cut), p1.end());
  return {std::move(a), std::move(b)};
}

/// Cut drawn uniformly from {1..n-1}; one of the two children is returned,
/// each with probability 1/2.
template <ChoiceSource Choices>
BitVector one_point_crossover(std::span<const std::uint8_t> p1, std::span<const std::uint8_t> p2,
                              Choices& choices) {
  if (p1.size() != p2.size()) throw std::invalid_argument("one-point crossover: length mismatch");
  if (p1.size() < 2) throw std::invalid_argument("one-point crossover needs n >= 2");
  const std::size_t cut = 1 + choices.below(p1.size() - 1);
  auto children = one_point_children(p1, p2, cut);
  return choices.coin() ? std::move(children.second) : std::move(children.first);
}

namespace detail {

inline void require_same_shape(const BalancedBitstring& p1, const BalancedBitstring& p2) {
  if (p1.n() != p2.n()) throw std::invalid_argument("parents differ in length");
  if (p1.k() != p2.k()) throw std::invalid_argument("parents differ in weight");
}

}  // namespace detail

template <ChoiceSource Choices>
BalancedBitstring counter_cross(const BalancedBitstring& p1, const BalancedBitstring& p2,
                                Choices& choices) {
  detail::require_same_shape(p1, p2);
  const std::size_t n = p1.n();
  const std::size_t k = p1.k();
  std::size_t ones = 0;
  std::size_t zeros = 0;
  BitVector child(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ones == k) {
      child[i] = 0;
    } else if (zeros == n - k) {
      child[i] = 1;
    } else {
      child[i] = choices.coin() ? p2.bits()[i] : p1.bits()[i];
      if (child[i] != 0) {
        ++ones;
      } else {
        ++zeros;
      }
    }
  }
  return BalancedBitstring(std::move(child), k);
}

template <ChoiceSource Choices>
ZeroLengthsCoding zero_lengths_cross(const ZeroLengthsCoding& p1, const ZeroLengthsCoding& p2,
                                     Choices& choices) {
  if (p1.n() != p2.n() || p1.k() != p2.k())
    throw std::invalid_argument("zero lengths crossover: parents encode different (n,k)");
  const std::size_t k = p1.k();
  const std::size_t zeros = p1.n() - k;
  std::vector<std::size_t> child(k + 1, 0);
  std::size_t sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (sum == zeros) {
      child[i] = 0;
      continue;
    }
    const std::size_t run = choices.coin() ? p2[i] : p1[i];
    if (sum + run <= zeros) {
      child[i] = run;
      sum += run;
    } else {
      child[i] = zeros - sum;
      sum = zeros;
    }
  }
  child[k] = zeros - sum;
  return ZeroLengthsCoding(std::move(child), p1.n(), k);
}

/// Parents are taken by value: the algorithm consumes working copies.
template <ChoiceSource Choices>
MapOfOnes map_of_ones_cross(MapOfOnes p1, MapOfOnes p2, Choices& choices) {
  if (p1.n() != p2.n()) throw std::invalid_argument("map of ones crossover: length mismatch");
  if (p1.k() != p2.k()) throw std::invalid_argument("map of ones crossover: weight mismatch");
  const std::size_t n = p1.n();
  const std::size_t k = p1.k();
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  // Remaining entries of each parent plus, per position, its slot in that list.
  std::vector<std::size_t> rest[2] = {p1.positions(), p2.positions()};
  std::vector<std::size_t> slot[2] = {std::vector<std::size_t>(n + 1, kAbsent),
                                      std::vector<std::size_t>(n + 1, kAbsent)};
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < k; ++i) slot[side][rest[side][i]] = i;

  std::vector<bool> common(n + 1, false);
  for (std::size_t pos : rest[0])
    if (slot[1][pos] != kAbsent) common[pos] = true;

  // Removal swaps with the last entry; the index draw is uniform over the
  // remaining entries either way.
  auto remove = [&](int side, std::size_t pos) {
    const std::size_t at = slot[side][pos];
    const std::size_t last = rest[side].back();
    rest[side][at] = last;
    slot[side][last] = at;
    rest[side].pop_back();
    slot[side][pos] = kAbsent;
  };

  std::vector<std::size_t> child;
  child.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const int side = choices.coin() ? 1 : 0;
    const std::size_t pos = rest[side][choices.below(rest[side].size())];
    child.push_back(pos);
    remove(side, pos);
    if (common[pos]) remove(1 - side, pos);
  }
  return MapOfOnes(std::move(child), n);
}

/// Runs one of the three balanced operators on bitstring parents, converting
/// through the operator's encoding. Left-to-right order.
template <ChoiceSource Choices>
BalancedBitstring balanced_cross(CrossoverKind::Tag tag, const BalancedBitstring& p1,
                                 const BalancedBitstring& p2, Choices& choices) {
  switch (tag) {
    case CrossoverKind::Tag::CounterBased:
      return counter_cross(p1, p2, choices);
    case CrossoverKind::Tag::ZeroLengths:
      return decode_zero_lengths(
          zero_lengths_cross(encode_zero_lengths(p1), encode_zero_lengths(p2), choices));
    case CrossoverKind::Tag::MapOfOnes:
      return decode_map_of_ones(
          map_of_ones_cross(encode_map_of_ones(p1), encode_map_of_ones(p2), choices));
    case CrossoverKind::Tag::OnePoint:
      break;
  }
  throw std::invalid_argument("balanced_cross: one-point is not a balanced operator");
}

/// Balanced operator under a fixed position order: permute both parents, run
/// the operator, invert the permutation on the child.
template <ChoiceSource Choices>
BalancedBitstring with_permutation(CrossoverKind::Tag tag, const PositionPermutation& perm,
                                   const BalancedBitstring& p1, const BalancedBitstring& p2,
                                   Choices& choices) {
  detail::require_same_shape(p1, p2);
  if (perm.size() != p1.n()) throw std::invalid_argument("permutation size differs from length");
  const BalancedBitstring q1(perm.apply(p1.bits()), p1.k());
  const BalancedBitstring q2(perm.apply(p2.bits()), p2.k());
  const BalancedBitstring child = balanced_cross(tag, q1, q2, choices);
  return BalancedBitstring(perm.invert(child.bits()), child.k());
}

/// Shuffled variant: a fresh uniform permutation per call.
template <ChoiceSource Choices>
BalancedBitstring with_shuffle(CrossoverKind::Tag tag, const BalancedBitstring& p1,
                               const BalancedBitstring& p2, Choices& choices) {
  if (tag == CrossoverKind::Tag::OnePoint)
    throw std::invalid_argument("with_shuffle requires a balanced operator");
  const auto perm = PositionPermutation::random(p1.n(), choices);
  return with_permutation(tag, perm, p1, p2, choices);
}

/// Dispatches any of the seven operators on bitstring parents.
template <ChoiceSource Choices>
BitVector crossover(CrossoverKind kind, const BitVector& p1, const BitVector& p2, Choices& choices) {
  if (!kind.balanced()) return one_point_crossover(p1, p2, choices);
  const auto a = BalancedBitstring::from_bits(p1);
  const auto b = BalancedBitstring::from_bits(p2);
  if (kind.shuffled()) return with_shuffle(kind.tag(), a, b, choices).bits();
  return balanced_cross(kind.tag(), a, b, choices).bits();
}

/// With probability p_m exchanges one uniformly chosen 1 with one uniformly
/// chosen 0. Strings of weight 0 or n are returned unchanged.
template <ChoiceSource Choices>
void swap_mutate(BitVector& bits, double p_m, Choices& choices) {
  if (!choices.chance(p_m)) return;
  const std::size_t ones = hamming_weight(bits);
  if (ones == 0 || ones == bits.size()) return;
  std::size_t one_rank = choices.below(ones);
  std::size_t zero_rank = choices.below(bits.size() - ones);
  std::size_t one_at = bits.size();
  std::size_t zero_at = bits.size();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0) {
      if (one_rank-- == 0) one_at = i;
    } else {
      if (zero_rank-- == 0) zero_at = i;
    }
  }
  bits[one_at] = 0;
  bits[zero_at] = 1;
}

template <ChoiceSource Choices>
BalancedBitstring swap_mutation(const BalancedBitstring& child, double p_m, Choices& choices) {
  BitVector bits = child.bits();
  swap_mutate(bits, p_m, choices);
  return BalancedBitstring(std::move(bits), child.k());
}

/// With probability p_m flips one uniformly chosen bit.
template <ChoiceSource Choices>
void bit_flip_mutate(BitVector& bits, double p_m, Choices& choices) {
  if (bits.empty() || !choices.chance(p_m)) return;
  bits[choices.below(bits.size())] ^= 1U;
}

template <ChoiceSource Choices>
BitVector bit_flip_mutation(BitVector child, double p_m, Choices& choices) {
  bit_flip_mutate(child, p_m, choices);
  return child;
}

}  // namespace balcross
