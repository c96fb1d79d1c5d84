// boolfn.hpp
//
// Boolean functions as truth tables, their Walsh spectrum, nonlinearity, and
// the fitness functions of the balanced-nonlinearity and bent-function
// problems.
//
// Index convention: truth-table entry i holds f(x) where x = (x1..xn) is the
// binary expansion of i with x1 as the most significant bit. Walsh
// coefficients are indexed by w the same way.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "balcross/bits.hpp"

namespace balcross {

class TruthTable {
 public:
  explicit TruthTable(BitVector bits) : bits_(std::move(bits)) {
    if (bits_.empty() || (bits_.size() & (bits_.size() - 1)) != 0)
      throw std::invalid_argument("truth table length must be a power of two, got " +
                                  std::to_string(bits_.size()));
    while ((std::size_t{1} << num_vars_) < bits_.size()) ++num_vars_;
  }

  static TruthTable parse(std::string_view text) { return TruthTable(parse_bit_string(text)); }

  static TruthTable from_hex(std::string_view hex, int num_vars) {
    return TruthTable(balcross::from_hex(hex, std::size_t{1} << num_vars));
  }

  const BitVector& bits() const noexcept { return bits_; }
  int num_vars() const noexcept { return num_vars_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator()(std::size_t x) const { return bits_[x] != 0; }
  std::size_t weight() const { return hamming_weight(bits_); }
  std::string hex() const { return to_hex(bits_); }

 private:
  BitVector bits_;
  int num_vars_ = 0;
};

struct WalshSpectrum {
  std::vector<std::int32_t> coefficients;
  int num_vars = 0;

  std::int32_t operator[](std::size_t w) const { return coefficients[w]; }

  /// Spectral radius, max |W(w)|.
  std::int32_t max_abs() const {
    std::int32_t m = 0;
    for (std::int32_t c : coefficients) m = std::max(m, c < 0 ? -c : c);
    return m;
  }
};

namespace detail {

/// In-place butterfly over +-1 values; size must be a power of two.
inline void fast_walsh(std::span<std::int32_t> v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1U) {
    for (std::size_t i = 0; i < v.size(); i += h << 1U) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t a = v[j];
        const std::int32_t b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

inline void load_signs(std::span<const std::uint8_t> bits, std::span<std::int32_t> out) {
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] != 0 ? -1 : 1;
}

/// Spectral radius of the function with table `bits`, using `scratch` as
/// working storage (resized as needed).
inline std::int32_t spectral_radius(std::span<const std::uint8_t> bits,
                                    std::vector<std::int32_t>& scratch) {
  scratch.resize(bits.size());
  load_signs(bits, scratch);
  fast_walsh(scratch);
  std::int32_t m = 0;
  for (std::int32_t c : scratch) m = std::max(m, c < 0 ? -c : c);
  return m;
}

inline int log2_exact(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("truth table length must be a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  return n;
}

}  // namespace detail

/// W(w) = sum_x (-1)^(f(x) + w.x), computed in O(n 2^n).
inline WalshSpectrum walsh_transform(const TruthTable& f) {
  WalshSpectrum spec;
  spec.num_vars = f.num_vars();
  spec.coefficients.resize(f.size());
  detail::load_signs(f.bits(), spec.coefficients);
  detail::fast_walsh(spec.coefficients);
  return spec;
}

/// Nl(f) = 2^(n-1) - W_max / 2.
inline std::int64_t nonlinearity(const TruthTable& f) {
  const std::int64_t half = static_cast<std::int64_t>(f.size() / 2);
  return half - walsh_transform(f).max_abs() / 2;
}

/// Maximal nonlinearity for even n: 2^(n-1) - 2^(n/2-1).
inline std::int64_t covering_bound(int num_vars) {
  if (num_vars < 2 || num_vars % 2 != 0)
    throw std::invalid_argument("covering bound is attainable only for even n >= 2");
  return (std::int64_t{1} << (num_vars - 1)) - (std::int64_t{1} << (num_vars / 2 - 1));
}

/// Weight of a bent function in the lower half: 2^(n-1) - 2^(n/2-1).
inline std::size_t bent_weight(int num_vars) { return static_cast<std::size_t>(covering_bound(num_vars)); }

/// Nl(f), minus |2^(n-1) - w(f)| when penalized.
inline std::int64_t fit_balanced_nl(const TruthTable& f, bool penalized) {
  const std::int64_t nl = nonlinearity(f);
  if (!penalized) return nl;
  const std::int64_t target = static_cast<std::int64_t>(f.size() / 2);
  return nl - std::llabs(target - static_cast<std::int64_t>(f.weight()));
}

/// Nl(f), minus |2^(n-1) - 2^(n/2-1) - w(f)| when penalized. Even n only.
inline std::int64_t fit_bent(const TruthTable& f, bool penalized) {
  const std::int64_t target = covering_bound(f.num_vars());
  const std::int64_t nl = nonlinearity(f);
  if (!penalized) return nl;
  return nl - std::llabs(target - static_cast<std::int64_t>(f.weight()));
}

}  // namespace balcross
