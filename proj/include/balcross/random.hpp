// random.hpp
//
// Sources of random decisions used by the crossover operators and the GA.
//
// Every stochastic routine in this library takes a ChoiceSource rather than a
// raw generator. A ChoiceSource answers three questions: a fair coin, a
// uniform index below a bound, and a Bernoulli trial. RngChoices adapts any
// standard uniform random bit generator; tests substitute scripted sources to
// enumerate every decision sequence of an operator.

#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace balcross {

template <class C>
concept ChoiceSource = requires(C& c, std::size_t bound, double p) {
  { c.coin() } -> std::convertible_to<bool>;
  { c.below(bound) } -> std::convertible_to<std::size_t>;
  { c.chance(p) } -> std::convertible_to<bool>;
};

/// Adapts a uniform random bit generator to the ChoiceSource interface.
/// Coins are served from a cached 64-bit word, one bit per flip.
template <std::uniform_random_bit_generator Gen>
class RngChoices {
 public:
  explicit RngChoices(Gen& gen) : gen_(&gen) {}

  bool coin() {
    if (coin_bits_left_ == 0) {
      coin_word_ = static_cast<std::uint64_t>((*gen_)());
      coin_bits_left_ = std::numeric_limits<typename Gen::result_type>::digits;
    }
    const bool bit = (coin_word_ & 1U) != 0;
    coin_word_ >>= 1U;
    --coin_bits_left_;
    return bit;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t below(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(*gen_);
  }

  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::uniform_real_distribution<double>(0.0, 1.0)(*gen_) < p;
  }

  Gen& generator() { return *gen_; }

 private:
  Gen* gen_;
  std::uint64_t coin_word_ = 0;
  int coin_bits_left_ = 0;
};

/// The engine used throughout the library.
using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Derives an independent stream seed from a master seed and a path of
/// indices, e.g. derive_seed(master, {kind_index, run_index}).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t part : path) h = splitmix64(h ^ splitmix64(part + 1));
  return h;
}

}  // namespace balcross
