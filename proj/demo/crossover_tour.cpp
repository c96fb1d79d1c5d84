// Crosses two balanced parents with every operator and prints the children.
// Balanced operators keep the weight; one-point usually does not.

#include <cstdio>

#include "balcross/balcross.hpp"

int main() {
  using namespace balcross;
  const BitVector p1 = parse_bit_string("1100110000110010");
  const BitVector p2 = parse_bit_string("0011000111001100");
  std::printf("parent 1  %s  weight %zu\n", to_bit_string(p1).c_str(), hamming_weight(p1));
  std::printf("parent 2  %s  weight %zu\n\n", to_bit_string(p2).c_str(), hamming_weight(p2));

  Engine engine(2024);
  RngChoices choices(engine);
  for (const CrossoverKind kind : CrossoverKind::all()) {
    for (int i = 0; i < 3; ++i) {
      const BitVector child = crossover(kind, p1, p2, choices);
      std::printf("%-6s    %s  weight %zu\n", kind.code().c_str(), to_bit_string(child).c_str(),
                  hamming_weight(child));
    }
  }

  const auto bal = BalancedBitstring::from_bits(p1);
  std::printf("\nzero-lengths coding of parent 1:");
  for (auto r : encode_zero_lengths(bal).runs()) std::printf(" %zu", static_cast<std::size_t>(r));
  std::printf("\nmap-of-ones coding of parent 1: ");
  for (auto q : encode_map_of_ones(bal).positions()) std::printf(" %zu", static_cast<std::size_t>(q));
  std::printf("\n");
}
