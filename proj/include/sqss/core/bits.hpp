#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqss/core/errors.hpp"

namespace sqss {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

inline constexpr unsigned kMaxParties = 30;

// Big-endian binary expansion: k = a_1*2^(n-1) + ... + a_n*2^0.
inline BitVector k_to_bits(std::uint64_t k, unsigned n) {
  if (n == 0 || n > kMaxParties) {
    throw DomainError("k_to_bits: n must be in [1, " + std::to_string(kMaxParties) + "]");
  }
  if (k >= (std::uint64_t{1} << n)) {
    throw DomainError("k_to_bits: k=" + std::to_string(k) + " out of range for n=" +
                      std::to_string(n));
  }
  BitVector bits(n);
  for (unsigned i = 0; i < n; ++i) {
    bits[i] = static_cast<Bit>((k >> (n - 1 - i)) & 1U);
  }
  return bits;
}

inline std::uint64_t bits_to_k(std::span<const Bit> bits) {
  if (bits.empty()) throw DomainError("bits_to_k: empty bit list");
  if (bits.size() > 63) throw DomainError("bits_to_k: too many bits");
  std::uint64_t k = 0;
  for (Bit b : bits) {
    if (b > 1) throw DomainError("bits_to_k: value is not a bit");
    k = (k << 1) | b;
  }
  return k;
}

inline BitVector complement(std::span<const Bit> bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = static_cast<Bit>(bits[i] ^ 1U);
  return out;
}

}  // namespace sqss
