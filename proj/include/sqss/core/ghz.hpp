#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqss/core/bits.hpp"
#include "sqss/core/state_pool.hpp"

namespace sqss {

enum class GhzSign : std::uint8_t { plus, minus };

// |G+-_k> = (|0 a_1..a_n> +- |1 ~a_1..~a_n>) / sqrt(2), a = big-endian bits of k.
struct GhzSpec {
  unsigned n = 1;
  std::uint64_t k = 0;
  GhzSign sign = GhzSign::plus;

  BitVector a_bits() const { return k_to_bits(k, n); }

  void validate() const {
    if (n == 0 || n > 20) throw DomainError("GhzSpec: n must be in [1, 20]");
    (void)k_to_bits(k, n);
  }

  // Amplitude indices of the two nonzero basis states (first slot = dealer qubit).
  std::pair<std::size_t, std::size_t> support() const {
    const std::size_t low = static_cast<std::size_t>(k);
    const std::size_t mask = (std::size_t{1} << n) - 1;
    const std::size_t high = (std::size_t{1} << n) | (~low & mask);
    return {low, high};
  }

  std::vector<Amplitude> amplitudes() const {
    validate();
    std::vector<Amplitude> amps(std::size_t{1} << (n + 1));
    const auto [low, high] = support();
    amps[low] = kInvSqrt2;
    amps[high] = sign == GhzSign::plus ? kInvSqrt2 : -kInvSqrt2;
    return amps;
  }
};

// Returns the n+1 slots; slot 0 is the dealer-kept qubit g_0.
inline std::vector<SlotId> prepare_ghz(StatePool& pool, const GhzSpec& spec) {
  return pool.create(std::vector<std::size_t>(spec.n + 1, 2), spec.amplitudes());
}

enum class SingleState : std::uint8_t { zero, one, plus, minus };

inline const char* to_string(SingleState s) {
  switch (s) {
    case SingleState::zero: return "0";
    case SingleState::one: return "1";
    case SingleState::plus: return "+";
    case SingleState::minus: return "-";
  }
  return "?";
}

inline Basis basis_of(SingleState s) {
  return (s == SingleState::zero || s == SingleState::one) ? Basis::Z : Basis::X;
}

// Measurement label of the state in its own basis: 0 for |0>,|+>; 1 for |1>,|->.
inline unsigned label_of(SingleState s) {
  return (s == SingleState::one || s == SingleState::minus) ? 1U : 0U;
}

inline std::vector<Amplitude> single_amplitudes(SingleState s) {
  switch (s) {
    case SingleState::zero: return {1.0, 0.0};
    case SingleState::one: return {0.0, 1.0};
    case SingleState::plus: return {kInvSqrt2, kInvSqrt2};
    case SingleState::minus: return {kInvSqrt2, -kInvSqrt2};
  }
  throw UsageError("single_amplitudes: bad state");
}

inline SlotId prepare_single(StatePool& pool, SingleState s) {
  return pool.create_single(2, single_amplitudes(s));
}

}  // namespace sqss
