#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "sqss/analysis/exact.hpp"
#include "sqss/protocol/session.hpp"

namespace sqss {

// Multi-party semi-quantum secret sharing schemes compared by qubit
// efficiency eta = c/q (shared classical bits over transmitted qubits).
enum class ProtocolId : std::uint8_t { ref34, ref35, ref36, this_work };

inline constexpr std::array<ProtocolId, 4> kAllProtocols{ProtocolId::ref34, ProtocolId::ref35,
                                                         ProtocolId::ref36, ProtocolId::this_work};

inline const char* to_string(ProtocolId id) {
  switch (id) {
    case ProtocolId::ref34: return "ref34";
    case ProtocolId::ref35: return "ref35";
    case ProtocolId::ref36: return "ref36";
    case ProtocolId::this_work: return "this_work";
  }
  return "?";
}

inline ProtocolId parse_protocol_id(std::string_view s) {
  for (ProtocolId id : kAllProtocols)
    if (s == to_string(id)) return id;
  throw UsageError("unknown protocol id '" + std::string(s) + "'");
}

struct EfficiencyEntry {
  ProtocolId protocol = ProtocolId::this_work;
  unsigned n = 1;
  Rational eta;
};

inline EfficiencyEntry qubit_efficiency(ProtocolId id, unsigned n) {
  if (n < 1 || n > 30) throw DomainError("qubit_efficiency: n must be in [1, 30]");
  const std::int64_t nn = n;
  Rational eta;
  switch (id) {
    case ProtocolId::ref34: eta = Rational(1, std::int64_t{1} << (2 * n)); break;  // 1/4^n
    case ProtocolId::ref35: eta = Rational(1, 6 * nn + 4); break;
    case ProtocolId::ref36: eta = Rational(1, 5 * nn); break;
    case ProtocolId::this_work: eta = Rational(1, 3 * nn + 1); break;
  }
  return {id, n, eta};
}

struct EfficiencyDerivation {
  std::int64_t c = 0;             // secret values delivered
  std::int64_t q = 0;             // qubits charged
  Rational eta;
  std::size_t ghz_qubits = 0;     // counted in the session
  std::size_t decoy_qubits = 0;   // counted in the session
  std::size_t regenerated_charged = 0;
  std::size_t regenerated_observed = 0;
};

// Counts c and q from an honest session. GHZ and decoy qubits are counted
// from the session; party-regenerated qubits are charged at L per party,
// the mean of the observed Binomial(2L, 1/2) count.
inline EfficiencyDerivation derive_efficiency_this_work(unsigned n, std::size_t L,
                                                        std::uint64_t seed = 0) {
  if (n < 1 || L < 1) throw DomainError("derive_efficiency_this_work: n, L must be >= 1");
  SessionConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.seed = seed;
  const SessionResult r = run_session(cfg, random_secret(cfg), NoAttack{});
  if (!r.succeeded()) throw std::logic_error("derive_efficiency_this_work: honest session failed");

  EfficiencyDerivation d;
  d.c = static_cast<std::int64_t>(r.reconstructed->values.size());
  d.ghz_qubits = r.counts.ghz;
  d.decoy_qubits = r.counts.decoys;
  d.regenerated_charged = static_cast<std::size_t>(n) * L;
  d.regenerated_observed = r.counts.regenerated;
  d.q = static_cast<std::int64_t>(d.ghz_qubits + d.decoy_qubits + d.regenerated_charged);
  d.eta = Rational(d.c, d.q);
  return d;
}

}  // namespace sqss
