#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqss/core/ghz.hpp"
#include "sqss/core/state_pool.hpp"
#include "sqss/protocol/types.hpp"

namespace sqss {

struct GhzTuple {
  std::size_t j = 0;
  std::vector<SlotId> slots;  // g_0 .. g_n
  BitVector a_bits;
};

// Dealer-side view of the link with one party.
struct PartyLink {
  std::vector<SlotId> sent;               // S*_i in transmission order
  std::vector<bool> is_decoy;
  std::vector<std::size_t> key_positions;  // position of g^j_i in S*_i
  std::vector<DecoyRecord> decoys;         // sorted by position
  std::vector<SlotId> received;            // in arrival order
  std::vector<SlotId> restored;            // back in transmission order
  bool checked = false;

  std::vector<std::size_t> decoy_positions() const {
    std::vector<std::size_t> out;
    out.reserve(decoys.size());
    for (const auto& d : decoys) out.push_back(d.position);
    return out;
  }
};

struct DealerState {
  Secret secret;
  std::vector<GhzTuple> tuples;
  std::vector<SlotId> kept;  // S_0
  std::vector<PartyLink> links;
  std::vector<BitVector> measured;  // M_0..M_n, each of length L
  PublishedBits published;
  bool published_done = false;

  unsigned n() const { return secret.n; }
  std::size_t L() const { return secret.length(); }
};

// Prepares L copies of |G+_{k_j}>, keeps g_0 of each, and builds S*_i for each
// party by interleaving decoys at uniformly random positions.
inline DealerState dealer_prepare(const SessionConfig& config, const Secret& secret,
                                  StatePool& pool, Rng& rng) {
  config.validate();
  secret.validate();
  if (secret.n != config.n || secret.length() != config.L)
    throw UsageError("dealer_prepare: secret shape does not match config");

  DealerState st;
  st.secret = secret;
  for (std::size_t j = 0; j < config.L; ++j) {
    GhzSpec spec{config.n, secret.values[j], GhzSign::plus};
    GhzTuple t{j, prepare_ghz(pool, spec), spec.a_bits()};
    st.kept.push_back(t.slots[0]);
    st.tuples.push_back(std::move(t));
  }

  const std::size_t m = config.sequence_length();
  const std::size_t decoys = config.decoys();
  st.links.resize(config.n);
  for (unsigned i = 0; i < config.n; ++i) {
    PartyLink& link = st.links[i];
    link.is_decoy.assign(m, false);
    std::fill_n(link.is_decoy.begin(), decoys, true);
    {
      // Fisher-Yates over the flags gives a uniform subset of positions.
      std::vector<std::uint8_t> flags(link.is_decoy.begin(), link.is_decoy.end());
      rng.shuffle(std::span<std::uint8_t>(flags));
      std::copy(flags.begin(), flags.end(), link.is_decoy.begin());
    }
    link.sent.resize(m);
    std::size_t j = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if (link.is_decoy[p]) {
        const auto state = static_cast<SingleState>(rng.below(4));
        link.decoys.push_back({state, p});
        link.sent[p] = prepare_single(pool, state);
      } else {
        link.key_positions.push_back(p);
        link.sent[p] = st.tuples[j++].slots[i + 1];
      }
    }
  }
  return st;
}

inline void dealer_store(DealerState& st, std::size_t party, std::span<const SlotId> returned) {
  PartyLink& link = st.links.at(party);
  if (returned.size() != link.sent.size())
    throw ProtocolViolation("dealer_store: wrong number of returned qubits");
  link.received.assign(returned.begin(), returned.end());
}

// Basis the dealer measures a returned decoy in, and what passes.
struct DecoyCheck {
  Basis dealer_basis = Basis::Z;
  unsigned expected_outcome = 0;
  bool party_outcome_consistent = true;

  bool passes(unsigned dealer_outcome) const {
    return party_outcome_consistent && dealer_outcome == expected_outcome;
  }
};

// Reflect: the dealer measures in the preparation basis and expects the
// prepared state. Measure-flip: a Z-basis decoy must have been read correctly
// by the party, and the dealer's Z outcome must be the flipped party outcome.
inline DecoyCheck decoy_expectation(SingleState prepared, PartyOp op,
                                    std::optional<Bit> party_outcome) {
  if (op == PartyOp::reflect) {
    if (party_outcome) throw UsageError("decoy_expectation: reflect carries no outcome");
    return {basis_of(prepared), label_of(prepared), true};
  }
  if (!party_outcome) throw UsageError("decoy_expectation: measure-flip needs the party outcome");
  if (*party_outcome > 1) throw UsageError("decoy_expectation: outcome is not a bit");
  const bool consistent = basis_of(prepared) == Basis::X || *party_outcome == label_of(prepared);
  return {Basis::Z, *party_outcome ^ 1U, consistent};
}

struct DecoyOutcome {
  std::size_t party = 0;
  SingleState prepared = SingleState::zero;
  PartyOp op = PartyOp::reflect;
  bool passed = true;
};

struct CheckTally {
  std::size_t errors = 0;
  std::size_t checked = 0;
  std::vector<DecoyOutcome> details;
};

// Restores transmission order, then measures and scores every decoy. Checked
// decoys are discarded.
inline CheckTally dealer_check(DealerState& st, std::size_t party,
                               const Permutation& announced_order,
                               const std::vector<DecoyAnnouncement>& announcements,
                               StatePool& pool, Rng& rng) {
  PartyLink& link = st.links.at(party);
  if (link.received.size() != link.sent.size())
    throw UsageError("dealer_check: qubits not yet stored");
  if (link.checked) throw UsageError("dealer_check: party already checked");
  if (announced_order.size() != link.sent.size() || !announced_order.is_bijection())
    throw ProtocolViolation("dealer_check: announced order is not a permutation");
  if (announcements.size() != link.decoys.size())
    throw ProtocolViolation("dealer_check: wrong number of decoy announcements");

  link.restored.assign(link.sent.size(), SlotId{});
  for (std::size_t q = 0; q < announced_order.size(); ++q)
    link.restored[announced_order.mapping[q]] = link.received[q];

  CheckTally tally;
  for (std::size_t d = 0; d < link.decoys.size(); ++d) {
    const DecoyRecord& rec = link.decoys[d];
    const DecoyAnnouncement& ann = announcements[d];
    if (ann.position != rec.position)
      throw ProtocolViolation("dealer_check: announcement for a non-decoy position");
    if ((ann.op == PartyOp::measure_flip) != ann.outcome.has_value() ||
        (ann.outcome && *ann.outcome > 1))
      throw ProtocolViolation("dealer_check: malformed operation announcement");
    const DecoyCheck check = decoy_expectation(rec.prepared, ann.op, ann.outcome);
    const SlotId slot = link.restored[rec.position];
    const unsigned outcome = pool.measure(slot, check.dealer_basis, rng);
    pool.discard(slot);
    const bool ok = check.passes(outcome);
    tally.errors += ok ? 0 : 1;
    ++tally.checked;
    tally.details.push_back({party, rec.prepared, ann.op, ok});
  }
  link.checked = true;
  return tally;
}

// Z-measures S_0 and every key-bearing returned qubit, then publishes
// m'_{j,i} = m_{j,i} xor m_{j,0}.
inline const PublishedBits& dealer_measure_publish(DealerState& st, StatePool& pool, Rng& rng) {
  if (st.published_done) throw UsageError("dealer_measure_publish: already published");
  for (const auto& link : st.links)
    if (!link.checked) throw UsageError("dealer_measure_publish: decoy check not done");

  const std::size_t L = st.L();
  const unsigned n = st.n();
  st.measured.assign(n + 1, BitVector(L));
  for (std::size_t j = 0; j < L; ++j) {
    st.measured[0][j] = static_cast<Bit>(pool.measure(st.kept[j], Basis::Z, rng));
    pool.discard(st.kept[j]);
  }
  for (unsigned i = 0; i < n; ++i) {
    const PartyLink& link = st.links[i];
    for (std::size_t j = 0; j < L; ++j) {
      const SlotId slot = link.restored[link.key_positions[j]];
      st.measured[i + 1][j] = static_cast<Bit>(pool.measure(slot, Basis::Z, rng));
      pool.discard(slot);
    }
  }
  st.published.assign(L, BitVector(n));
  for (std::size_t j = 0; j < L; ++j)
    for (unsigned i = 0; i < n; ++i)
      st.published[j][i] = st.measured[i + 1][j] ^ st.measured[0][j];
  st.published_done = true;
  return st.published;
}

}  // namespace sqss
