#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqss/adversary/attack_model.hpp"
#include "sqss/adversary/collusion.hpp"
#include "sqss/adversary/taps.hpp"
#include "sqss/protocol/dealer.hpp"
#include "sqss/protocol/party.hpp"
#include "sqss/protocol/transcript.hpp"
#include "sqss/protocol/types.hpp"

namespace sqss {

// Stream ids for derive_seed(config.seed, id).
namespace streams {
inline constexpr std::uint64_t dealer = 1;
inline constexpr std::uint64_t eve = 2;
inline constexpr std::uint64_t collusion = 3;
inline constexpr std::uint64_t secret = 4;
inline constexpr std::uint64_t party_base = 1000;
}  // namespace streams

// Test-only knobs. Production runs leave everything default.
struct SessionHooks {
  std::vector<PartyOverrides> parties;  // indexed by party; missing entries = honest random
  std::function<void(const DealerState&, StatePool&)> on_prepared;
  std::function<void(PublishedBits&)> tamper_published;
};

struct QubitCounts {
  std::size_t ghz = 0;
  std::size_t decoys = 0;
  std::size_t regenerated = 0;
  std::size_t adversary = 0;
};

struct SessionResult {
  Secret secret;
  std::optional<Secret> reconstructed;
  bool aborted = false;
  std::string abort_reason;

  std::vector<std::size_t> decoy_errors;  // per party
  std::vector<std::size_t> decoys_checked_per_party;
  std::size_t decoys_checked = 0;
  std::vector<DecoyOutcome> decoy_log;

  PublishedBits published;                // empty on abort
  BitVector m0;                           // dealer's S_0 outcomes; empty on abort
  std::vector<OperationRecord> records;   // per party
  std::vector<Permutation> orders;        // per party
  std::vector<std::vector<std::size_t>> key_positions;  // per party, position of tuple j
  QubitCounts counts;

  EveReport eve;
  Transcript transcript;
  std::optional<CollusionGuess> collusion;

  std::size_t total_decoy_errors() const {
    std::size_t s = 0;
    for (auto e : decoy_errors) s += e;
    return s;
  }
  bool succeeded() const { return !aborted && reconstructed && *reconstructed == secret; }
};

namespace detail {

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string bit_string(const BitVector& v) {
  std::string s;
  for (Bit b : v) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace detail

// Runs one full session with `tap` sitting on every quantum channel.
inline SessionResult run_session(const SessionConfig& config, const Secret& secret,
                                 ChannelTap& tap, const SessionHooks& hooks = {},
                                 const Collusion* collusion = nullptr) {
  config.validate();
  SessionResult res;
  res.secret = secret;
  Transcript& tr = res.transcript;

  StatePool pool;
  Rng dealer_rng(derive_seed(config.seed, streams::dealer));
  DealerState dealer = dealer_prepare(config, secret, pool, dealer_rng);
  if (hooks.on_prepared) hooks.on_prepared(dealer, pool);

  const unsigned n = config.n;
  const std::size_t m = config.sequence_length();
  for (const auto& t : dealer.tuples) res.counts.ghz += t.slots.size();
  for (const auto& link : dealer.links) res.counts.decoys += link.decoys.size();
  const std::size_t created_before = pool.slots_created();

  std::vector<Rng> party_rngs;
  for (unsigned i = 0; i < n; ++i)
    party_rngs.emplace_back(derive_seed(config.seed, streams::party_base + i));

  // Quantum phase: out, party operations, back.
  res.records.resize(n);
  res.orders.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    PartyLink& link = dealer.links[i];
    tap.begin_channel(i, m);
    std::vector<SlotId> delivered(m);
    for (std::size_t p = 0; p < m; ++p) {
      tr.append(dealer_name(), party_name(i), "qubit", "out pos=" + std::to_string(p),
                link.is_decoy[p]);
      delivered[p] = tap.forward(i, p, link.sent[p], pool);
    }
    const PartyOverrides* ov = i < hooks.parties.size() ? &hooks.parties[i] : nullptr;
    PartyOutput out = party_process(delivered, pool, party_rngs[i], ov);
    res.counts.regenerated += out.regenerated;

    std::vector<SlotId> returned(m);
    for (std::size_t q = 0; q < m; ++q) {
      tr.append(party_name(i), dealer_name(), "qubit", "back pos=" + std::to_string(q),
                link.is_decoy[out.order.mapping[q]]);
      returned[q] = tap.backward(i, q, out.outgoing[q], pool);
    }
    dealer_store(dealer, i, returned);
    res.records[i] = std::move(out.record);
    res.orders[i] = std::move(out.order);
    res.key_positions.push_back(link.key_positions);
  }
  res.counts.adversary = pool.slots_created() - created_before - res.counts.regenerated;
  res.eve = tap.take_report();

  // Classical phase. Orders are announced only after every qubit is stored.
  for (unsigned i = 0; i < n; ++i)
    tr.append(party_name(i), dealer_name(), "order", detail::join(res.orders[i].mapping));

  res.decoy_errors.assign(n, 0);
  res.decoys_checked_per_party.assign(n, 0);
  try {
    for (unsigned i = 0; i < n; ++i) {
      const std::vector<std::size_t> positions = dealer.links[i].decoy_positions();
      tr.append(dealer_name(), party_name(i), "decoy_positions", detail::join(positions));
      res.records[i].sift(positions);
      const auto announcements = res.records[i].announce(positions);
      std::string summary;
      for (const auto& a : announcements)
        summary += std::string(summary.empty() ? "" : ",") + (a.outcome ? "F" : "R") +
                   (a.outcome ? std::to_string(*a.outcome) : "");
      tr.append(party_name(i), dealer_name(), "decoy_ops", summary);
      CheckTally tally = dealer_check(dealer, i, res.orders[i], announcements, pool, dealer_rng);
      res.decoy_errors[i] = tally.errors;
      res.decoys_checked_per_party[i] = tally.checked;
      res.decoys_checked += tally.checked;
      res.decoy_log.insert(res.decoy_log.end(), tally.details.begin(), tally.details.end());
    }
  } catch (const ProtocolViolation& e) {
    res.aborted = true;
    res.abort_reason = std::string("protocol violation: ") + e.what();
    tr.append(dealer_name(), "all", "abort", res.abort_reason);
    return res;
  }

  std::string check_summary;
  for (unsigned i = 0; i < n; ++i) {
    check_summary += (i ? ";" : "") + party_name(i) + "=" + std::to_string(res.decoy_errors[i]) +
                     "/" + std::to_string(res.decoys_checked_per_party[i]);
    const double checked = static_cast<double>(res.decoys_checked_per_party[i]);
    if (checked > 0 && static_cast<double>(res.decoy_errors[i]) / checked > config.abort_threshold) {
      res.aborted = true;
    }
  }
  tr.append(dealer_name(), "all", "check", check_summary);
  if (res.aborted) {
    res.abort_reason = "decoy check failed (" + check_summary + ")";
    tr.append(dealer_name(), "all", "abort", res.abort_reason);
    return res;
  }

  res.published = dealer_measure_publish(dealer, pool, dealer_rng);
  res.m0 = dealer.measured[0];
  if (hooks.tamper_published) hooks.tamper_published(res.published);
  for (const auto& row : res.published) tr.append(dealer_name(), "all", "publish", detail::bit_string(row));

  std::vector<std::optional<BitVector>> shares(n);
  for (unsigned i = 0; i < n; ++i) {
    tr.append(party_name(i), "parties", "share", std::to_string(res.records[i].sifted.size()) + " bits");
    shares[i] = res.records[i].sifted;
  }
  res.reconstructed = reconstruct(res.published, shares);

  if (collusion) {
    std::map<std::size_t, BitVector> known;
    for (std::size_t i : collusion->dishonest) known[i] = res.records.at(i).sifted;
    Rng rng(derive_seed(config.seed, streams::collusion));
    CollusionGuess g = collusion_reconstruct(res.published, n, known, rng);
    score_collusion(g, secret);
    res.collusion = std::move(g);
  }
  return res;
}

inline SessionResult run_session(const SessionConfig& config, const Secret& secret,
                                 const AttackModel& attack, const SessionHooks& hooks = {}) {
  validate_attack(attack, config.n);
  auto tap = make_tap(attack, derive_seed(config.seed, streams::eve));
  return run_session(config, secret, *tap, hooks, std::get_if<Collusion>(&attack));
}

inline Secret random_secret(const SessionConfig& config) {
  Rng rng(derive_seed(config.seed, streams::secret));
  return Secret::random(config.n, config.L, rng);
}

}  // namespace sqss
