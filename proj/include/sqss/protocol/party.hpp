#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sqss/core/state_pool.hpp"
#include "sqss/protocol/types.hpp"

namespace sqss {

// Test-only overrides for a party's random choices.
struct PartyOverrides {
  std::vector<PartyOp> ops;             // per received position; empty = random
  std::optional<PartyOp> all_ops;       // applied when `ops` is empty
  bool identity_order = false;
};

struct PartyOutput {
  std::vector<SlotId> outgoing;
  OperationRecord record;
  Permutation order;
  std::size_t regenerated = 0;
};

// Per position: reflect (return the same slot) or measure-flip (Z-measure,
// absorb the photon, emit a fresh slot in the opposite basis state); then
// return everything in a fresh random order.
inline PartyOutput party_process(std::span<const SlotId> received, StatePool& pool, Rng& rng,
                                 const PartyOverrides* overrides = nullptr) {
  const std::size_t m = received.size();
  if (overrides && !overrides->ops.empty() && overrides->ops.size() != m)
    throw UsageError("party_process: forced op list length mismatch");

  PartyOutput out;
  out.record.bits.assign(m, 0);
  out.record.outcomes.assign(m, std::nullopt);
  std::vector<SlotId> processed(received.begin(), received.end());

  for (std::size_t p = 0; p < m; ++p) {
    PartyOp op;
    if (overrides && !overrides->ops.empty()) {
      op = overrides->ops[p];
    } else if (overrides && overrides->all_ops) {
      op = *overrides->all_ops;
    } else {
      op = rng.coin() ? PartyOp::measure_flip : PartyOp::reflect;
    }
    if (op == PartyOp::reflect) continue;
    const unsigned z = pool.measure(received[p], Basis::Z, rng);
    pool.discard(received[p]);
    processed[p] = pool.create_basis(2, z ^ 1U);
    out.record.bits[p] = 1;
    out.record.outcomes[p] = static_cast<Bit>(z);
    ++out.regenerated;
  }

  out.order = (overrides && overrides->identity_order) ? Permutation::identity(m)
                                                       : Permutation::random(m, rng);
  out.outgoing.resize(m);
  for (std::size_t q = 0; q < m; ++q) out.outgoing[q] = processed[out.order.mapping[q]];
  return out;
}

}  // namespace sqss
