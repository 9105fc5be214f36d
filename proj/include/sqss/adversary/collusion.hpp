#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sqss/protocol/types.hpp"

namespace sqss {

struct CollusionGuess {
  Secret guess;
  std::vector<std::size_t> known_parties;  // columns computed exactly
  std::size_t tuples_correct = 0;           // filled by score_collusion
  std::size_t bits_correct_known = 0;
  std::size_t bits_known = 0;

  double tuple_accuracy() const {
    return guess.values.empty() ? 0.0
                                : static_cast<double>(tuples_correct) / guess.values.size();
  }
};

// Dishonest parties combine the public m' bits with their own sifted records.
// Each bit column of a missing party is guessed uniformly at random.
inline CollusionGuess collusion_reconstruct(const PublishedBits& published, unsigned n,
                                            const std::map<std::size_t, BitVector>& shares,
                                            Rng& rng) {
  if (shares.size() >= n)
    throw UsageError("collusion_reconstruct: all shares present; that is a legitimate reconstruction");
  for (const auto& [party, bits] : shares) {
    if (party >= n) throw UsageError("collusion_reconstruct: party index out of range");
    if (bits.size() != published.size())
      throw UsageError("collusion_reconstruct: share length does not match published rows");
  }
  CollusionGuess out;
  out.guess.n = n;
  for (const auto& [party, bits] : shares) out.known_parties.push_back(party);
  BitVector row(n);
  for (std::size_t j = 0; j < published.size(); ++j) {
    if (published[j].size() != n) throw UsageError("collusion_reconstruct: row width != n");
    for (unsigned i = 0; i < n; ++i) {
      const auto it = shares.find(i);
      row[i] = it != shares.end() ? static_cast<Bit>(published[j][i] ^ it->second[j])
                                  : static_cast<Bit>(rng.coin() ? 1 : 0);
    }
    out.guess.values.push_back(bits_to_k(row));
  }
  return out;
}

inline void score_collusion(CollusionGuess& g, const Secret& truth) {
  if (truth.values.size() != g.guess.values.size())
    throw UsageError("score_collusion: length mismatch");
  g.tuples_correct = 0;
  g.bits_correct_known = 0;
  g.bits_known = 0;
  for (std::size_t j = 0; j < truth.values.size(); ++j) {
    if (truth.values[j] == g.guess.values[j]) ++g.tuples_correct;
    const BitVector want = k_to_bits(truth.values[j], truth.n);
    const BitVector got = k_to_bits(g.guess.values[j], truth.n);
    for (std::size_t i : g.known_parties) {
      ++g.bits_known;
      if (want[i] == got[i]) ++g.bits_correct_known;
    }
  }
}

}  // namespace sqss
