#pragma once

#include <array>
#include <cmath>
#include <string>

#include "sqss/protocol/session.hpp"

namespace sqss {

enum class EveStrategy : std::uint8_t {
  // Operation bit at transit position p = (returned Z value at p) != (sent
  // value at p). Only correct when the party's reorder leaves p in place.
  positional_flip,
  // Transit Z value of a key qubit = probe level >= 2 (probe kets e_2, e_3
  // follow a |1> input under the distinct probe map).
  probe_threshold,
};

// 2x2 contingency table of (guess, truth).
struct GuessTally {
  std::array<std::size_t, 4> counts{};  // index = 2*guess + truth

  void add(Bit guess, Bit truth) { ++counts[2U * guess + truth]; }
  void merge(const GuessTally& o) {
    for (std::size_t i = 0; i < 4; ++i) counts[i] += o.counts[i];
  }
  std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  std::size_t correct() const { return counts[0] + counts[3]; }
  double accuracy() const {
    return total() ? static_cast<double>(correct()) / static_cast<double>(total()) : 0.0;
  }

  // Empirical mutual information I(guess; truth) in bits.
  double mutual_information() const {
    const double t = static_cast<double>(total());
    if (t == 0) return 0.0;
    double mi = 0.0;
    for (unsigned g = 0; g < 2; ++g)
      for (unsigned r = 0; r < 2; ++r) {
        const double pgr = counts[2 * g + r] / t;
        if (pgr == 0) continue;
        const double pg = (counts[2 * g] + counts[2 * g + 1]) / t;
        const double pr = (counts[r] + counts[2 + r]) / t;
        mi += pgr * std::log2(pgr / (pg * pr));
      }
    return mi;
  }
};

struct EveGuess {
  BitVector guessed_bits;  // one per party per retained position
  BitVector truth;
  GuessTally tally;
  std::string strategy_note;
};

// Scores Eve's guesses on every retained (key-bearing) position. Ground truth
// comes from the harness: party operation bits for positional_flip, the
// transit Z value a_i xor m_0 for probe_threshold.
inline EveGuess eve_guess(const SessionResult& session, EveStrategy strategy, Rng& rng) {
  EveGuess out;
  const EveReport& rep = session.eve;
  out.strategy_note = rep.strategy_note.empty() ? "no observations" : rep.strategy_note;
  const unsigned n = session.secret.n;
  if (strategy == EveStrategy::probe_threshold && session.m0.empty())
    throw UsageError("eve_guess: transit-bit ground truth needs a completed session");

  for (unsigned i = 0; i < n; ++i) {
    const ChannelObservation* ch = i < rep.channels.size() ? &rep.channels[i] : nullptr;
    const auto& keys = session.key_positions.at(i);
    for (std::size_t j = 0; j < keys.size(); ++j) {
      const std::size_t p = keys[j];
      Bit guess;
      Bit truth;
      if (strategy == EveStrategy::positional_flip) {
        truth = session.records.at(i).bits.at(p);
        if (ch && ch->forward.at(p) && ch->backward.at(p)) {
          guess = static_cast<Bit>(*ch->forward[p] != *ch->backward[p]);
        } else {
          guess = static_cast<Bit>(rng.coin());
        }
      } else {
        const Bit a = k_to_bits(session.secret.values[j], n)[i];
        truth = static_cast<Bit>(a ^ session.m0[j]);
        if (ch && ch->probe.at(p)) {
          guess = static_cast<Bit>(*ch->probe[p] >= 2);
        } else {
          guess = static_cast<Bit>(rng.coin());
        }
      }
      out.guessed_bits.push_back(guess);
      out.truth.push_back(truth);
      out.tally.add(guess, truth);
    }
  }
  return out;
}

}  // namespace sqss
