#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqss/core/bits.hpp"
#include "sqss/core/errors.hpp"
#include "sqss/core/ghz.hpp"
#include "sqss/core/rng.hpp"

namespace sqss {

// The dealer's message K = (k_1..k_L), each k_j in [0, 2^n).
struct Secret {
  unsigned n = 1;
  std::vector<std::uint64_t> values;

  std::size_t length() const noexcept { return values.size(); }

  void validate() const {
    if (n == 0 || n > 20) throw UsageError("Secret: n must be in [1, 20]");
    if (values.empty()) throw UsageError("Secret: needs at least one value");
    for (std::uint64_t k : values) {
      if (k >= (std::uint64_t{1} << n)) {
        throw UsageError("Secret: value " + std::to_string(k) + " out of range for n=" +
                         std::to_string(n));
      }
    }
  }

  static Secret random(unsigned n, std::size_t length, Rng& rng) {
    Secret s{n, std::vector<std::uint64_t>(length)};
    for (auto& k : s.values) k = rng.below(std::uint64_t{1} << n);
    return s;
  }

  friend bool operator==(const Secret&, const Secret&) = default;
};

struct SessionConfig {
  unsigned n = 1;
  std::size_t L = 1;
  std::optional<std::size_t> decoys_per_party;  // defaults to L
  std::uint64_t seed = 0;
  double abort_threshold = 0.0;  // abort when a party's error fraction exceeds this

  std::size_t decoys() const { return decoys_per_party.value_or(L); }
  std::size_t sequence_length() const { return L + decoys(); }

  void validate() const {
    if (n < 1 || n > 20) throw UsageError("SessionConfig: n must be in [1, 20]");
    if (L < 1) throw UsageError("SessionConfig: L must be >= 1");
    if (!(abort_threshold >= 0.0 && abort_threshold < 1.0))
      throw UsageError("SessionConfig: abort_threshold must be in [0, 1)");
  }
};

enum class PartyOp : std::uint8_t { reflect = 0, measure_flip = 1 };

inline const char* to_string(PartyOp op) {
  return op == PartyOp::reflect ? "reflect" : "measure-flip";
}

struct DecoyRecord {
  SingleState prepared = SingleState::zero;
  std::size_t position = 0;  // index in the transmitted sequence
};

// outgoing[q] = processed[mapping[q]]; announcing `mapping` lets the dealer
// restore the transmission order.
struct Permutation {
  std::vector<std::size_t> mapping;

  static Permutation identity(std::size_t n) {
    Permutation p{std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) p.mapping[i] = i;
    return p;
  }

  static Permutation random(std::size_t n, Rng& rng) {
    Permutation p = identity(n);
    rng.shuffle(std::span<std::size_t>(p.mapping));
    return p;
  }

  std::size_t size() const noexcept { return mapping.size(); }

  bool is_bijection() const {
    std::vector<bool> seen(mapping.size(), false);
    for (std::size_t m : mapping) {
      if (m >= mapping.size() || seen[m]) return false;
      seen[m] = true;
    }
    return true;
  }

  Permutation inverse() const {
    Permutation inv{std::vector<std::size_t>(mapping.size())};
    for (std::size_t q = 0; q < mapping.size(); ++q) inv.mapping[mapping[q]] = q;
    return inv;
  }
};

struct DecoyAnnouncement {
  std::size_t position = 0;
  PartyOp op = PartyOp::reflect;
  std::optional<Bit> outcome;  // present iff op == measure_flip
};

// A party's private record: one bit per received position (1 = measure-flip).
struct OperationRecord {
  BitVector bits;
  std::vector<std::optional<Bit>> outcomes;  // Z outcome at measure-flipped positions
  BitVector sifted;                          // bits at non-decoy positions, in order

  PartyOp op_at(std::size_t pos) const {
    return bits.at(pos) ? PartyOp::measure_flip : PartyOp::reflect;
  }

  std::vector<DecoyAnnouncement> announce(const std::vector<std::size_t>& positions) const {
    std::vector<DecoyAnnouncement> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) out.push_back({p, op_at(p), outcomes.at(p)});
    return out;
  }

  // `decoy_positions` must be sorted.
  void sift(const std::vector<std::size_t>& decoy_positions) {
    sifted.clear();
    std::size_t d = 0;
    for (std::size_t p = 0; p < bits.size(); ++p) {
      if (d < decoy_positions.size() && decoy_positions[d] == p) {
        ++d;
        continue;
      }
      sifted.push_back(bits[p]);
    }
  }
};

// Published m' bits: row j (tuple), column i (party).
using PublishedBits = std::vector<BitVector>;

// k_j = sum_i (m'_{j,i} xor r'_{j,i}) * 2^(n-i). Every party's sifted record
// is required.
inline Secret reconstruct(const PublishedBits& published,
                          const std::vector<std::optional<BitVector>>& shares) {
  if (shares.empty()) throw InsufficientShares("reconstruct: no shares");
  const auto n = static_cast<unsigned>(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!shares[i]) {
      throw InsufficientShares("reconstruct: missing share of party " + std::to_string(i + 1));
    }
    if (shares[i]->size() != published.size())
      throw UsageError("reconstruct: share length does not match published rows");
  }
  Secret out{n, {}};
  out.values.reserve(published.size());
  BitVector row_bits(n);
  for (std::size_t j = 0; j < published.size(); ++j) {
    if (published[j].size() != n) throw UsageError("reconstruct: published row width != n");
    for (unsigned i = 0; i < n; ++i) row_bits[i] = published[j][i] ^ (*shares[i])[j];
    out.values.push_back(bits_to_k(row_bits));
  }
  return out;
}

}  // namespace sqss
