#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqss/core/ghz.hpp"
#include "sqss/protocol/session.hpp"

namespace sqss {

struct VerifyOptions {
  unsigned n_max = 3;
  std::size_t L_max = 2;
  unsigned ghz_n_max = 5;
  std::uint64_t seed = 0;
  bool inject_fault = false;  // flip published m' of party 1, tuple 1 in the first case
};

struct Counterexample {
  unsigned n = 0;
  std::size_t L = 0;
  std::size_t party = 0;  // 1-based
  std::size_t tuple = 0;  // 1-based
  unsigned m0 = 0;
  Bit a = 0;
  Bit r = 0;
  Bit published = 0;
  std::string ops;

  std::string describe() const {
    std::ostringstream os;
    os << "counterexample n=" << n << " L=" << L << " (i,j)=(" << party << "," << tuple
       << ") m0=" << m0 << " a=" << int(a) << " r=" << int(r) << " m'=" << int(published)
       << " expected=" << int(a ^ r) << " ops=" << ops;
    return os.str();
  }
};

struct VerifyReport {
  std::size_t algebra_cases = 0;   // forced (ops, m0) sessions
  std::size_t bit_checks = 0;      // individual m' comparisons
  std::size_t ghz_pairs = 0;
  double ghz_max_error = 0.0;
  std::optional<Counterexample> failure;
  std::string ghz_failure;

  bool ok() const { return !failure && ghz_failure.empty(); }
};

// |<G_k|G_k'>| against delta for every pair with the same sign, both signs.
inline void verify_ghz_orthonormality(unsigned n_max, VerifyReport& rep) {
  for (unsigned n = 1; n <= n_max; ++n) {
    const std::uint64_t count = std::uint64_t{1} << n;
    for (GhzSign sign : {GhzSign::plus, GhzSign::minus}) {
      std::vector<std::vector<Amplitude>> states;
      for (std::uint64_t k = 0; k < count; ++k) states.push_back(GhzSpec{n, k, sign}.amplitudes());
      for (std::uint64_t k = 0; k < count; ++k) {
        for (std::uint64_t k2 = 0; k2 < count; ++k2) {
          Amplitude ip{};
          for (std::size_t x = 0; x < states[k].size(); ++x) ip += std::conj(states[k][x]) * states[k2][x];
          const double err = std::abs(ip - Amplitude(k == k2 ? 1.0 : 0.0));
          rep.ghz_max_error = std::max(rep.ghz_max_error, err);
          ++rep.ghz_pairs;
          if (err >= 1e-12 && rep.ghz_failure.empty()) {
            rep.ghz_failure = "ghz n=" + std::to_string(n) + " k=" + std::to_string(k) +
                              " k'=" + std::to_string(k2) + " error=" + std::to_string(err);
          }
        }
      }
    }
  }
}

// One (n, L): every assignment of party ops to key positions times every
// m0 branch per tuple, each outcome forced. Checks m'_{j,i} = a_{j,i} xor r_{j,i}.
inline void verify_algebra(unsigned n, std::size_t L, const VerifyOptions& opt, VerifyReport& rep) {
  SessionConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.seed = derive_seed(opt.seed, (std::uint64_t{n} << 32) | L);
  const std::size_t m = cfg.sequence_length();
  const std::size_t op_bits = static_cast<std::size_t>(n) * L;
  if (op_bits + L > 24) throw UsageError("verify: n*L + L too large for exhaustive enumeration");

  // Key positions depend only on the dealer stream, so a dry run finds them.
  const SessionResult dry = run_session(cfg, Secret{n, std::vector<std::uint64_t>(L, 0)}, NoAttack{});
  const auto& key_positions = dry.key_positions;
  const std::uint64_t modulus = std::uint64_t{1} << n;

  for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << op_bits); ++combo) {
    SessionHooks hooks;
    hooks.parties.resize(n);
    std::string ops;
    for (unsigned i = 0; i < n; ++i) {
      hooks.parties[i].ops.assign(m, PartyOp::reflect);
      for (std::size_t j = 0; j < L; ++j) {
        const bool flip = (combo >> (i * L + j)) & 1U;
        hooks.parties[i].ops[key_positions[i][j]] = flip ? PartyOp::measure_flip : PartyOp::reflect;
        ops += flip ? 'F' : 'R';
      }
      if (i + 1 < n) ops += '|';
    }
    for (std::uint64_t branch = 0; branch < (std::uint64_t{1} << L); ++branch) {
      Secret secret{n, std::vector<std::uint64_t>(L)};
      for (std::size_t j = 0; j < L; ++j) secret.values[j] = (combo + branch + j) % modulus;

      hooks.on_prepared = [branch](const DealerState& st, StatePool& pool) {
        for (const GhzTuple& t : st.tuples) {
          const unsigned m0 = (branch >> t.j) & 1U;
          pool.force_outcome(t.slots[0], m0);
          for (std::size_t i = 0; i < t.a_bits.size(); ++i)
            pool.force_outcome(t.slots[i + 1], t.a_bits[i] ^ m0);
        }
      };
      const bool fault = opt.inject_fault && combo == 0 && branch == 0;
      if (fault) hooks.tamper_published = [](PublishedBits& p) { p[0][0] ^= 1U; };
      else hooks.tamper_published = nullptr;

      const SessionResult r = run_session(cfg, secret, NoAttack{}, hooks);
      ++rep.algebra_cases;
      if (r.aborted) throw std::logic_error("verify: honest forced session aborted");
      for (std::size_t j = 0; j < L; ++j) {
        const BitVector a = k_to_bits(secret.values[j], n);
        for (unsigned i = 0; i < n; ++i) {
          const Bit rbit = r.records[i].sifted[j];
          const Bit pub = r.published[j][i];
          ++rep.bit_checks;
          const bool mismatch = pub != (a[i] ^ rbit) || r.m0[j] != ((branch >> j) & 1U);
          if (mismatch && !rep.failure) {
            rep.failure = Counterexample{n, L, i + 1, j + 1, static_cast<unsigned>((branch >> j) & 1U),
                                         a[i], rbit, pub, ops};
          }
        }
      }
      if (!rep.failure && !r.succeeded())
        throw std::logic_error("verify: reconstruction differs without a bit mismatch");
      if (rep.failure) return;
    }
  }
}

inline VerifyReport run_verify(const VerifyOptions& opt) {
  if (opt.n_max < 1 || opt.L_max < 1) throw UsageError("verify: n_max and L_max must be >= 1");
  VerifyReport rep;
  for (unsigned n = 1; n <= opt.n_max && !rep.failure; ++n)
    for (std::size_t L = 1; L <= opt.L_max && !rep.failure; ++L) verify_algebra(n, L, opt, rep);
  verify_ghz_orthonormality(std::max(opt.ghz_n_max, opt.n_max), rep);
  return rep;
}

}  // namespace sqss
