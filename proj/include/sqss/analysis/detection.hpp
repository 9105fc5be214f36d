#pragma once

#include <array>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "sqss/adversary/inference.hpp"
#include "sqss/protocol/session.hpp"

namespace sqss {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const { return low <= x && x <= high; }
};

// Wilson score interval; z = 1.96 for 95%.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct FailureCount {
  std::size_t failures = 0;
  std::size_t total = 0;
  double rate() const { return total ? static_cast<double>(failures) / total : 0.0; }
};

struct DetectionEstimate {
  std::string attack;
  unsigned n = 1;
  std::size_t L = 1;
  std::size_t trials = 0;
  std::size_t decoys_checked = 0;
  std::size_t decoy_failures = 0;
  std::size_t aborts = 0;
  double per_decoy_rate = 0.0;
  double session_abort_rate = 0.0;
  Interval ci95;
  // [prepared state][party op] breakdown of the decoy checks.
  std::array<std::array<FailureCount, 2>, 4> by_state_op{};
  GuessTally eve_ops;  // positional_flip guesses over retained positions
};

namespace detail {

struct DetectionCounts {
  std::size_t checked = 0, failures = 0, aborts = 0;
  std::array<std::array<FailureCount, 2>, 4> by_state_op{};
  GuessTally eve_ops;

  void merge(const DetectionCounts& o) {
    checked += o.checked;
    failures += o.failures;
    aborts += o.aborts;
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t k = 0; k < 2; ++k) {
        by_state_op[s][k].failures += o.by_state_op[s][k].failures;
        by_state_op[s][k].total += o.by_state_op[s][k].total;
      }
    eve_ops.merge(o.eve_ops);
  }
};

}  // namespace detail

// Runs `trials` independent sessions. Trial t uses seed derive_seed(base.seed, t)
// and a fresh random secret, so the aggregate does not depend on `jobs`.
inline DetectionEstimate estimate_detection(const SessionConfig& base, const AttackModel& attack,
                                            std::size_t trials, unsigned jobs = 1,
                                            const SessionHooks& hooks = {}) {
  if (trials < 1) throw UsageError("estimate_detection: trials must be >= 1");
  base.validate();
  validate_attack(attack, base.n);
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(trials)));

  auto worker = [&](unsigned w, detail::DetectionCounts& out) {
    for (std::size_t t = w; t < trials; t += jobs) {
      SessionConfig cfg = base;
      cfg.seed = derive_seed(base.seed, t);
      const SessionResult r = run_session(cfg, random_secret(cfg), attack, hooks);
      out.checked += r.decoys_checked;
      out.failures += r.total_decoy_errors();
      out.aborts += r.aborted ? 1 : 0;
      for (const auto& d : r.decoy_log) {
        auto& c = out.by_state_op[static_cast<std::size_t>(d.prepared)][static_cast<std::size_t>(d.op)];
        ++c.total;
        c.failures += d.passed ? 0 : 1;
      }
      Rng guess_rng(derive_seed(cfg.seed, streams::eve + 100));
      out.eve_ops.merge(eve_guess(r, EveStrategy::positional_flip, guess_rng).tally);
    }
  };

  std::vector<detail::DetectionCounts> partial(jobs);
  if (jobs == 1) {
    worker(0, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w, std::ref(partial[w]));
    for (auto& th : pool) th.join();
  }
  detail::DetectionCounts total;
  for (const auto& p : partial) total.merge(p);

  DetectionEstimate e;
  e.attack = attack_name(attack);
  e.n = base.n;
  e.L = base.L;
  e.trials = trials;
  e.decoys_checked = total.checked;
  e.decoy_failures = total.failures;
  e.aborts = total.aborts;
  e.per_decoy_rate = total.checked ? static_cast<double>(total.failures) / total.checked : 0.0;
  e.session_abort_rate = static_cast<double>(total.aborts) / static_cast<double>(trials);
  e.ci95 = wilson_interval(total.failures, total.checked);
  e.by_state_op = total.by_state_op;
  e.eve_ops = total.eve_ops;
  return e;
}

}  // namespace sqss
