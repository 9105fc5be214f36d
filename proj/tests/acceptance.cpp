// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "sqss/sqss.hpp"

using namespace sqss;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

SessionConfig config(unsigned n, std::size_t L, std::uint64_t seed = 0) {
  SessionConfig c;
  c.n = n;
  c.L = L;
  c.seed = seed;
  return c;
}

double sigma(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

Outcome correctness() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t runs = 0, exact = 0;
  for (unsigned n = 1; n <= 5; ++n)
    for (std::size_t L = 1; L <= 16; ++L)
      for (std::uint64_t s = 0; s < 200; ++s) {
        const SessionConfig cfg = config(n, L, derive_seed(n * 1000 + L, s));
        const Secret secret = random_secret(cfg);
        const auto r = run_session(cfg, secret, NoAttack{});
        ++runs;
        exact += (!r.aborted && r.reconstructed && *r.reconstructed == secret) ? 1 : 0;
      }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {exact == runs && secs < 30.0,
          std::to_string(exact) + "/" + std::to_string(runs) + " exact in " + fmt(secs) + " s"};
}

Outcome exhaustive_algebra() {
  VerifyOptions opt;
  VerifyReport rep;
  verify_algebra(2, 1, opt, rep);
  return {!rep.failure && rep.algebra_cases == 8,
          std::to_string(rep.algebra_cases) + " branches, " + std::to_string(rep.bit_checks) + " bit checks" +
              (rep.failure ? ", " + rep.failure->describe() : "")};
}

Outcome ghz_orthonormality() {
  VerifyReport rep;
  verify_ghz_orthonormality(5, rep);
  return {rep.ghz_failure.empty() && rep.ghz_max_error < 1e-12,
          std::to_string(rep.ghz_pairs) + " pairs, max error " + fmt(rep.ghz_max_error)};
}

Outcome measure_resend() {
  const auto exact = enumerate_detection_exact(MeasureResend{});
  const auto x_reflect = enumerate_conditional_exact(MeasureResend{}, SingleState::plus, PartyOp::reflect);
  const auto e = estimate_detection(config(2, 4, 101), MeasureResend{}, 12500);
  const double p = 0.125;
  const bool mc_ok = e.decoys_checked >= 100000 && std::abs(e.per_decoy_rate - p) <= 3 * sigma(p, e.decoys_checked);
  const bool ok = exact.rational && *exact.rational == Rational(1, 8) && x_reflect.rational &&
                  *x_reflect.rational == Rational(1, 2) && mc_ok;
  return {ok, "exact " + (exact.rational ? to_string(*exact.rational) : fmt(exact.value)) + ", MC " +
                  fmt(e.per_decoy_rate) + " over " + std::to_string(e.decoys_checked) +
                  " decoys, X-reflect " + (x_reflect.rational ? to_string(*x_reflect.rational) : "?")};
}

Outcome intercept_resend() {
  const auto exact = enumerate_detection_exact(InterceptResend{});
  const auto e = estimate_detection(config(2, 4, 202), InterceptResend{}, 12500);
  const double p = 0.375;
  const bool mc_ok = e.decoys_checked >= 100000 && std::abs(e.per_decoy_rate - p) <= 3 * sigma(p, e.decoys_checked);
  // Eve's operation-bit guess at L = 32.
  const auto g = estimate_detection(config(1, 32, 203), InterceptResend{}, 1000);
  const double acc = g.eve_ops.accuracy();
  const bool ok = exact.rational && *exact.rational == Rational(3, 8) && mc_ok && std::abs(acc - 0.5) <= 0.02;
  return {ok, "exact " + (exact.rational ? to_string(*exact.rational) : fmt(exact.value)) + ", MC " +
                  fmt(e.per_decoy_rate) + " over " + std::to_string(e.decoys_checked) + " decoys, Eve accuracy " +
                  fmt(acc) + " over " + std::to_string(g.eve_ops.total()) + " bits"};
}

Outcome double_cnot() {
  const int trials = 10000;
  int minus = 0;
  for (int t = 0; t < trials; ++t) {
    StatePool pool;
    Rng dealer(derive_seed(61, t));
    DoubleCnotTap tap(derive_seed(62, t));
    tap.begin_channel(0, 2);
    const SlotId plus = prepare_single(pool, SingleState::plus);
    const SlotId zero = prepare_single(pool, SingleState::zero);
    tap.forward(0, 0, plus, pool);
    tap.forward(0, 1, zero, pool);
    // Reflected, returned in swapped positions.
    tap.backward(0, 0, zero, pool);
    tap.backward(0, 1, plus, pool);
    minus += static_cast<int>(pool.measure(plus, Basis::X, dealer));
  }
  const double freq = minus / static_cast<double>(trials);

  SessionHooks hooks;
  hooks.parties.assign(2, PartyOverrides{{}, PartyOp::reflect, true});
  std::size_t errors = 0, checked = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SessionConfig cfg = config(2, 4, seed);
    const auto r = run_session(cfg, random_secret(cfg), DoubleCnot{}, hooks);
    errors += r.total_decoy_errors();
    checked += r.decoys_checked;
  }
  return {std::abs(freq - 0.5) <= 0.02 && errors == 0,
          "swapped |+> reads |-> " + fmt(freq) + " over " + std::to_string(trials) + ", identity reflect-only " +
              std::to_string(errors) + "/" + std::to_string(checked) + " failures"};
}

Outcome entangle_measure() {
  const EntangleMeasure zero =
      make_entangle_measure(EmParams::from_alpha(1.0, {1, 1, 1, 1}, {0, 0, 0, 0}, ProbeMap::constant));
  std::size_t checked = 0, failures = 0;
  std::array<std::array<double, 4>, 2> hist{};
  for (std::uint64_t seed = 0; checked < 100000; ++seed) {
    const SessionConfig cfg = config(2, 4, seed);
    const auto r = run_session(cfg, random_secret(cfg), zero);
    checked += r.decoys_checked;
    failures += r.total_decoy_errors();
    if (r.aborted) continue;
    for (unsigned i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const std::size_t p = r.key_positions[i][j];
        const Bit transit = k_to_bits(r.secret.values[j], 2)[i] ^ r.m0[j];
        hist[transit][*r.eve.channels[i].probe[p]] += 1;
      }
  }
  double tvd = 0;
  const double n0 = hist[0][0] + hist[0][1] + hist[0][2] + hist[0][3];
  const double n1 = hist[1][0] + hist[1][1] + hist[1][2] + hist[1][3];
  for (std::size_t v = 0; v < 4; ++v) tvd += std::abs(hist[0][v] / n0 - hist[1][v] / n1);
  tvd /= 2;

  const double beta = 0.3;
  const EntangleMeasure rotated = make_entangle_measure(
      EmParams{std::sqrt(1 - beta * beta), beta, {1, 1, 1, 1}, {0, 0, 0, 0}, ProbeMap::constant});
  SessionConfig cfg = config(2, 4, 77);
  const auto e = estimate_detection(cfg, rotated, 2000);
  return {failures == 0 && tvd < 0.01 && e.ci95.low > 0.0,
          "zero point " + std::to_string(failures) + "/" + std::to_string(checked) + " failures, TVD " + fmt(tvd) +
              ", beta=0.3 rate " + fmt(e.per_decoy_rate) + " CI [" + fmt(e.ci95.low) + ", " + fmt(e.ci95.high) +
              "]"};
}

Outcome efficiency() {
  bool formulas = true;
  for (unsigned n = 1; n <= 8; ++n) {
    const std::int64_t nn = n;
    std::int64_t four_n = 1;
    for (unsigned k = 0; k < n; ++k) four_n *= 4;
    formulas = formulas && qubit_efficiency(ProtocolId::this_work, n).eta == Rational(1, 3 * nn + 1) &&
               qubit_efficiency(ProtocolId::ref34, n).eta == Rational(1, four_n) &&
               qubit_efficiency(ProtocolId::ref35, n).eta == Rational(1, 6 * nn + 4) &&
               qubit_efficiency(ProtocolId::ref36, n).eta == Rational(1, 5 * nn);
  }
  Rng rng(808);
  bool counted = true;
  for (int k = 0; k < 50; ++k) {
    const auto n = static_cast<unsigned>(1 + rng.below(8));
    const auto L = static_cast<std::size_t>(1 + rng.below(32));
    const auto d = derive_efficiency_this_work(n, L, rng.next());
    const std::int64_t nn = n, LL = static_cast<std::int64_t>(L);
    counted = counted && d.q == LL * (nn + 1) + 2 * LL * nn && d.c == LL;
  }
  std::string broken;
  for (unsigned n = 2; n <= 30; ++n) {
    const auto t = qubit_efficiency(ProtocolId::this_work, n).eta;
    const auto r36 = qubit_efficiency(ProtocolId::ref36, n).eta;
    const auto r35 = qubit_efficiency(ProtocolId::ref35, n).eta;
    const auto r34 = qubit_efficiency(ProtocolId::ref34, n).eta;
    if (!(t > r36 && r36 > r35 && r35 > r34)) {
      broken += (broken.empty() ? "" : ",") + std::to_string(n) + " (ref35 " + to_string(r35) + " vs ref34 " +
                to_string(r34) + ")";
    }
  }
  return {formulas && counted && broken.empty(),
          std::string("formulas ") + (formulas ? "exact" : "WRONG") + ", session counts " +
              (counted ? "match" : "MISMATCH") + ", strict ordering " +
              (broken.empty() ? "holds for n in [2,30]" : "fails at n=" + broken)};
}

Outcome collusion() {
  std::size_t correct = 0, total = 0, honest_exact = 0;
  const std::size_t trials = 10000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const SessionConfig cfg = config(3, 1, seed);
    const auto r = run_session(cfg, random_secret(cfg), Collusion{{0, 1}});
    correct += r.collusion->tuples_correct;
    total += r.collusion->guess.values.size();
    honest_exact += r.succeeded() ? 1 : 0;
  }
  const double acc = correct / static_cast<double>(total);
  return {std::abs(acc - 0.5) <= 0.02 && honest_exact == trials,
          "2 of 3 colluders guess " + fmt(acc) + ", all-share reconstruction " + std::to_string(honest_exact) + "/" +
              std::to_string(trials)};
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured capture(const std::string& args) {
  Captured c;
  FILE* pipe = popen((std::string(SQSS_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sqss_acceptance";
  fs::create_directories(dir);
  const std::vector<std::string> commands{
      "run --n 3 --L 8 --seed 42 --attack intercept-resend --abort-threshold 1 --jobs 1",
      "run --n 2 --L 4 --seed 9 --attack em --alpha 0.9 --jobs 1",
      "sweep --n 1..3 --L 2,4 --trials 200 --seed 7 --jobs 1",
      "sweep --attacks collusion --colluders 1 --n 2 --L 3 --trials 100 --seed 3 --format json --jobs 1",
      "verify --jobs 1",
      "efficiency --n 1..8 --jobs 1",
  };
  std::size_t same = 0;
  std::string first_diff;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::string outputs[2];
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path out = dir / ("out" + std::to_string(pass));
      const fs::path tr = dir / ("tr" + std::to_string(pass));
      fs::remove(out);
      fs::remove(tr);
      std::string args = commands[k] + " --output " + out.string();
      if (commands[k].rfind("run", 0) == 0) args += " --transcript " + tr.string();
      const auto c = capture(args);
      outputs[pass] = std::to_string(c.code) + "\n" + c.out + "\n--\n" + slurp(out) + "\n--\n" + slurp(tr);
    }
    if (outputs[0] == outputs[1]) {
      ++same;
    } else if (first_diff.empty()) {
      first_diff = commands[k];
    }
  }
  return {same == commands.size(), std::to_string(same) + "/" + std::to_string(commands.size()) +
                                       " commands byte-identical" +
                                       (first_diff.empty() ? "" : ", differs: " + first_diff)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"correctness", correctness},
      {"exhaustive algebra", exhaustive_algebra},
      {"GHZ orthonormality", ghz_orthonormality},
      {"measure-resend detection", measure_resend},
      {"intercept-resend detection", intercept_resend},
      {"double-CNOT", double_cnot},
      {"entangle-measure zero point", entangle_measure},
      {"efficiency", efficiency},
      {"collusion", collusion},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
