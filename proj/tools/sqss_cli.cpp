// sqss: run, sweep, verify and efficiency front end.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sqss/sqss.hpp"

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kAborted = 3, kIo = 4 };

struct Options {
  std::string n = "2";
  std::string L = "4";
  std::uint64_t seed = 0;
  std::optional<std::size_t> decoys;
  double abort_threshold = 0.0;
  sqss::io::AttackSpec attack;
  std::string secret;
  bool random_secret = false;
  std::string transcript;
  std::string output;
  std::string format = "csv";
  std::size_t trials = 1000;
  std::string attacks = "intercept-resend,measure-resend,double-cnot,em";
  unsigned jobs = 1;
  unsigned n_max = 3;
  std::size_t L_max = 2;
  bool inject_fault = false;
};

unsigned single_n(const std::string& s) {
  const auto v = sqss::io::parse_range(s);
  if (v.size() != 1) throw sqss::UsageError("--n must be a single value here");
  if (v[0] < 1 || v[0] > 20) throw sqss::UsageError("--n must be in [1, 20]");
  return static_cast<unsigned>(v[0]);
}

std::size_t single_L(const std::string& s) {
  const auto v = sqss::io::parse_range(s);
  if (v.size() != 1) throw sqss::UsageError("--L must be a single value here");
  if (v[0] < 1) throw sqss::UsageError("--L must be >= 1");
  return static_cast<std::size_t>(v[0]);
}

sqss::SessionConfig make_config(const Options& o, unsigned n, std::size_t L) {
  sqss::SessionConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.seed = o.seed;
  cfg.decoys_per_party = o.decoys;
  cfg.abort_threshold = o.abort_threshold;
  cfg.validate();
  return cfg;
}

// Comma list of decimal or 0x-prefixed hex values.
sqss::Secret parse_secret(const std::string& text, unsigned n) {
  sqss::Secret s{n, {}};
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::string t(sqss::io::trim(tok));
    if (t.empty()) throw sqss::UsageError("empty value in --secret");
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(t, &used, 0);
    } catch (const std::exception&) {
      throw sqss::UsageError("bad --secret value '" + t + "'");
    }
    if (used != t.size() || t[0] == '-') throw sqss::UsageError("bad --secret value '" + t + "'");
    s.values.push_back(v);
  }
  s.validate();
  return s;
}

std::string join_values(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

int cmd_run(const Options& o) {
  const unsigned n = single_n(o.n);
  const std::size_t L = single_L(o.L);
  const sqss::SessionConfig cfg = make_config(o, n, L);
  const sqss::AttackModel attack = sqss::io::build_attack(o.attack, n);

  sqss::Secret secret;
  if (!o.secret.empty()) {
    if (o.random_secret) throw sqss::UsageError("--secret and --random-secret are exclusive");
    secret = parse_secret(o.secret, n);
    if (secret.length() != L)
      throw sqss::UsageError("--secret needs exactly L=" + std::to_string(L) + " values");
  } else {
    secret = sqss::random_secret(cfg);
  }

  const sqss::SessionResult r = sqss::run_session(cfg, secret, attack);

  std::cout << "attack: " << sqss::attack_name(attack) << "\n"
            << "n: " << n << "  L: " << L << "  seed: " << cfg.seed << "\n"
            << "secret: " << join_values(secret.values) << "\n"
            << "decoys checked: " << r.decoys_checked << "  errors: " << r.total_decoy_errors()
            << "\n";
  if (r.aborted) {
    std::cout << "status: aborted (" << r.abort_reason << ")\n";
  } else {
    std::cout << "reconstructed: " << join_values(r.reconstructed->values) << "\n"
              << "status: " << (r.succeeded() ? "ok" : "mismatch") << "\n";
  }
  if (r.collusion) {
    std::cout << "collusion tuple accuracy: " << sqss::format_double(r.collusion->tuple_accuracy())
              << "\n";
  }

  if (!o.transcript.empty()) sqss::write_text_file(o.transcript, r.transcript.to_jsonl());
  if (!o.output.empty()) {
    const auto fmt = sqss::parse_report_format(o.format);
    const std::string rec = r.reconstructed ? join_values(r.reconstructed->values) : "";
    std::string body;
    if (fmt == sqss::ReportFormat::csv) {
      body = "attack,n,L,seed,aborted,decoys_checked,decoy_errors,secret,reconstructed\n" +
             sqss::attack_name(attack) + ',' + std::to_string(n) + ',' + std::to_string(L) + ',' +
             std::to_string(cfg.seed) + ',' + (r.aborted ? "1" : "0") + ',' +
             std::to_string(r.decoys_checked) + ',' + std::to_string(r.total_decoy_errors()) +
             ",\"" + join_values(secret.values) + "\",\"" + rec + "\"\n";
    } else {
      nlohmann::ordered_json j{{"attack", sqss::attack_name(attack)},
                               {"n", n},
                               {"L", L},
                               {"seed", cfg.seed},
                               {"aborted", r.aborted},
                               {"decoys_checked", r.decoys_checked},
                               {"decoy_errors", r.total_decoy_errors()},
                               {"secret", secret.values},
                               {"reconstructed", r.reconstructed ? nlohmann::ordered_json(r.reconstructed->values)
                                                                 : nlohmann::ordered_json(nullptr)}};
      body = j.dump(2) + "\n";
    }
    sqss::write_text_file(o.output, body);
  }
  if (r.aborted) return kAborted;
  return r.succeeded() ? kOk : kVerifyFailed;
}

int cmd_sweep(const Options& o) {
  const auto ns = sqss::io::parse_range(o.n);
  const auto Ls = sqss::io::parse_range(o.L);
  const auto fmt = sqss::parse_report_format(o.format);
  if (o.trials < 1) throw sqss::UsageError("--trials must be >= 1");
  std::vector<std::string> names;
  {
    std::stringstream ss(o.attacks);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::string t(sqss::io::trim(tok));
      if (!t.empty()) names.push_back(t);
    }
  }
  // Validate everything before spending time on sessions.
  std::vector<sqss::DetectionRow> rows;
  std::vector<std::tuple<sqss::AttackModel, sqss::SessionConfig>> plan;
  for (const auto& name : names) {
    for (auto n : ns) {
      if (n < 1 || n > 20) throw sqss::UsageError("--n must be in [1, 20]");
      for (auto L : Ls) {
        if (L < 1) throw sqss::UsageError("--L must be >= 1");
        sqss::io::AttackSpec spec = o.attack;
        spec.name = name;
        plan.emplace_back(sqss::io::build_attack(spec, static_cast<unsigned>(n)),
                          make_config(o, static_cast<unsigned>(n), static_cast<std::size_t>(L)));
      }
    }
  }
  std::cout << "attack n L trials per_decoy_rate abort_rate ci95\n";
  for (const auto& [attack, cfg] : plan) {
    const auto e = sqss::estimate_detection(cfg, attack, o.trials, o.jobs);
    rows.push_back(sqss::DetectionRow::from(e));
    std::cout << e.attack << ' ' << e.n << ' ' << e.L << ' ' << e.trials << ' '
              << sqss::format_double(e.per_decoy_rate) << ' '
              << sqss::format_double(e.session_abort_rate) << " ["
              << sqss::format_double(e.ci95.low) << ", " << sqss::format_double(e.ci95.high)
              << "]\n";
  }
  if (!o.output.empty()) sqss::write_text_file(o.output, sqss::emit_detection_report(rows, fmt));
  return kOk;
}

int cmd_verify(const Options& o) {
  sqss::VerifyOptions vo;
  vo.n_max = o.n_max;
  vo.L_max = o.L_max;
  vo.seed = o.seed;
  vo.inject_fault = o.inject_fault;
  const sqss::VerifyReport rep = sqss::run_verify(vo);
  std::cout << "algebra cases: " << rep.algebra_cases << "  bit checks: " << rep.bit_checks << "\n"
            << "ghz pairs: " << rep.ghz_pairs
            << "  max error: " << sqss::format_double(rep.ghz_max_error) << "\n";
  if (rep.failure) std::cout << rep.failure->describe() << "\n";
  if (!rep.ghz_failure.empty()) std::cout << rep.ghz_failure << "\n";
  std::cout << (rep.ok() ? "verify: PASS" : "verify: FAIL") << "\n";
  return rep.ok() ? kOk : kVerifyFailed;
}

int cmd_efficiency(const Options& o) {
  const auto fmt = sqss::parse_report_format(o.format);
  std::vector<sqss::EfficiencyEntry> rows;
  for (auto n : sqss::io::parse_range(o.n)) {
    if (n < 1 || n > 30) throw sqss::UsageError("--n must be in [1, 30] for efficiency");
    for (auto id : sqss::kAllProtocols) rows.push_back(sqss::qubit_efficiency(id, static_cast<unsigned>(n)));
  }
  std::cout << "protocol n eta\n";
  for (const auto& e : rows)
    std::cout << sqss::to_string(e.protocol) << ' ' << e.n << ' ' << sqss::to_string(e.eta) << "\n";
  if (!o.output.empty()) sqss::write_text_file(o.output, sqss::emit_efficiency_report(rows, fmt));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-quantum secret sharing simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file (flags override it)");

  Options o;
  app.add_option("--n", o.n, "Party count; sweep and efficiency accept ranges like 1..5")
      ->capture_default_str();
  app.add_option("--L", o.L, "Secret length; sweep accepts ranges")->capture_default_str();
  app.add_option("--seed", o.seed, "Session seed")->capture_default_str();
  app.add_option("--decoys", o.decoys, "Decoys per party (default L)");
  app.add_option("--abort-threshold", o.abort_threshold, "Abort when a party's error fraction exceeds this")
      ->capture_default_str();
  app.add_option("--attack", o.attack.name,
                 "none|intercept-resend|measure-resend|double-cnot|em|collusion")
      ->capture_default_str();
  app.add_option("--alpha", o.attack.alpha, "em: alpha of U_E")->capture_default_str();
  app.add_option("--mu", o.attack.mu, "em: mu_0..mu_3")->capture_default_str();
  app.add_option("--nu", o.attack.nu, "em: nu_0..nu_3")->capture_default_str();
  app.add_option("--probe-map", o.attack.probe_map, "em: distinct|constant")->capture_default_str();
  app.add_option("--em-ue", o.attack.ue_path, "em: U_E matrix file (re,im tokens, row-major)");
  app.add_option("--em-uf", o.attack.uf_path, "em: U_F matrix file");
  app.add_option("--colluders", o.attack.colluders, "collusion: 1-based dishonest parties, e.g. 1,2");
  app.add_option("--secret", o.secret, "run: comma-separated values, decimal or 0x hex");
  app.add_flag("--random-secret", o.random_secret, "run: secret drawn from the seed (default)");
  app.add_option("--transcript", o.transcript, "run: write the JSONL transcript here");
  app.add_option("--output", o.output, "Write the machine-readable report here");
  app.add_option("--format", o.format, "csv|json")->capture_default_str();
  app.add_option("--trials", o.trials, "sweep: sessions per grid point")->capture_default_str();
  app.add_option("--attacks", o.attacks, "sweep: comma-separated attack list (may be empty)")
      ->capture_default_str();
  app.add_option("--jobs", o.jobs, "sweep: worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--n-max", o.n_max, "verify: largest n")->capture_default_str();
  app.add_option("--L-max", o.L_max, "verify: largest L")->capture_default_str();
  app.add_flag("--inject-fault", o.inject_fault, "verify: flip one published bit");

  auto* run = app.add_subcommand("run", "Run one session and report the outcome");
  auto* sweep = app.add_subcommand("sweep", "Estimate detection rates over attacks and (n, L)");
  auto* verify = app.add_subcommand("verify", "Exhaustive forced-outcome correctness check");
  auto* eff = app.add_subcommand("efficiency", "Qubit efficiency table");
  for (auto* sc : {run, sweep, verify, eff}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return kIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    return cmd_efficiency(o);
  } catch (const sqss::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const sqss::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sqss::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sqss::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
