#pragma once

#include <array>
#include <string>
#include <vector>

#include "sqss/adversary/attack_model.hpp"
#include "sqss/io/config.hpp"

namespace sqss::io {

inline constexpr std::array<std::string_view, 6> kAttackNames{
    "none", "intercept-resend", "measure-resend", "double-cnot", "em", "collusion"};

// Attack as written on the command line or in a config file.
struct AttackSpec {
  std::string name = "none";
  double alpha = 1.0;
  std::string mu = "1,1,1,1";
  std::string nu = "0,0,0,0";
  std::string probe_map = "distinct";
  std::string ue_path;  // both paths set = explicit matrices
  std::string uf_path;
  std::string colluders;  // 1-based party list
};

inline ProbeMap parse_probe_map(std::string_view s) {
  if (s == "distinct") return ProbeMap::distinct;
  if (s == "constant") return ProbeMap::constant;
  throw UsageError("unknown probe map '" + std::string(s) + "'");
}

inline std::array<double, 4> parse_four(std::string_view s, const char* what) {
  const auto v = parse_list<double>(s);
  if (v.size() != 4) throw UsageError(std::string(what) + " needs 4 comma-separated values");
  return {v[0], v[1], v[2], v[3]};
}

inline AttackModel build_attack(const AttackSpec& spec, unsigned n) {
  const std::string& a = spec.name;
  AttackModel model;
  if (a == "none") {
    model = NoAttack{};
  } else if (a == "intercept-resend") {
    model = InterceptResend{};
  } else if (a == "measure-resend") {
    model = MeasureResend{};
  } else if (a == "double-cnot") {
    model = DoubleCnot{};
  } else if (a == "em") {
    if (spec.ue_path.empty() != spec.uf_path.empty())
      throw UsageError("em: give both --em-ue and --em-uf, or neither");
    if (!spec.ue_path.empty()) {
      model = make_entangle_measure(load_matrix_file(spec.ue_path), load_matrix_file(spec.uf_path));
    } else {
      model = make_entangle_measure(EmParams::from_alpha(spec.alpha, parse_four(spec.mu, "--mu"),
                                                         parse_four(spec.nu, "--nu"),
                                                         parse_probe_map(spec.probe_map)));
    }
  } else if (a == "collusion") {
    Collusion c;
    for (auto p : parse_list<std::size_t>(spec.colluders)) {
      if (p < 1) throw UsageError("colluder indices are 1-based");
      c.dishonest.push_back(p - 1);
    }
    if (c.dishonest.empty()) throw UsageError("collusion needs --colluders");
    model = std::move(c);
  } else {
    throw UsageError("unknown attack '" + a + "'");
  }
  validate_attack(model, n);
  return model;
}

}  // namespace sqss::io
