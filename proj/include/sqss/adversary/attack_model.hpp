#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqss/core/errors.hpp"
#include "sqss/core/matrix.hpp"

namespace sqss {

// How the probe kets e_w of U_E are realized as probe levels.
//   distinct: e_w = |w>, so the probe records the target bit.
//   constant: e_0 = e_1 = e_3 = |0>, e_2 = -|0>, so U_E is a rotation of the
//             target alone and the probe never correlates with it.
enum class ProbeMap : std::uint8_t { distinct, constant };

// Coefficients of the entangle-measure pair (U_E, U_F):
//   U_E|0,0> = a|0,e0> + b|1,e1>,   U_E|1,0> = b|0,e2> + a|1,e3>
//   U_F|0,ew> = mu_w|0,.> + nu_w|1,.>,  U_F|1,ew> = nu_w|0,.> + mu_w|1,.>
struct EmParams {
  double alpha = 1.0;
  double beta = 0.0;
  std::array<double, 4> mu{1.0, 1.0, 1.0, 1.0};
  std::array<double, 4> nu{0.0, 0.0, 0.0, 0.0};
  ProbeMap probe_map = ProbeMap::distinct;

  static EmParams from_alpha(double alpha, std::array<double, 4> mu, std::array<double, 4> nu,
                             ProbeMap map = ProbeMap::distinct) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("EmParams: alpha must be in [0,1]");
    return EmParams{alpha, std::sqrt(std::max(0.0, 1.0 - alpha * alpha)), mu, nu, map};
  }

  void validate() const {
    auto bad = [](double x, double y) { return std::abs(x * x + y * y - 1.0) > kNormTolerance; };
    if (bad(alpha, beta)) throw ValidationError("EmParams: alpha^2 + beta^2 != 1");
    for (std::size_t w = 0; w < 4; ++w) {
      if (bad(mu[w], nu[w])) {
        throw ValidationError("EmParams: mu_" + std::to_string(w) + "^2 + nu_" +
                              std::to_string(w) + "^2 != 1");
      }
    }
  }
};

struct EmUnitaries {
  Matrix ue;
  Matrix uf;
  std::size_t probe_dim = 4;
};

namespace detail {

// Fills the zero columns of `m` (those not listed in `fixed`) with an
// orthonormal completion drawn from the standard basis.
inline void complete_unitary(Matrix& m, const std::vector<std::size_t>& fixed) {
  const std::size_t n = m.dim();
  std::vector<std::vector<Amplitude>> basis;
  for (std::size_t c : fixed) {
    std::vector<Amplitude> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = m(r, c);
    basis.push_back(std::move(col));
  }
  std::size_t candidate = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(fixed.begin(), fixed.end(), c) != fixed.end()) continue;
    for (;; ++candidate) {
      if (candidate >= n) throw ValidationError("complete_unitary: fixed columns not orthonormal");
      std::vector<Amplitude> v(n);
      v[candidate] = 1.0;
      for (const auto& b : basis) {
        Amplitude proj{};
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(b[r]) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * b[r];
      }
      double norm = 0.0;
      for (const auto& x : v) norm += std::norm(x);
      norm = std::sqrt(norm);
      if (norm < 1e-6) continue;
      for (auto& x : v) x /= norm;
      for (std::size_t r = 0; r < n; ++r) m(r, c) = v[r];
      basis.push_back(std::move(v));
      ++candidate;
      break;
    }
  }
}

}  // namespace detail

// Builds (U_E, U_F) on target qubit (first, most significant) x d-level probe.
// U_F keeps the probe level w and rotates the target by (mu_w, nu_w); the
// ket e^0_{1,w} carries a -1 phase so the map is unitary for every (mu, nu).
inline EmUnitaries build_em_family(const EmParams& p, std::size_t d = 4) {
  p.validate();
  if (d < 4) throw ValidationError("build_em_family: probe dimension must be >= 4");
  const std::size_t dim = 2 * d;
  auto idx = [d](std::size_t bit, std::size_t level) { return bit * d + level; };

  Matrix ue(dim);
  if (p.probe_map == ProbeMap::distinct) {
    ue(idx(0, 0), idx(0, 0)) = p.alpha;
    ue(idx(1, 1), idx(0, 0)) = p.beta;
    ue(idx(0, 2), idx(1, 0)) = p.beta;
    ue(idx(1, 3), idx(1, 0)) = p.alpha;
  } else {
    ue(idx(0, 0), idx(0, 0)) = p.alpha;
    ue(idx(1, 0), idx(0, 0)) = p.beta;
    ue(idx(0, 0), idx(1, 0)) = -p.beta;
    ue(idx(1, 0), idx(1, 0)) = p.alpha;
  }
  detail::complete_unitary(ue, {idx(0, 0), idx(1, 0)});

  Matrix uf(dim);
  for (std::size_t w = 0; w < d; ++w) {
    const double mu = w < 4 ? p.mu[w] : 1.0;
    const double nu = w < 4 ? p.nu[w] : 0.0;
    uf(idx(0, w), idx(0, w)) = mu;
    uf(idx(1, w), idx(0, w)) = nu;
    uf(idx(0, w), idx(1, w)) = -nu;
    uf(idx(1, w), idx(1, w)) = mu;
  }

  if (!ue.is_unitary(1e-12) || !uf.is_unitary(1e-12))
    throw ValidationError("build_em_family: construction is not unitary");
  return {std::move(ue), std::move(uf), d};
}

struct NoAttack {};
struct InterceptResend {};
struct MeasureResend {};
struct DoubleCnot {};
struct EntangleMeasure {
  EmUnitaries unitaries;
  std::optional<EmParams> params;  // set when built from the canonical family
};
struct Collusion {
  std::vector<std::size_t> dishonest;  // 0-based party indices
};

using AttackModel =
    std::variant<NoAttack, InterceptResend, MeasureResend, DoubleCnot, EntangleMeasure, Collusion>;

inline std::string attack_name(const AttackModel& a) {
  struct Visitor {
    std::string operator()(const NoAttack&) const { return "none"; }
    std::string operator()(const InterceptResend&) const { return "intercept-resend"; }
    std::string operator()(const MeasureResend&) const { return "measure-resend"; }
    std::string operator()(const DoubleCnot&) const { return "double-cnot"; }
    std::string operator()(const EntangleMeasure&) const { return "em"; }
    std::string operator()(const Collusion&) const { return "collusion"; }
  };
  return std::visit(Visitor{}, a);
}

inline EntangleMeasure make_entangle_measure(const EmParams& p, std::size_t d = 4) {
  return EntangleMeasure{build_em_family(p, d), p};
}

inline EntangleMeasure make_entangle_measure(Matrix ue, Matrix uf) {
  if (ue.dim() != uf.dim() || ue.dim() < 4 || ue.dim() % 2 != 0)
    throw ValidationError("entangle-measure: U_E and U_F must both be 2d x 2d, d >= 2");
  if (!ue.is_unitary() || !uf.is_unitary())
    throw ValidationError("entangle-measure: U_E and U_F must be unitary");
  const std::size_t d = ue.dim() / 2;
  return EntangleMeasure{EmUnitaries{std::move(ue), std::move(uf), d}, std::nullopt};
}

inline void validate_attack(const AttackModel& a, unsigned n) {
  if (const auto* c = std::get_if<Collusion>(&a)) {
    if (c->dishonest.size() >= n) throw UsageError("collusion: dishonest set must be a strict subset");
    for (std::size_t i = 0; i < c->dishonest.size(); ++i) {
      if (c->dishonest[i] >= n) throw UsageError("collusion: party index out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (c->dishonest[i] == c->dishonest[j]) throw UsageError("collusion: repeated party");
    }
  }
  if (const auto* em = std::get_if<EntangleMeasure>(&a)) {
    if (!em->unitaries.ue.is_unitary() || !em->unitaries.uf.is_unitary())
      throw ValidationError("entangle-measure: U_E and U_F must be unitary");
  }
}

}  // namespace sqss
