#pragma once

#include <complex>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sqss/adversary/attack_model.hpp"
#include "sqss/analysis/exact.hpp"
#include "sqss/core/ghz.hpp"
#include "sqss/protocol/dealer.hpp"

namespace sqss {

// Party reorder used by the enumeration: averaged over both orders of the
// two-qubit sequence, or pinned.
enum class Alignment : std::uint8_t { random, identity, swapped };

namespace enumeration {

template <typename S>
struct ScalarOps;

template <>
struct ScalarOps<QSqrt2> {
  using Weight = QSqrt2;
  static QSqrt2 abs2(const QSqrt2& x) { return x * x; }
  static QSqrt2 inv_sqrt2() { return QSqrt2::inv_sqrt2(); }
  static bool is_zero(const QSqrt2& x) { return x.is_zero(); }
  static QSqrt2 weight(std::int64_t num, std::int64_t den) { return Rational(num, den); }
  static QSqrt2 scalar(std::int64_t v) { return Rational(v); }
};

template <>
struct ScalarOps<std::complex<double>> {
  using Weight = double;
  static double abs2(const std::complex<double>& x) { return std::norm(x); }
  static std::complex<double> inv_sqrt2() { return kInvSqrt2; }
  static bool is_zero(double x) { return x == 0.0; }
  static double weight(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static std::complex<double> scalar(std::int64_t v) { return static_cast<double>(v); }
};

// Unnormalized global statevector over an append-only list of slots; the
// most recently added slot is the least significant digit. Projections are
// never renormalized, so the squared norm of a branch is its Born weight.
template <typename S>
class BranchState {
 public:
  using Ops = ScalarOps<S>;
  using Weight = typename Ops::Weight;

  BranchState() : amps_{Ops::scalar(1)} {}

  std::size_t add(std::vector<S> slot_amps) {
    const std::size_t d = slot_amps.size();
    std::vector<S> next(amps_.size() * d);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      for (std::size_t l = 0; l < d; ++l) next[i * d + l] = amps_[i] * slot_amps[l];
    amps_ = std::move(next);
    dims_.push_back(d);
    return dims_.size() - 1;
  }

  std::size_t add_basis(std::size_t dim, std::size_t level) {
    std::vector<S> a(dim, Ops::scalar(0));
    a[level] = Ops::scalar(1);
    return add(std::move(a));
  }

  std::size_t add_single(SingleState s) {
    const S h = Ops::inv_sqrt2();
    switch (s) {
      case SingleState::zero: return add_basis(2, 0);
      case SingleState::one: return add_basis(2, 1);
      case SingleState::plus: return add({h, h});
      case SingleState::minus: return add({h, Ops::scalar(0) - h});
    }
    return 0;
  }

  // (|00> + |11>)/sqrt(2) on two new slots.
  std::pair<std::size_t, std::size_t> add_bell() {
    const std::size_t a = add_basis(2, 0);
    const std::size_t b = add_basis(2, 0);
    hadamard(a);
    cnot(a, b);
    return {a, b};
  }

  void project(std::size_t slot, std::size_t level) {
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (digit(i, slot) != level) amps_[i] = Ops::scalar(0);
  }

  Weight prob(std::size_t slot, std::size_t level) const {
    Weight w = Ops::weight(0, 1);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (digit(i, slot) == level) w += Ops::abs2(amps_[i]);
    return w;
  }

  Weight norm2() const {
    Weight w = Ops::weight(0, 1);
    for (const auto& a : amps_) w += Ops::abs2(a);
    return w;
  }

  void cnot(std::size_t control, std::size_t target) {
    const std::size_t ts = stride(target);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (digit(i, control) == 1 && digit(i, target) == 0) std::swap(amps_[i], amps_[i + ts]);
  }

  void hadamard(std::size_t q) {
    const std::size_t qs = stride(q);
    const S h = Ops::inv_sqrt2();
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (digit(i, q) != 0) continue;
      const S a0 = amps_[i];
      const S a1 = amps_[i + qs];
      amps_[i] = h * (a0 + a1);
      amps_[i + qs] = h * (a0 - a1);
    }
  }

  // Dense unitary on (first, second) slots; complex scalars only.
  void apply(std::size_t first, std::size_t second, const Matrix& m) {
    const std::size_t d1 = dims_[first];
    const std::size_t d2 = dims_[second];
    const std::size_t s1 = stride(first);
    const std::size_t s2 = stride(second);
    std::vector<S> in(d1 * d2), out(d1 * d2);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (digit(i, first) != 0 || digit(i, second) != 0) continue;
      for (std::size_t x = 0; x < d1; ++x)
        for (std::size_t y = 0; y < d2; ++y) in[x * d2 + y] = amps_[i + x * s1 + y * s2];
      for (std::size_t r = 0; r < d1 * d2; ++r) {
        S acc{};
        for (std::size_t c = 0; c < d1 * d2; ++c) acc += m(r, c) * in[c];
        out[r] = acc;
      }
      for (std::size_t x = 0; x < d1; ++x)
        for (std::size_t y = 0; y < d2; ++y) amps_[i + x * s1 + y * s2] = out[x * d2 + y];
    }
  }

 private:
  std::size_t stride(std::size_t slot) const {
    std::size_t s = 1;
    for (std::size_t k = slot + 1; k < dims_.size(); ++k) s *= dims_[k];
    return s;
  }
  std::size_t digit(std::size_t index, std::size_t slot) const {
    return (index / stride(slot)) % dims_[slot];
  }

  std::vector<S> amps_;
  std::vector<std::size_t> dims_;
};

// Depth-first enumeration of a choice tree by replay: each run consumes a
// prefix of recorded choices and extends it with zeros.
class ChoiceOdometer {
 public:
  unsigned pick(unsigned options) {
    if (depth_ < path_.size()) return path_[depth_++].first;
    path_.emplace_back(0, options);
    ++depth_;
    return 0;
  }

  bool advance() {
    path_.resize(depth_);
    depth_ = 0;
    while (!path_.empty() && path_.back().first + 1 == path_.back().second) path_.pop_back();
    if (path_.empty()) return false;
    ++path_.back().first;
    return true;
  }

 private:
  std::vector<std::pair<unsigned, unsigned>> path_;
  std::size_t depth_ = 0;
};

enum class Kind : std::uint8_t { none, intercept, measure, double_cnot, entangle };

// Restricts the enumeration to one decoy state and one party operation.
struct DecoyFilter {
  std::optional<SingleState> state;
  std::optional<PartyOp> op;
};

// One replay of a single-party, single-tuple session (sequence = one GHZ
// qubit + one decoy). Returns (classical weight) x (Born mass of the
// decoy-check failure) for the branch selected by `ch`.
template <typename S>
typename ScalarOps<S>::Weight run_branch(ChoiceOdometer& ch, Kind kind, Alignment align,
                                         const EmUnitaries* em, const DecoyFilter& filter) {
  using Ops = ScalarOps<S>;
  using Weight = typename Ops::Weight;
  constexpr bool kComplex = std::is_same_v<S, std::complex<double>>;
  BranchState<S> st;
  Weight w = Ops::weight(1, 1);
  const Weight zero = Ops::weight(0, 1);

  const auto [g0, g1] = st.add_bell();
  (void)g0;
  const unsigned decoy_pos = ch.pick(2);
  w = w * Ops::weight(1, 2);
  const auto decoy_state = static_cast<SingleState>(ch.pick(4));
  w = w * Ops::weight(1, 4);
  if (filter.state && *filter.state != decoy_state) return zero;
  const std::size_t decoy = st.add_single(decoy_state);

  std::size_t seq[2];
  seq[decoy_pos] = decoy;
  seq[1 - decoy_pos] = g1;
  std::size_t probe[2] = {0, 0};
  const std::size_t probe_dim = em ? em->probe_dim : 2;

  // Dealer -> party.
  for (unsigned p = 0; p < 2; ++p) {
    switch (kind) {
      case Kind::none: break;
      case Kind::intercept:
        seq[p] = st.add_basis(2, ch.pick(2));
        w = w * Ops::weight(1, 2);
        break;
      case Kind::measure:
        st.project(seq[p], ch.pick(2));
        break;
      case Kind::double_cnot:
        probe[p] = st.add_basis(2, 0);
        st.cnot(seq[p], probe[p]);
        break;
      case Kind::entangle:
        if constexpr (kComplex) {
          probe[p] = st.add_basis(probe_dim, 0);
          st.apply(seq[p], probe[p], em->ue);
        }
        break;
    }
  }
  if (Ops::is_zero(st.norm2())) return zero;

  // Party operations.
  PartyOp ops[2];
  std::optional<Bit> outcome[2];
  for (unsigned p = 0; p < 2; ++p) {
    ops[p] = ch.pick(2) ? PartyOp::measure_flip : PartyOp::reflect;
    w = w * Ops::weight(1, 2);
    if (ops[p] == PartyOp::measure_flip) {
      const unsigned b = ch.pick(2);
      st.project(seq[p], b);
      if (Ops::is_zero(st.norm2())) return zero;
      outcome[p] = static_cast<Bit>(b);
      seq[p] = st.add_basis(2, b ^ 1U);
    }
  }
  if (filter.op && *filter.op != ops[decoy_pos]) return zero;

  bool swapped = false;
  if (align == Alignment::random) {
    swapped = ch.pick(2) == 1;
    w = w * Ops::weight(1, 2);
  } else {
    swapped = align == Alignment::swapped;
  }
  const std::size_t back[2] = {swapped ? seq[1] : seq[0], swapped ? seq[0] : seq[1]};

  // Party -> dealer, positional pairing with the forward probes.
  for (unsigned q = 0; q < 2; ++q) {
    switch (kind) {
      case Kind::none: break;
      case Kind::intercept:
      case Kind::measure:
        st.project(back[q], ch.pick(2));
        break;
      case Kind::double_cnot:
        st.cnot(back[q], probe[q]);
        st.project(probe[q], ch.pick(2));
        break;
      case Kind::entangle:
        if constexpr (kComplex) {
          st.apply(back[q], probe[q], em->uf);
          st.project(probe[q], ch.pick(static_cast<unsigned>(probe_dim)));
        }
        break;
    }
    if (Ops::is_zero(st.norm2())) return zero;
  }

  const DecoyCheck check = decoy_expectation(decoy_state, ops[decoy_pos], outcome[decoy_pos]);
  const std::size_t returned = seq[decoy_pos];
  if (check.dealer_basis == Basis::X) st.hadamard(returned);
  Weight fail = zero;
  for (unsigned v = 0; v < 2; ++v)
    if (!check.passes(v)) fail = fail + st.prob(returned, v);
  return w * fail;
}

template <typename S>
typename ScalarOps<S>::Weight enumerate(Kind kind, Alignment align, const EmUnitaries* em,
                                        const DecoyFilter& filter = {}) {
  using Ops = ScalarOps<S>;
  typename Ops::Weight total = Ops::weight(0, 1);
  ChoiceOdometer ch;
  do {
    total = total + run_branch<S>(ch, kind, align, em, filter);
  } while (ch.advance());
  // Undo the prior weight of the filtered choices.
  const std::int64_t prior = (filter.state ? 4 : 1) * (filter.op ? 2 : 1);
  return total * Ops::weight(prior, 1);
}

}  // namespace enumeration

struct ExactRate {
  std::optional<Rational> rational;  // set for attacks with dyadic branch weights
  double value = 0.0;
};

// Per-decoy detection probability of an n=1, L=1 session, summed over decoy
// position and state, party operations, reorder, adversary randomness and
// every measurement branch.
inline ExactRate enumerate_detection_exact(const AttackModel& attack,
                                           Alignment align = Alignment::random,
                                           const enumeration::DecoyFilter& filter = {}) {
  using enumeration::Kind;
  Kind kind;
  const EmUnitaries* em = nullptr;
  if (std::holds_alternative<NoAttack>(attack)) {
    kind = Kind::none;
  } else if (std::holds_alternative<InterceptResend>(attack)) {
    kind = Kind::intercept;
  } else if (std::holds_alternative<MeasureResend>(attack)) {
    kind = Kind::measure;
  } else if (std::holds_alternative<DoubleCnot>(attack)) {
    kind = Kind::double_cnot;
  } else if (const auto* e = std::get_if<EntangleMeasure>(&attack)) {
    kind = Kind::entangle;
    em = &e->unitaries;
  } else {
    throw UsageError("enumerate_detection_exact: unsupported attack '" + attack_name(attack) + "'");
  }

  if (kind == Kind::entangle) {
    const double v = enumeration::enumerate<std::complex<double>>(kind, align, em, filter);
    return {std::nullopt, v};
  }
  const QSqrt2 v = enumeration::enumerate<QSqrt2>(kind, align, nullptr, filter);
  if (!v.is_rational()) throw std::logic_error("enumerate_detection_exact: irrational rate");
  return {v.rational_part(), to_double(v.rational_part())};
}

// Failure probability conditioned on the decoy state and the party's operation.
inline ExactRate enumerate_conditional_exact(const AttackModel& attack, SingleState state, PartyOp op,
                                             Alignment align = Alignment::random) {
  return enumerate_detection_exact(attack, align, enumeration::DecoyFilter{state, op});
}

}  // namespace sqss
