#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqss/core/errors.hpp"
#include "sqss/core/matrix.hpp"
#include "sqss/core/rng.hpp"

namespace sqss {

// Squared norm of the entangled remainder below which a slot counts as a
// product with the rest of its factor.
inline constexpr double kSeparabilityTolerance = 1e-24;
inline constexpr std::size_t kMaxFactorSize = std::size_t{1} << 24;

enum class Basis : std::uint8_t { Z, X };

inline const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

// Identifier of one subsystem in a StatePool. Never reused.
struct SlotId {
  std::uint64_t value = 0;
  auto operator<=>(const SlotId&) const = default;
};

struct SlotIdHash {
  std::size_t operator()(SlotId s) const noexcept { return std::hash<std::uint64_t>{}(s.value); }
};

struct DumpEntry {
  std::string label;
  double re = 0.0;
  double im = 0.0;
};

// A pure state over an ordered list of slots. The first slot is the most
// significant digit of the amplitude index.
class StateFactor {
 public:
  StateFactor() = default;

  StateFactor(std::vector<SlotId> slots, std::vector<std::size_t> dims,
              std::vector<Amplitude> amplitudes)
      : slots_(std::move(slots)), dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (slots_.size() != dims_.size()) throw UsageError("StateFactor: slots/dims length mismatch");
    std::size_t expected = 1;
    for (std::size_t d : dims_) {
      if (d < 2) throw UsageError("StateFactor: slot dimension must be >= 2");
      expected *= d;
    }
    if (amps_.size() != expected) {
      throw UsageError("StateFactor: expected " + std::to_string(expected) +
                       " amplitudes, got " + std::to_string(amps_.size()));
    }
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw ValidationError("StateFactor: non-finite amplitude");
    }
    if (std::abs(norm() - 1.0) > kNormTolerance)
      throw ValidationError("StateFactor: state is not normalized");
  }

  const std::vector<SlotId>& slots() const noexcept { return slots_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
  std::size_t size() const noexcept { return amps_.size(); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  std::size_t position_of(SlotId slot) const {
    const auto it = std::find(slots_.begin(), slots_.end(), slot);
    if (it == slots_.end()) throw UsageError("StateFactor: slot not in factor");
    return static_cast<std::size_t>(it - slots_.begin());
  }

  std::size_t stride(std::size_t pos) const {
    std::size_t s = 1;
    for (std::size_t k = pos + 1; k < dims_.size(); ++k) s *= dims_[k];
    return s;
  }

  // Basis-state label, one digit per slot; levels >= 10 print as "(v)".
  std::string label(std::size_t index) const {
    std::vector<std::size_t> digits(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      digits[k] = index % dims_[k];
      index /= dims_[k];
    }
    std::string out;
    for (std::size_t d : digits) {
      out += d < 10 ? std::string(1, static_cast<char>('0' + d)) : "(" + std::to_string(d) + ")";
    }
    return out;
  }

  // Nonzero amplitudes as (basis label, re, im), in index order.
  std::vector<DumpEntry> dump(double eps = 1e-15) const {
    std::vector<DumpEntry> out;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) > eps) out.push_back({label(i), amps_[i].real(), amps_[i].imag()});
    }
    return out;
  }

  friend StateFactor tensor(const StateFactor& a, const StateFactor& b) {
    StateFactor out;
    out.slots_ = a.slots_;
    out.slots_.insert(out.slots_.end(), b.slots_.begin(), b.slots_.end());
    out.dims_ = a.dims_;
    out.dims_.insert(out.dims_.end(), b.dims_.begin(), b.dims_.end());
    out.amps_.resize(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out.amps_[i * b.size() + j] = a.amps_[i] * b.amps_[j];
    return out;
  }

 private:
  friend class StatePool;

  std::vector<SlotId> slots_;
  std::vector<std::size_t> dims_;
  std::vector<Amplitude> amps_;
};

// Hermitian inner product <a|b>. Slot identities are ignored; only the
// dimension signatures must agree.
inline Amplitude inner_product(const StateFactor& a, const StateFactor& b) {
  if (a.dims() != b.dims()) throw UsageError("inner_product: dimension signatures differ");
  Amplitude s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s;
}

// Collection of independent pure-state factors. Joint unitaries merge the
// factors they touch; measurement splits the measured slot back out, so a
// measured slot is always a single-slot factor until something entangles it
// again.
class StatePool {
 public:
  StatePool() = default;

  std::vector<SlotId> create(std::vector<std::size_t> dims, std::vector<Amplitude> amplitudes) {
    std::vector<SlotId> ids(dims.size());
    for (auto& id : ids) id = SlotId{next_slot_++};
    StateFactor f(ids, std::move(dims), std::move(amplitudes));
    const std::uint64_t fid = next_factor_++;
    for (SlotId id : ids) owner_[id] = fid;
    factors_.emplace(fid, std::move(f));
    return ids;
  }

  SlotId create_single(std::size_t dim, std::vector<Amplitude> amplitudes) {
    return create({dim}, std::move(amplitudes)).front();
  }

  SlotId create_basis(std::size_t dim, std::size_t level) {
    if (level >= dim) throw UsageError("create_basis: level out of range");
    std::vector<Amplitude> amps(dim);
    amps[level] = 1.0;
    return create_single(dim, std::move(amps));
  }

  bool is_live(SlotId slot) const { return owner_.contains(slot); }

  std::size_t dimension(SlotId slot) const {
    const StateFactor& f = factor_of(slot);
    return f.dims()[f.position_of(slot)];
  }

  const StateFactor& factor_of(SlotId slot) const {
    return factors_.at(owner_id(slot));
  }

  // True when the slot is not entangled with anything (sole slot of its factor).
  bool is_isolated(SlotId slot) const { return factor_of(slot).slots().size() == 1; }

  std::size_t live_slots() const noexcept { return owner_.size(); }
  std::size_t slots_created() const noexcept { return next_slot_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }

  std::vector<const StateFactor*> factors() const {
    std::vector<const StateFactor*> out;
    out.reserve(factors_.size());
    for (const auto& [id, f] : factors_) out.push_back(&f);
    return out;
  }

  double max_norm_deviation() const {
    double worst = 0.0;
    for (const auto& [id, f] : factors_) worst = std::max(worst, std::abs(f.norm() - 1.0));
    return worst;
  }

  // Next measurement of `slot` returns `outcome` instead of sampling. The
  // outcome must have nonzero Born probability at that time.
  void force_outcome(SlotId slot, unsigned outcome) { forced_[slot] = outcome; }
  void clear_forced() { forced_.clear(); }

  // Born distribution of a measurement without collapsing.
  std::vector<double> outcome_probabilities(SlotId slot, Basis basis) const {
    StateFactor f = factor_of(slot);
    const std::size_t pos = f.position_of(slot);
    if (basis == Basis::X) {
      if (f.dims()[pos] != 2) throw UsageError("X-basis measurement needs a qubit slot");
      apply_in_factor(f, {&pos, 1}, Matrix::hadamard());
    }
    return level_probabilities(f, pos);
  }

  unsigned measure(SlotId slot, Basis basis, Rng& rng) {
    const std::uint64_t fid = owner_id(slot);
    StateFactor& f = factors_.at(fid);
    const std::size_t pos = f.position_of(slot);
    const std::size_t dim = f.dims()[pos];
    if (basis == Basis::X) {
      if (dim != 2) throw UsageError("X-basis measurement needs a qubit slot");
      apply_in_factor(f, {&pos, 1}, Matrix::hadamard());
    }
    const std::vector<double> probs = level_probabilities(f, pos);
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);

    std::size_t outcome = 0;
    if (auto it = forced_.find(slot); it != forced_.end()) {
      outcome = it->second;
      forced_.erase(it);
      if (outcome >= dim || probs[outcome] / total < 1e-12) {
        throw UsageError("forced outcome " + std::to_string(outcome) +
                         " has zero probability");
      }
    } else {
      const double u = rng.unit() * total;
      double cum = 0.0;
      outcome = dim;
      for (std::size_t v = 0; v < dim; ++v) {
        cum += probs[v];
        if (u < cum) {
          outcome = v;
          break;
        }
      }
      if (outcome == dim) {
        // u landed past the accumulated total through rounding.
        for (std::size_t v = dim; v-- > 0;)
          if (probs[v] > 0.0) {
            outcome = v;
            break;
          }
      }
    }

    // Split the measured slot out of its factor.
    const double scale = 1.0 / std::sqrt(probs[outcome]);
    if (f.slots().size() > 1) {
      StateFactor rest;
      rest.slots_ = f.slots_;
      rest.slots_.erase(rest.slots_.begin() + static_cast<std::ptrdiff_t>(pos));
      rest.dims_ = f.dims_;
      rest.dims_.erase(rest.dims_.begin() + static_cast<std::ptrdiff_t>(pos));
      const std::size_t stride = f.stride(pos);
      const std::size_t outer = f.size() / (stride * dim);
      rest.amps_.resize(f.size() / dim);
      for (std::size_t hi = 0; hi < outer; ++hi)
        for (std::size_t lo = 0; lo < stride; ++lo)
          rest.amps_[hi * stride + lo] = f.amps_[(hi * dim + outcome) * stride + lo] * scale;
      const std::uint64_t rest_id = next_factor_++;
      for (SlotId s : rest.slots_) owner_[s] = rest_id;
      factors_.emplace(rest_id, std::move(rest));
      split_products(rest_id);
    }
    StateFactor& single = factors_.at(fid);
    single.slots_ = {slot};
    single.dims_ = {dim};
    single.amps_.assign(dim, Amplitude{});
    if (basis == Basis::Z) {
      single.amps_[outcome] = 1.0;
    } else {
      single.amps_[0] = kInvSqrt2;
      single.amps_[1] = outcome == 0 ? kInvSqrt2 : -kInvSqrt2;
    }
    return static_cast<unsigned>(outcome);
  }

  // Applies `matrix` to the ordered slots (first slot = most significant
  // index of the matrix). Factors are merged when the slots span several.
  void apply_unitary(std::span<const SlotId> slots, const Matrix& matrix) {
    if (slots.empty()) throw UsageError("apply_unitary: no slots");
    std::size_t total_dim = 1;
    std::vector<std::uint64_t> fids;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (slots[i] == slots[j]) throw UsageError("apply_unitary: repeated slot");
      const std::uint64_t fid = owner_id(slots[i]);
      total_dim *= dimension(slots[i]);
      if (std::find(fids.begin(), fids.end(), fid) == fids.end()) fids.push_back(fid);
    }
    if (total_dim != matrix.dim()) {
      throw UsageError("apply_unitary: matrix dimension " + std::to_string(matrix.dim()) +
                       " does not match slot dimension " + std::to_string(total_dim));
    }
    if (!matrix.is_unitary()) throw ValidationError("apply_unitary: matrix is not unitary");

    const std::uint64_t fid = merge(fids);
    StateFactor& f = factors_.at(fid);
    std::vector<std::size_t> positions(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) positions[i] = f.position_of(slots[i]);
    apply_in_factor(f, positions, matrix);
    // An ancilla left untouched by the unitary must not keep the merge alive.
    for (SlotId s : slots) {
      const std::uint64_t owner = owner_id(s);
      const StateFactor& g = factors_.at(owner);
      if (g.slots_.size() < 2) continue;
      if (auto local = product_amplitudes(g, g.position_of(s))) peel(owner, g.position_of(s), std::move(*local));
    }
  }

  void apply_unitary(std::initializer_list<SlotId> slots, const Matrix& matrix) {
    apply_unitary(std::span<const SlotId>(slots.begin(), slots.size()), matrix);
  }

  // Removes a slot that is not entangled with anything. Measured slots
  // always qualify.
  void discard(SlotId slot) {
    const std::uint64_t fid = owner_id(slot);
    if (factors_.at(fid).slots().size() != 1) {
      throw UsageError("discard: slot " + std::to_string(slot.value) +
                       " is entangled; measure it first");
    }
    factors_.erase(fid);
    owner_.erase(slot);
    forced_.erase(slot);
  }

 private:
  std::uint64_t owner_id(SlotId slot) const {
    const auto it = owner_.find(slot);
    if (it == owner_.end()) {
      throw UsageError("slot " + std::to_string(slot.value) + " is not live");
    }
    return it->second;
  }

  // Peels off every slot whose state is a product with the rest of its
  // factor. Measurements are what disentangle, so this runs after each one.
  void split_products(std::uint64_t fid) {
    bool again = true;
    while (again) {
      again = false;
      StateFactor& f = factors_.at(fid);
      if (f.slots_.size() < 2) return;
      for (std::size_t pos = 0; pos < f.slots_.size(); ++pos) {
        if (auto local = product_amplitudes(f, pos)) {
          peel(fid, pos, std::move(*local));
          again = true;
          break;
        }
      }
    }
  }

  // Amplitudes of the slot at `pos` if the factor is (slot) x (rest).
  static std::optional<std::vector<Amplitude>> product_amplitudes(const StateFactor& f,
                                                                  std::size_t pos) {
    const std::size_t dim = f.dims_[pos];
    const std::size_t stride = f.stride(pos);
    const std::size_t rest = f.size() / dim;
    auto at = [&](std::size_t v, std::size_t r) -> const Amplitude& {
      return f.amps_[((r / stride) * dim + v) * stride + r % stride];
    };
    std::size_t best = 0;
    double best_norm = -1.0;
    std::vector<double> norms(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t r = 0; r < rest; ++r) norms[v] += std::norm(at(v, r));
      if (norms[v] > best_norm) {
        best_norm = norms[v];
        best = v;
      }
    }
    const double scale = 1.0 / std::sqrt(best_norm);
    std::vector<Amplitude> local(dim);
    for (std::size_t v = 0; v < dim; ++v) {
      Amplitude ip{};
      for (std::size_t r = 0; r < rest; ++r) ip += std::conj(at(best, r)) * at(v, r);
      local[v] = ip * scale;
      // Component of row v orthogonal to the reference row.
      if (norms[v] - std::norm(local[v]) > kSeparabilityTolerance) return std::nullopt;
    }
    return local;
  }

  void peel(std::uint64_t fid, std::size_t pos, std::vector<Amplitude> local) {
    StateFactor& f = factors_.at(fid);
    const std::size_t dim = f.dims_[pos];
    const std::size_t stride = f.stride(pos);
    const std::size_t rest_size = f.size() / dim;
    std::size_t best = 0;
    for (std::size_t v = 1; v < dim; ++v)
      if (std::norm(local[v]) > std::norm(local[best])) best = v;
    const Amplitude inv = 1.0 / local[best];
    std::vector<Amplitude> rest(rest_size);
    for (std::size_t r = 0; r < rest_size; ++r)
      rest[r] = f.amps_[((r / stride) * dim + best) * stride + r % stride] * inv;

    const SlotId slot = f.slots_[pos];
    f.slots_.erase(f.slots_.begin() + static_cast<std::ptrdiff_t>(pos));
    f.dims_.erase(f.dims_.begin() + static_cast<std::ptrdiff_t>(pos));
    f.amps_ = std::move(rest);

    StateFactor single;
    single.slots_ = {slot};
    single.dims_ = {dim};
    single.amps_ = std::move(local);
    const std::uint64_t id = next_factor_++;
    owner_[slot] = id;
    factors_.emplace(id, std::move(single));
  }

  std::uint64_t merge(const std::vector<std::uint64_t>& fids) {
    const std::uint64_t keep = fids.front();
    std::size_t total = 1;
    for (auto id : fids) {
      total *= factors_.at(id).size();
      if (total > kMaxFactorSize)
        throw DomainError("state pool: entangled factor exceeds " +
                          std::to_string(kMaxFactorSize) + " amplitudes");
    }
    for (std::size_t i = 1; i < fids.size(); ++i) {
      StateFactor merged = tensor(factors_.at(keep), factors_.at(fids[i]));
      for (SlotId s : factors_.at(fids[i]).slots()) owner_[s] = keep;
      factors_.erase(fids[i]);
      factors_.at(keep) = std::move(merged);
    }
    return keep;
  }

  static std::vector<double> level_probabilities(const StateFactor& f, std::size_t pos) {
    const std::size_t dim = f.dims()[pos];
    const std::size_t stride = f.stride(pos);
    std::vector<double> probs(dim, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) probs[(i / stride) % dim] += std::norm(f.amps_[i]);
    return probs;
  }

  static void apply_in_factor(StateFactor& f, std::span<const std::size_t> positions,
                              const Matrix& m) {
    const std::size_t sub = m.dim();
    std::vector<std::size_t> offsets(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
      std::size_t rem = s;
      std::size_t off = 0;
      for (std::size_t k = positions.size(); k-- > 0;) {
        const std::size_t d = f.dims_[positions[k]];
        off += (rem % d) * f.stride(positions[k]);
        rem /= d;
      }
      offsets[s] = off;
    }
    auto is_base = [&](std::size_t idx) {
      for (std::size_t p : positions)
        if ((idx / f.stride(p)) % f.dims_[p] != 0) return false;
      return true;
    };
    std::vector<Amplitude> in(sub), out(sub);
    for (std::size_t base = 0; base < f.size(); ++base) {
      if (!is_base(base)) continue;
      for (std::size_t s = 0; s < sub; ++s) in[s] = f.amps_[base + offsets[s]];
      for (std::size_t r = 0; r < sub; ++r) {
        Amplitude acc{};
        for (std::size_t c = 0; c < sub; ++c) acc += m(r, c) * in[c];
        out[r] = acc;
      }
      for (std::size_t s = 0; s < sub; ++s) f.amps_[base + offsets[s]] = out[s];
    }
  }

  std::map<std::uint64_t, StateFactor> factors_;
  std::unordered_map<SlotId, std::uint64_t, SlotIdHash> owner_;
  std::unordered_map<SlotId, unsigned, SlotIdHash> forced_;
  std::uint64_t next_slot_ = 0;
  std::uint64_t next_factor_ = 0;
};

}  // namespace sqss
