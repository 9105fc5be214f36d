#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqss/adversary/attack_model.hpp"
#include "sqss/core/state_pool.hpp"

namespace sqss {

// What Eve recorded on one dealer<->party channel, indexed by transit position.
struct ChannelObservation {
  std::vector<std::optional<unsigned>> forward;   // fake bit sent, or Z value measured
  std::vector<std::optional<unsigned>> backward;  // Z value of the returned qubit
  std::vector<std::optional<unsigned>> probe;     // probe/ancilla measurement
};

struct EveReport {
  std::vector<ChannelObservation> channels;
  std::string strategy_note;

  ChannelObservation& channel(std::size_t party, std::size_t positions) {
    if (channels.size() <= party) channels.resize(party + 1);
    auto& ch = channels[party];
    if (ch.forward.size() < positions) {
      ch.forward.resize(positions);
      ch.backward.resize(positions);
      ch.probe.resize(positions);
    }
    return ch;
  }
};

// Adversary hook on the quantum channel. `position` is the index within the
// transmitted sequence; the tap never learns which positions carry decoys.
// Each hook returns the slot that continues down the channel.
class ChannelTap {
 public:
  explicit ChannelTap(std::uint64_t seed = 0) : rng_(seed) {}
  virtual ~ChannelTap() = default;

  ChannelTap(const ChannelTap&) = delete;
  ChannelTap& operator=(const ChannelTap&) = delete;

  // Called once per party before any transit, with the sequence length.
  virtual void begin_channel(std::size_t party, std::size_t positions) {
    report_.channel(party, positions);
  }
  virtual SlotId forward(std::size_t, std::size_t, SlotId slot, StatePool&) { return slot; }
  virtual SlotId backward(std::size_t, std::size_t, SlotId slot, StatePool&) { return slot; }

  const EveReport& report() const noexcept { return report_; }
  EveReport take_report() { return std::move(report_); }

 protected:
  ChannelObservation& obs(std::size_t party) { return report_.channels.at(party); }

  Rng rng_;
  EveReport report_;
};

class PassThroughTap final : public ChannelTap {
 public:
  using ChannelTap::ChannelTap;
};

// Keeps the original, sends a uniformly random Z-basis fake, and Z-measures
// whatever comes back.
class InterceptResendTap final : public ChannelTap {
 public:
  explicit InterceptResendTap(std::uint64_t seed) : ChannelTap(seed) {
    report_.strategy_note = "intercept-resend: uniform Z-basis fakes";
  }

  SlotId forward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    held_.push_back(slot);
    const unsigned fake = rng_.coin() ? 1U : 0U;
    obs(party).forward[pos] = fake;
    return pool.create_basis(2, fake);
  }

  SlotId backward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    obs(party).backward[pos] = pool.measure(slot, Basis::Z, rng_);
    return slot;
  }

  const std::vector<SlotId>& held() const noexcept { return held_; }

 private:
  std::vector<SlotId> held_;
};

class MeasureResendTap final : public ChannelTap {
 public:
  explicit MeasureResendTap(std::uint64_t seed) : ChannelTap(seed) {
    report_.strategy_note = "measure-resend: Z measurement both ways";
  }

  SlotId forward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    obs(party).forward[pos] = pool.measure(slot, Basis::Z, rng_);
    return slot;
  }

  SlotId backward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    obs(party).backward[pos] = pool.measure(slot, Basis::Z, rng_);
    return slot;
  }
};

// Shared shape of the two ancilla attacks: attach a probe on the way out,
// interact again with whatever qubit returns at the same position, then
// measure the probe.
class ProbeTap : public ChannelTap {
 public:
  ProbeTap(std::uint64_t seed, Matrix out, Matrix back, std::size_t probe_dim)
      : ChannelTap(seed), out_(std::move(out)), back_(std::move(back)), probe_dim_(probe_dim) {}

  void begin_channel(std::size_t party, std::size_t positions) override {
    ChannelTap::begin_channel(party, positions);
    if (probes_.size() <= party) probes_.resize(party + 1);
    probes_[party].assign(positions, std::nullopt);
  }

  SlotId forward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    const SlotId probe = pool.create_basis(probe_dim_, 0);
    pool.apply_unitary({slot, probe}, out_);
    probes_[party][pos] = probe;
    return slot;
  }

  SlotId backward(std::size_t party, std::size_t pos, SlotId slot, StatePool& pool) override {
    auto& probe = probes_[party][pos];
    if (!probe) return slot;
    pool.apply_unitary({slot, *probe}, back_);
    obs(party).probe[pos] = pool.measure(*probe, Basis::Z, rng_);
    pool.discard(*probe);
    probe.reset();
    return slot;
  }

 private:
  Matrix out_;
  Matrix back_;
  std::size_t probe_dim_;
  std::vector<std::vector<std::optional<SlotId>>> probes_;
};

class DoubleCnotTap final : public ProbeTap {
 public:
  explicit DoubleCnotTap(std::uint64_t seed) : ProbeTap(seed, Matrix::cnot(), Matrix::cnot(), 2) {
    report_.strategy_note = "double-cnot: positional ancilla pairing";
  }
};

class EntangleMeasureTap final : public ProbeTap {
 public:
  EntangleMeasureTap(std::uint64_t seed, const EmUnitaries& u)
      : ProbeTap(seed, u.ue, u.uf, u.probe_dim) {
    report_.strategy_note = "entangle-measure: (U_E, U_F) with positional probe";
  }
};

// Collusion has no channel component; the dishonest parties act after publication.
inline std::unique_ptr<ChannelTap> make_tap(const AttackModel& attack, std::uint64_t seed) {
  struct Visitor {
    std::uint64_t seed;
    std::unique_ptr<ChannelTap> operator()(const NoAttack&) const {
      return std::make_unique<PassThroughTap>(seed);
    }
    std::unique_ptr<ChannelTap> operator()(const InterceptResend&) const {
      return std::make_unique<InterceptResendTap>(seed);
    }
    std::unique_ptr<ChannelTap> operator()(const MeasureResend&) const {
      return std::make_unique<MeasureResendTap>(seed);
    }
    std::unique_ptr<ChannelTap> operator()(const DoubleCnot&) const {
      return std::make_unique<DoubleCnotTap>(seed);
    }
    std::unique_ptr<ChannelTap> operator()(const EntangleMeasure& em) const {
      return std::make_unique<EntangleMeasureTap>(seed, em.unitaries);
    }
    std::unique_ptr<ChannelTap> operator()(const Collusion&) const {
      return std::make_unique<PassThroughTap>(seed);
    }
  };
  return std::visit(Visitor{seed}, attack);
}

}  // namespace sqss
