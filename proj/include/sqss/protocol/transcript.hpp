#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sqss {

// One classical message or qubit transit. Field names are part of the
// JSONL export format.
struct TranscriptRecord {
  std::size_t index = 0;
  std::string sender;
  std::string receiver;
  std::string kind;
  std::string payload;
  bool decoy = false;
};

inline void to_json(nlohmann::ordered_json& j, const TranscriptRecord& r) {
  j = nlohmann::ordered_json{{"index", r.index},     {"sender", r.sender},
                             {"receiver", r.receiver}, {"kind", r.kind},
                             {"payload", r.payload}, {"decoy", r.decoy}};
}

class Transcript {
 public:
  std::size_t append(std::string sender, std::string receiver, std::string kind,
                     std::string payload, bool decoy = false) {
    const std::size_t index = records_.size();
    records_.push_back({index, std::move(sender), std::move(receiver), std::move(kind),
                        std::move(payload), decoy});
    return index;
  }

  const std::vector<TranscriptRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  void write_jsonl(std::ostream& os) const {
    for (const auto& r : records_) {
      nlohmann::ordered_json j = r;
      os << j.dump() << '\n';
    }
  }

  std::string to_jsonl() const {
    std::ostringstream os;
    write_jsonl(os);
    return os.str();
  }

 private:
  std::vector<TranscriptRecord> records_;
};

inline std::string dealer_name() { return "alice"; }
inline std::string party_name(std::size_t i) { return "bob" + std::to_string(i + 1); }

}  // namespace sqss
