#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqss/analysis/detection.hpp"
#include "sqss/analysis/efficiency.hpp"

namespace sqss {

enum class ReportFormat : std::uint8_t { csv, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw UsageError("unknown report format '" + std::string(s) + "'");
}

// Serialized projection of a DetectionEstimate.
struct DetectionRow {
  std::string attack;
  unsigned n = 0;
  std::size_t L = 0;
  std::size_t trials = 0;
  double per_decoy_rate = 0.0;
  double abort_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  static DetectionRow from(const DetectionEstimate& e) {
    return {e.attack, e.n, e.L, e.trials, e.per_decoy_rate, e.session_abort_rate, e.ci95.low,
            e.ci95.high};
  }
  friend bool operator==(const DetectionRow&, const DetectionRow&) = default;
};

inline constexpr std::string_view kDetectionCsvHeader =
    "attack,n,L,trials,per_decoy_rate,abort_rate,ci_low,ci_high";
inline constexpr std::string_view kEfficiencyCsvHeader = "protocol,n,eta_num,eta_den";

// Shortest representation that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string emit_detection_report(const std::vector<DetectionRow>& rows, ReportFormat fmt) {
  if (fmt == ReportFormat::csv) {
    std::string out(kDetectionCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
      out += r.attack + ',' + std::to_string(r.n) + ',' + std::to_string(r.L) + ',' +
             std::to_string(r.trials) + ',' + format_double(r.per_decoy_rate) + ',' +
             format_double(r.abort_rate) + ',' + format_double(r.ci_low) + ',' +
             format_double(r.ci_high) + '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"attack", r.attack},
                   {"n", r.n},
                   {"L", r.L},
                   {"trials", r.trials},
                   {"per_decoy_rate", r.per_decoy_rate},
                   {"abort_rate", r.abort_rate},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high}});
  }
  return arr.dump(2) + '\n';
}

inline std::string emit_efficiency_report(const std::vector<EfficiencyEntry>& rows,
                                          ReportFormat fmt) {
  if (fmt == ReportFormat::csv) {
    std::string out(kEfficiencyCsvHeader);
    out += '\n';
    for (const auto& e : rows) {
      out += std::string(to_string(e.protocol)) + ',' + std::to_string(e.n) + ',' +
             std::to_string(e.eta.numerator()) + ',' + std::to_string(e.eta.denominator()) + '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : rows) {
    arr.push_back({{"protocol", to_string(e.protocol)},
                   {"n", e.n},
                   {"eta_num", e.eta.numerator()},
                   {"eta_den", e.eta.denominator()}});
  }
  return arr.dump(2) + '\n';
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw UsageError("cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

inline std::vector<DetectionRow> parse_detection_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kDetectionCsvHeader)
    throw UsageError("parse_detection_csv: bad header");
  std::vector<DetectionRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 8) throw UsageError("parse_detection_csv: expected 8 fields");
    rows.push_back({f[0], detail::parse_number<unsigned>(f[1]),
                    detail::parse_number<std::size_t>(f[2]), detail::parse_number<std::size_t>(f[3]),
                    detail::parse_number<double>(f[4]), detail::parse_number<double>(f[5]),
                    detail::parse_number<double>(f[6]), detail::parse_number<double>(f[7])});
  }
  return rows;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace sqss
