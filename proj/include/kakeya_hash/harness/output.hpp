#pragma once

#include <ostream>
#include <string>

#include "kakeya_hash/harness/experiments.hpp"

namespace kakeya_hash::harness {

/// One JSON object per record, then {"summary": ...} on the last line.
inline void write_jsonl(std::ostream& os, const RunResult& res) {
  for (const auto& r : res.records) os << r.dump() << "\n";
  os << json{{"summary", res.summary}}.dump() << "\n";
}

namespace detail {

inline std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace detail

/// hash-balance: one row per nonempty bucket per trial. Other runs: the records as a table whose
/// columns are the keys of the first record.
inline void write_csv(std::ostream& os, const RunResult& res) {
  if (!res.histogram_rows.empty()) {
    os << "trial_index,bucket,count\n";
    for (const auto& [trial, bucket, count] : res.histogram_rows) os << trial << "," << bucket << "," << count << "\n";
    return;
  }
  if (res.records.empty()) return;
  std::vector<std::string> cols;
  for (const auto& [k, _] : res.records.front().items()) cols.push_back(k);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : res.records) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "");
      if (r.contains(cols[i])) os << detail::csv_cell(r[cols[i]]);
    }
    os << "\n";
  }
}

}  // namespace kakeya_hash::harness
