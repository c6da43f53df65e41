#pragma once

// Ratio-scan records and their CSV serialization. Doubles are written with
// 17 significant digits so a parsed CSV reproduces the in-memory records
// exactly.

#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/estimate.hpp"

namespace hypgauge {

struct RatioRecord {
  double alpha = 0;
  Estimate omega;
  Estimate d_green;
  std::optional<std::pair<double, double>> delta_bracket;
  double ratio = 0;
  int n_components = 0;
  bool geodesic = false;  // in-memory flag for the two-sided audit; not serialized
};

inline constexpr const char* kCsvHeader =
    "alpha,omega,omega_stderr,d_green,d_stderr,delta_lo,delta_hi,ratio,n_components";

namespace csv_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace csv_detail

inline std::string records_to_csv(const std::vector<RatioRecord>& records) {
  using csv_detail::fmt;
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += fmt(r.alpha) + ',' + fmt(r.omega.value) + ',' + fmt(r.omega.stderr_) + ',' +
           fmt(r.d_green.value) + ',' + fmt(r.d_green.stderr_) + ',';
    if (r.delta_bracket) out += fmt(r.delta_bracket->first);
    out += ',';
    if (r.delta_bracket) out += fmt(r.delta_bracket->second);
    out += ',' + fmt(r.ratio) + ',' + std::to_string(r.n_components) + '\n';
  }
  return out;
}

inline std::vector<RatioRecord> records_from_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw ConfigParse("missing or malformed CSV header", 1);
  std::vector<RatioRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv_detail::split(line);
    if (f.size() != 9) throw ConfigParse("expected 9 CSV fields", lineno);
    RatioRecord r;
    r.alpha = std::stod(f[0]);
    r.omega.value = std::stod(f[1]);
    r.omega.stderr_ = std::stod(f[2]);
    r.d_green.value = std::stod(f[3]);
    r.d_green.stderr_ = std::stod(f[4]);
    if (!f[5].empty() && !f[6].empty())
      r.delta_bracket = std::pair{std::stod(f[5]), std::stod(f[6])};
    r.ratio = std::stod(f[7]);
    r.n_components = std::stoi(f[8]);
    out.push_back(r);
  }
  return out;
}

}  // namespace hypgauge
