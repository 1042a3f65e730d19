#include "ratesim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ratesim {

const CsvRow kStatsHeader = {"decoder",  "n",         "eps",          "trials",
                             "correct",  "wrong",     "ambiguous",    "no_candidate",
                             "enc_fail", "error_rate", "ci95_halfwidth"};

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_text(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out;
  auto emit = [&out](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  };
  emit(header);
  for (const CsvRow& r : rows) emit(r);
  return out;
}

void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << csv_text(header, rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

CsvRow stats_row(const char* name, const VerdictCounts& c, int n, double eps,
                 long trials, long enc_fail) {
  double p = trials > 0 ? static_cast<double>(c.errors()) / static_cast<double>(trials) : 0.0;
  double ci = trials > 0 ? 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
  return {name,
          std::to_string(n),
          fmt_g12(eps),
          std::to_string(trials),
          std::to_string(c.correct),
          std::to_string(c.wrong),
          std::to_string(c.ambiguous),
          std::to_string(c.no_candidate),
          std::to_string(enc_fail),
          fmt_g12(p),
          fmt_g12(ci)};
}

}  // namespace

std::vector<CsvRow> trial_stats_rows(const TrialStats& st, int n, double eps) {
  std::vector<CsvRow> rows;
  rows.reserve(kNumDecoders);
  for (int d = 0; d < kNumDecoders; ++d) {
    rows.push_back(stats_row(kDecoderNames[d], st.decoders[d], n, eps, st.trials, st.enc_fail));
  }
  return rows;
}

std::vector<CsvRow> ic_trial_stats_rows(const ICTrialStats& st, int n, double eps) {
  std::vector<CsvRow> rows;
  rows.reserve(kICNumDecoders);
  for (int d = 0; d < kICNumDecoders; ++d) {
    rows.push_back(stats_row(kICDecoderNames[d], st.decoders[d], n, eps, st.trials, 0));
  }
  return rows;
}

}  // namespace ratesim
