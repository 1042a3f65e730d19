#pragma once

// CSV emission: RFC-4180 quoting, header row, stable column order, floats at
// 12 significant digits. The stats schema shared by both schemes:
//   decoder,n,eps,trials,correct,wrong,ambiguous,no_candidate,enc_fail,
//   error_rate,ci95_halfwidth

#include <string>
#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/detic.hpp"

namespace ratesim {

using CsvRow = std::vector<std::string>;

extern const CsvRow kStatsHeader;

// %.12g rendering used for every float cell.
std::string fmt_g12(double v);

// Quotes a field iff it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

std::string csv_text(const CsvRow& header, const std::vector<CsvRow>& rows);
void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows);

// One row per decoder; error_rate = errors/trials, ci95_halfwidth the normal
// approximation 1.96*sqrt(p(1-p)/trials).
std::vector<CsvRow> trial_stats_rows(const TrialStats& st, int n, double eps);
std::vector<CsvRow> ic_trial_stats_rows(const ICTrialStats& st, int n, double eps);

}  // namespace ratesim
