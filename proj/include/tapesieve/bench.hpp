#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapesieve/sieve.hpp"

namespace tapesieve {

// Per-run cost summary backing one block of CSV rows. The ratio column is
// the empirical witness for the n*log2(n) scaling of the grand total.
struct BenchRecord {
  std::uint64_t n = 0;
  std::array<StageReport, 6> stages;
  StageReport all;
  std::vector<GroupCost> group_costs;

  static double normalized(std::uint64_t total, std::uint64_t n) {
    return static_cast<double>(total) /
           (static_cast<double>(n) * std::log2(static_cast<double>(n)));
  }

  double ratio() const { return normalized(all.total(), n); }
};

inline BenchRecord bench_run(std::uint64_t n) {
  SieveRun run = run_all(n);
  BenchRecord r;
  r.n = n;
  for (int i = 0; i < 6; ++i) r.stages[static_cast<std::size_t>(i)] = run.stages[static_cast<std::size_t>(i)];
  r.all = run.all;
  r.group_costs = run.group_costs;
  return r;
}

inline std::string csv_header() {
  return "n,stage,moves,reads,writes,bool_ops,branches,total,ratio";
}

inline void write_csv_row(std::uint64_t n, const std::string& stage,
                          const StageReport& s, std::ostream& out) {
  out << n << ',' << stage << ',' << s.head_moves << ',' << s.reads << ','
      << s.writes << ',' << s.bool_ops << ',' << s.branches << ','
      << s.total() << ',' << std::setprecision(12)
      << BenchRecord::normalized(s.total(), n) << '\n';
}

// Seven rows per record: stage0..stage5 then the grand total row "all".
inline void write_csv_rows(const BenchRecord& r, std::ostream& out) {
  for (int i = 0; i < 6; ++i)
    write_csv_row(r.n, "stage" + std::to_string(i), r.stages[static_cast<std::size_t>(i)], out);
  write_csv_row(r.n, "all", r.all, out);
}

struct CsvRow {
  std::uint64_t n = 0;
  std::string stage;
  StageReport counts;
  std::uint64_t total = 0;
  double ratio = 0.0;
};

inline CsvRow parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != 9)
    throw std::invalid_argument("expected 9 CSV fields, got " +
                                std::to_string(fields.size()));
  CsvRow row;
  row.n = std::stoull(fields[0]);
  row.stage = fields[1];
  row.counts.phase = fields[1];
  row.counts.head_moves = std::stoull(fields[2]);
  row.counts.reads = std::stoull(fields[3]);
  row.counts.writes = std::stoull(fields[4]);
  row.counts.bool_ops = std::stoull(fields[5]);
  row.counts.branches = std::stoull(fields[6]);
  row.total = std::stoull(fields[7]);
  row.ratio = std::stod(fields[8]);
  return row;
}

}  // namespace tapesieve
