#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace steinmm {

enum class TableId { Table1, Table2, Table3, Table4, Table5, ExpOptima };

std::string_view to_string(TableId id);
TableId parse_table_id(std::string_view text);  // table1..table5 | exp_optima

/// One compared quantity: identifying keys, the computed value, the
/// published reference value and their absolute deviation.
struct ReportRow {
  std::vector<std::pair<std::string, std::string>> keys;
  std::string quantity;
  double computed = 0.0;
  double reference = 0.0;
  double abs_dev = 0.0;
  std::string note;  // e.g. "boundary" or failed replication counts
};

struct Report {
  TableId table = TableId::Table1;
  std::vector<ReportRow> rows;

  /// Largest deviation among rows whose quantity equals `quantity`
  /// (all rows when empty).
  double max_deviation(std::string_view quantity = {}) const;
  std::string to_csv(int significant_digits = 6) const;
  nlohmann::ordered_json to_json() const;
};

struct ReproduceOptions {
  long reps = 10000;
  std::uint64_t seed = 20240607;
  std::string data_dir;  // empty: default_data_dir()
  int threads = 0;
  bool simulate = true;  // false: table2 reports only the asymptotic columns
};

/// Recomputes a published table. Throws FixtureError naming the missing file
/// for the real-data tables.
Report reproduce(TableId id, const ReproduceOptions& options = {});

/// Formats a number with the given count of significant digits.
std::string format_number(double value, int significant_digits);

}  // namespace steinmm
