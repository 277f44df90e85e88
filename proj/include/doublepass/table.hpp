#pragma once

#include <string>
#include <utility>
#include <vector>

namespace doublepass {

// Column-oriented numeric table with an ordered key=value preamble. The
// preamble must carry every knob needed to regenerate the body, so output
// files double as run records.
struct DataTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row matches columns.size()

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  // nullptr when absent
  const std::string* find(const std::string& key) const;
};

// 12-significant-digit decimal rendering used for every number we emit;
// stable across reruns, tight enough to be lossless for plotting.
std::string format_number(double x);

// `# key=value` preamble, one header row, comma-separated data rows.
std::string to_csv(const DataTable& table);

// {"meta": {...}, "columns": [...], "data": [[...], ...]}, insertion order.
std::string to_json(const DataTable& table);

// Inverse of to_csv; throws std::invalid_argument on malformed input.
DataTable parse_csv(const std::string& text);

}  // namespace doublepass
