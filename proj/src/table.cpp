#include "doublepass/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"

namespace doublepass {

void DataTable::set(const std::string& key, const std::string& value) {
  for (auto& kv : meta) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  meta.emplace_back(key, value);
}

void DataTable::set(const std::string& key, double value) {
  set(key, format_number(value));
}

void DataTable::set(const std::string& key, int value) {
  set(key, std::to_string(value));
}

const std::string* DataTable::find(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const DataTable& table) {
  std::string out;
  for (const auto& [key, value] : table.meta)
    out += "# " + key + "=" + value + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("to_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const DataTable& table) {
  nlohmann::ordered_json j;
  auto& meta = j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) meta[key] = value;
  j["columns"] = table.columns;
  auto& data = j["data"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) data.push_back(row);
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

DataTable parse_csv(const std::string& text) {
  DataTable table;
  bool have_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t from = line.find_first_not_of(" \t", 1);
      if (from == std::string::npos) continue;
      const std::size_t eq = line.find('=', from);
      if (eq == std::string::npos)
        throw std::invalid_argument("parse_csv: metadata line without '='");
      table.meta.emplace_back(line.substr(from, eq - from),
                              line.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      table.columns = split(line, ',');
      have_header = true;
      continue;
    }
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != table.columns.size())
      throw std::invalid_argument("parse_csv: row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) {
      char* tail = nullptr;
      const double v = std::strtod(cell.c_str(), &tail);
      if (tail == cell.c_str() || *tail != '\0')
        throw std::invalid_argument("parse_csv: non-numeric cell '" + cell +
                                    "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument("parse_csv: no header row");
  return table;
}

}  // namespace doublepass
