#include "opk/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace opk {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string cell_to_csv(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string to_csv(const Report& rep) {
  std::string out;
  for (std::size_t i = 0; i < rep.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(rep.columns[i]);
  }
  out += '\n';
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& rep) {
  nlohmann::ordered_json root;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.config_echo) cfg[k] = v;
  root["config"] = std::move(cfg);
  root["columns"] = rep.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < rep.columns.size(); ++i) {
      const Cell& cell = row[i];
      const std::string& col = rep.columns[i];
      if (std::holds_alternative<std::monostate>(cell))
        obj[col] = nullptr;
      else if (std::holds_alternative<bool>(cell))
        obj[col] = std::get<bool>(cell);
      else if (std::holds_alternative<long long>(cell))
        obj[col] = std::get<long long>(cell);
      else if (std::holds_alternative<double>(cell))
        obj[col] = std::get<double>(cell);
      else
        obj[col] = std::get<std::string>(cell);
    }
    rows.push_back(std::move(obj));
  }
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

}  // namespace opk
