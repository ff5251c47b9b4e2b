#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace opk {

/// One table cell; monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Ordered config echo, serialized into JSON output only.
  std::vector<std::pair<std::string, std::string>> config_echo;
  int exit_status = 0;
};

/// Fixed formatting: doubles with 17 significant digits, rows in order,
/// minimal quoting.  Byte-identical for identical reports.
std::string to_csv(const Report& rep);

/// {"config": {...}, "columns": [...], "rows": [{...}, ...]}
std::string to_json(const Report& rep);

std::string format_double(double v);

}  // namespace opk
