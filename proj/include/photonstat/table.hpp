#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace photonstat {

/// Empty, integer, real or text cell.
using Cell = std::variant<std::monostate, long long, double, std::string>;

class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns = {});

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Throws DomainError when the row width differs from the schema.
  void add_row(std::vector<Cell> row);
  /// Index of a column; throws DomainError when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;

  /// Run-level facts that are not per-row (e.g. validation summaries).
  nlohmann::json summary = nlohmann::json::object();

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double v);

/// RFC-4180 CSV: one header row, CRLF line ends, quoting only when needed.
void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);

/// `<stem>.json` next to `csv_path`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace photonstat
