#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace lrbox {

using Cell = std::variant<double, long long, std::string>;

/// Shortest decimal that parses back to the same double ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_double(double x);

/// Rectangular table with a mandatory header row, written as CSV.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t column(const std::string& name) const;
  /// Numeric column; integer cells are widened, string cells throw.
  std::vector<double> numbers(const std::string& name) const;

  void write_csv(std::ostream& os) const;
  std::string to_csv() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace lrbox
