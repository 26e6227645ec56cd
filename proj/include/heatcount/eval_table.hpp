#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace heatcount {

/// Decimal rendering with 17 significant digits, the CSV contract for reals.
std::string format_real(double value);

struct EvalRow {
  double abscissa = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Grid of abscissae with computed values and their error estimates.
struct EvalTable {
  std::vector<EvalRow> rows;

  /// `abscissa,value,error_estimate` header plus one line per row.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Minimal CSV builder shared by the module-specific tables.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string_view> header);

  CsvWriter& real(double value);
  CsvWriter& integer(long long value);
  CsvWriter& text(std::string_view value);
  CsvWriter& end_row();

  const std::string& str() const noexcept { return out_; }

 private:
  void separator();

  std::string out_;
  bool row_started_ = false;
};

}  // namespace heatcount
