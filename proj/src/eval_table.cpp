#include "heatcount/eval_table.hpp"

#include <cmath>
#include <cstdio>

namespace heatcount {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string EvalTable::to_csv() const {
  CsvWriter csv({"abscissa", "value", "error_estimate"});
  for (const auto& row : rows) {
    csv.real(row.abscissa).real(row.value).real(row.error_estimate).end_row();
  }
  return csv.str();
}

nlohmann::json EvalTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    out.push_back(
        {{"abscissa", row.abscissa}, {"value", row.value}, {"error_estimate", row.error_estimate}});
  }
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string_view> header) {
  for (auto name : header) text(name);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ += ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::real(double value) {
  separator();
  out_ += format_real(value);
  return *this;
}

CsvWriter& CsvWriter::integer(long long value) {
  separator();
  out_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::text(std::string_view value) {
  separator();
  out_ += value;
  return *this;
}

CsvWriter& CsvWriter::end_row() {
  out_ += '\n';
  row_started_ = false;
  return *this;
}

}  // namespace heatcount
