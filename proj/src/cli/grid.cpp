#include <charconv>
#include <cmath>
#include <string>

#include "heatcount/cli.hpp"
#include "heatcount/errors.hpp"

namespace heatcount::cli {

namespace {

constexpr std::size_t kMaxGridPoints = 10'000'000;

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

double parse_number(std::string_view text, std::string_view field) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
    throw InvalidParameter(std::string(field), "'" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text, std::string_view field) {
  std::vector<double> grid;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::string_view item =
        trim(text.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin));
    if (item.empty()) {
      throw InvalidParameter(std::string(field), "empty grid item");
    }
    const std::size_t first = item.find(':');
    if (first == std::string_view::npos) {
      grid.push_back(parse_number(item, field));
    } else {
      const std::size_t second = item.find(':', first + 1);
      if (second == std::string_view::npos || item.find(':', second + 1) != std::string_view::npos) {
        throw InvalidParameter(std::string(field), "ranges are written start:stop:step");
      }
      const double start = parse_number(item.substr(0, first), field);
      const double stop = parse_number(item.substr(first + 1, second - first - 1), field);
      const double step = parse_number(item.substr(second + 1), field);
      if (!(step > 0.0) || stop < start) {
        throw InvalidParameter(std::string(field), "range needs step > 0 and start <= stop");
      }
      const double span = (stop - start) / step;
      if (span > static_cast<double>(kMaxGridPoints)) {
        throw InvalidParameter(std::string(field), "range has too many points");
      }
      const auto last = static_cast<std::size_t>(std::floor(span + 1e-9));
      for (std::size_t i = 0; i <= last; ++i) {
        grid.push_back(start + static_cast<double>(i) * step);
      }
    }
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return grid;
}

}  // namespace heatcount::cli
