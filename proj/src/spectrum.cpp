#include "heatcount/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "heatcount/errors.hpp"

namespace heatcount {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(field, "must be a finite positive number");
  }
}

void require_count(std::uint64_t count) {
  if (count == 0) {
    throw InvalidParameter("count", "must be at least 1");
  }
}

std::string format_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::interval:
      return "interval";
    case GeneratorKind::rectangle:
      return "rectangle";
    case GeneratorKind::torus:
      return "torus";
    case GeneratorKind::constant_density:
      return "constant_density";
    case GeneratorKind::file:
      return "file";
  }
  return "file";
}

GeneratorKind generator_kind_from_string(std::string_view name) {
  for (auto kind : {GeneratorKind::interval, GeneratorKind::rectangle, GeneratorKind::torus,
                    GeneratorKind::constant_density, GeneratorKind::file}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw InvalidParameter("shape", "unknown generator kind '" + std::string(name) + "'");
}

Spectrum::Spectrum(std::vector<SpectrumEntry> entries, std::string label, GeneratorKind kind,
                   Params params, double cutoff)
    : entries_(std::move(entries)),
      label_(std::move(label)),
      kind_(kind),
      params_(std::move(params)),
      cutoff_(cutoff) {
  if (entries_.empty()) {
    throw EmptySpectrum("spectrum has no eigenvalues");
  }
  cumulative_.reserve(entries_.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!std::isfinite(e.value) || e.value < 0.0) {
      throw ValidationError("eigenvalue " + std::to_string(i) + " is negative or not finite");
    }
    if (e.multiplicity == 0) {
      throw ValidationError("eigenvalue " + std::to_string(i) + " has zero multiplicity");
    }
    if (i > 0 && !(entries_[i - 1].value < e.value)) {
      throw ValidationError("eigenvalues must be strictly increasing after merging");
    }
    running += e.multiplicity;
    cumulative_.push_back(running);
  }
  if (!(cutoff_ >= entries_.back().value) || !std::isfinite(cutoff_)) {
    throw ValidationError("cutoff must be finite and at least the largest eigenvalue");
  }
}

std::optional<double> Spectrum::param(const std::string& name) const {
  if (auto it = params_.find(name); it != params_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::optional<std::size_t> Spectrum::find_exact(double value) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                             [](const SpectrumEntry& e, double v) { return e.value < v; });
  if (it != entries_.end() && it->value == value) {
    return static_cast<std::size_t>(it - entries_.begin());
  }
  return std::nullopt;
}

double Spectrum::nearest_gap(double value) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                             [](const SpectrumEntry& e, double v) { return e.value < v; });
  double gap = std::numeric_limits<double>::infinity();
  if (it != entries_.end()) {
    gap = it->value - value;
  }
  if (it != entries_.begin()) {
    gap = std::min(gap, value - std::prev(it)->value);
  }
  return gap;
}

bool operator==(const Spectrum& lhs, const Spectrum& rhs) {
  return lhs.entries_ == rhs.entries_ && lhs.label_ == rhs.label_ && lhs.kind_ == rhs.kind_ &&
         lhs.params_ == rhs.params_ && lhs.cutoff_ == rhs.cutoff_;
}

void GeneratorSpec::validate() const {
  switch (kind) {
    case GeneratorKind::interval:
      require_positive(length_a, "length");
      if (!count) throw InvalidParameter("count", "required for interval");
      require_count(*count);
      break;
    case GeneratorKind::rectangle:
      require_positive(length_a, "a");
      require_positive(length_b, "b");
      if (!lambda_max) throw InvalidParameter("lambda-max", "required for rectangle");
      require_positive(*lambda_max, "lambda-max");
      break;
    case GeneratorKind::torus:
      if (!lambda_max) throw InvalidParameter("lambda-max", "required for torus");
      if (!(*lambda_max >= 0.0) || !std::isfinite(*lambda_max)) {
        throw InvalidParameter("lambda-max", "must be a finite nonnegative number");
      }
      break;
    case GeneratorKind::constant_density:
      require_positive(density, "density");
      if (!count) throw InvalidParameter("count", "required for constant_density");
      require_count(*count);
      break;
    case GeneratorKind::file:
      if (path.empty()) throw InvalidParameter("path", "required for file spectra");
      break;
  }
}

Spectrum generate_interval(double length, std::uint64_t count) {
  require_positive(length, "length");
  require_count(count);
  // pi / L is formed once so that L = pi yields exact integer squares.
  const double wavenumber = std::numbers::pi / length;
  std::vector<SpectrumEntry> entries;
  entries.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n) {
    const double k = static_cast<double>(n) * wavenumber;
    entries.push_back({k * k, 1});
  }
  const double cutoff = entries.back().value;
  return Spectrum(std::move(entries), "interval", GeneratorKind::interval,
                  {{"length", length}, {"count", static_cast<double>(count)}}, cutoff);
}

Spectrum generate_rectangle(double a, double b, double lambda_max) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(lambda_max, "lambda-max");
  // lambda = (pi/a)^2 * (m^2 + n^2 * (a/b)^2): for commensurate sides the
  // bracket is computed exactly, so degenerate pairs compare equal.
  const double base = (std::numbers::pi / a) * (std::numbers::pi / a);
  const double ratio = (a / b) * (a / b);
  std::vector<SpectrumEntry> raw;
  for (std::uint64_t m = 1;; ++m) {
    const double m2 = static_cast<double>(m * m);
    if (base * (m2 + ratio) > lambda_max) break;
    for (std::uint64_t n = 1;; ++n) {
      const double value = base * (m2 + static_cast<double>(n * n) * ratio);
      if (value > lambda_max) break;
      raw.push_back({value, 1});
    }
  }
  if (raw.empty()) {
    throw EmptySpectrum("lambda-max is below the smallest rectangle eigenvalue");
  }
  return Spectrum(merge_entries(std::move(raw), 0.0), "rectangle", GeneratorKind::rectangle,
                  {{"a", a}, {"b", b}, {"lambda_max", lambda_max}}, lambda_max);
}

Spectrum generate_torus(double lambda_max) {
  if (!(lambda_max >= 0.0) || !std::isfinite(lambda_max)) {
    throw InvalidParameter("lambda-max", "must be a finite nonnegative number");
  }
  const auto limit = static_cast<std::int64_t>(std::floor(lambda_max));
  auto radius = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit)));
  while ((radius + 1) * (radius + 1) <= limit) ++radius;
  while (radius * radius > limit) --radius;

  std::vector<std::uint64_t> representations(static_cast<std::size_t>(limit) + 1, 0);
  for (std::int64_t m = -radius; m <= radius; ++m) {
    for (std::int64_t n = -radius; n <= radius; ++n) {
      const std::int64_t k = m * m + n * n;
      if (k <= limit) ++representations[static_cast<std::size_t>(k)];
    }
  }
  std::vector<SpectrumEntry> entries;
  for (std::size_t k = 0; k < representations.size(); ++k) {
    if (representations[k] > 0) {
      entries.push_back({static_cast<double>(k), representations[k]});
    }
  }
  return Spectrum(std::move(entries), "torus", GeneratorKind::torus, {{"lambda_max", lambda_max}},
                  lambda_max);
}

Spectrum generate_constant_density(double density, std::uint64_t count) {
  require_positive(density, "density");
  require_count(count);
  std::vector<SpectrumEntry> entries;
  entries.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n) {
    entries.push_back({static_cast<double>(n) / density, 1});
  }
  const double cutoff = entries.back().value;
  return Spectrum(std::move(entries), "constant_density", GeneratorKind::constant_density,
                  {{"density", density}, {"count", static_cast<double>(count)}}, cutoff);
}

Spectrum generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::interval:
      return generate_interval(spec.length_a, *spec.count);
    case GeneratorKind::rectangle:
      return generate_rectangle(spec.length_a, spec.length_b, *spec.lambda_max);
    case GeneratorKind::torus:
      return generate_torus(*spec.lambda_max);
    case GeneratorKind::constant_density:
      return generate_constant_density(spec.density, *spec.count);
    case GeneratorKind::file:
      return load_spectrum(spec.path);
  }
  throw InvalidParameter("shape", "unsupported generator");
}

std::vector<SpectrumEntry> merge_entries(std::vector<SpectrumEntry> raw, double relative_tolerance,
                                         bool* reordered) {
  const auto by_value = [](const SpectrumEntry& x, const SpectrumEntry& y) {
    return x.value < y.value;
  };
  if (reordered) *reordered = !std::is_sorted(raw.begin(), raw.end(), by_value);
  std::stable_sort(raw.begin(), raw.end(), by_value);

  std::vector<SpectrumEntry> merged;
  for (const auto& e : raw) {
    if (!merged.empty()) {
      auto& last = merged.back();
      const double scale = std::max(std::abs(last.value), std::abs(e.value));
      if (e.value == last.value || e.value - last.value <= relative_tolerance * scale) {
        last.multiplicity += e.multiplicity;
        continue;
      }
    }
    merged.push_back(e);
  }
  return merged;
}

nlohmann::json to_json(const Spectrum& spectrum) {
  nlohmann::json generator = nlohmann::json::object();
  generator["kind"] = to_string(spectrum.kind());
  for (const auto& [name, value] : spectrum.params()) {
    generator[name] = value;
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : spectrum.entries()) {
    entries.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
  }
  return {{"label", spectrum.label()},
          {"generator", std::move(generator)},
          {"cutoff", spectrum.cutoff()},
          {"entries", std::move(entries)}};
}

Spectrum spectrum_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object()) {
    throw ParseError("spectrum document must be a JSON object");
  }
  std::string label = "file";
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ParseError("field 'label': expected string");
    label = doc["label"].get<std::string>();
  }

  GeneratorKind kind = GeneratorKind::file;
  Spectrum::Params params;
  if (doc.contains("generator")) {
    const auto& gen = doc["generator"];
    if (!gen.is_object()) throw ParseError("field 'generator': expected object");
    for (const auto& [name, value] : gen.items()) {
      if (name == "kind") {
        if (!value.is_string()) throw ParseError("field 'generator.kind': expected string");
        try {
          kind = generator_kind_from_string(value.get<std::string>());
        } catch (const InvalidParameter&) {
          throw ParseError("field 'generator.kind': unknown kind '" + value.get<std::string>() + "'");
        }
      } else if (value.is_number()) {
        params[name] = value.get<double>();
      } else {
        throw ParseError("field 'generator." + name + "': expected number");
      }
    }
  }

  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError("field 'entries': expected array");
  }
  std::vector<SpectrumEntry> raw;
  const auto& items = doc["entries"];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const std::string where = "entries[" + std::to_string(i) + "]";
    SpectrumEntry entry;
    if (item.is_number()) {
      entry.value = item.get<double>();
    } else if (item.is_object()) {
      if (!item.contains("value") || !item["value"].is_number()) {
        throw ParseError("field '" + where + ".value': expected number");
      }
      entry.value = item["value"].get<double>();
      if (item.contains("multiplicity")) {
        const auto& mult = item["multiplicity"];
        if (!mult.is_number_integer() || mult.get<std::int64_t>() < 1) {
          throw ValidationError("field '" + where + ".multiplicity': expected integer >= 1");
        }
        entry.multiplicity = mult.get<std::uint64_t>();
      }
    } else {
      throw ParseError("field '" + where + "': expected number or {value, multiplicity}");
    }
    if (!std::isfinite(entry.value) || entry.value < 0.0) {
      throw ValidationError("field '" + where + ".value': eigenvalues must be finite and >= 0");
    }
    raw.push_back(entry);
  }
  if (raw.empty()) {
    throw EmptySpectrum("field 'entries': spectrum has no eigenvalues");
  }

  // Generator output was written by save_spectrum and merges exactly; user
  // data may carry rounding noise.
  const double tolerance = kind == GeneratorKind::file ? 1e-12 : 0.0;
  const std::size_t raw_size = raw.size();
  bool reordered = false;
  auto merged = merge_entries(std::move(raw), tolerance, &reordered);
  if (warnings) {
    if (reordered) warnings->push_back("entries were not sorted; sorted on load");
    if (merged.size() != raw_size) {
      warnings->push_back(std::to_string(raw_size - merged.size()) +
                          " duplicate eigenvalue(s) merged into multiplicities");
    }
  }

  double cutoff = merged.back().value;
  if (doc.contains("cutoff")) {
    if (!doc["cutoff"].is_number()) throw ParseError("field 'cutoff': expected number");
    cutoff = doc["cutoff"].get<double>();
    if (cutoff < merged.back().value) {
      throw ValidationError("field 'cutoff': must be at least the largest eigenvalue");
    }
  }
  return Spectrum(std::move(merged), std::move(label), kind, std::move(params), cutoff);
}

void save_spectrum(const Spectrum& spectrum, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << to_json(spectrum).dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

Spectrum load_spectrum(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + format_position(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
  try {
    return spectrum_from_json(doc, warnings);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace heatcount
