#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace heatcount {

enum class GeneratorKind { interval, rectangle, torus, constant_density, file };

std::string_view to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(std::string_view name);

struct SpectrumEntry {
  double value = 0.0;
  std::uint64_t multiplicity = 1;

  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Eigenvalues with multiplicity, strictly increasing, each >= 0.
///
/// `cutoff()` is the truncation boundary: the stored spectrum is complete on
/// [0, cutoff]. Tail bounds and the Laplace identity use it to account for the
/// eigenvalues that were not generated.
class Spectrum {
 public:
  using Params = std::map<std::string, double>;

  /// Takes ownership of already-merged entries and validates every invariant.
  Spectrum(std::vector<SpectrumEntry> entries, std::string label, GeneratorKind kind,
           Params params, double cutoff);

  std::span<const SpectrumEntry> entries() const noexcept { return entries_; }
  std::size_t distinct_count() const noexcept { return entries_.size(); }
  std::uint64_t total_count() const noexcept { return cumulative_.back(); }

  /// Sum of multiplicities of entries [0, index).
  std::uint64_t count_before(std::size_t index) const noexcept {
    return index == 0 ? 0 : cumulative_[index - 1];
  }

  double min_value() const noexcept { return entries_.front().value; }
  double max_value() const noexcept { return entries_.back().value; }
  double cutoff() const noexcept { return cutoff_; }

  const std::string& label() const noexcept { return label_; }
  GeneratorKind kind() const noexcept { return kind_; }
  const Params& params() const noexcept { return params_; }
  std::optional<double> param(const std::string& name) const;

  /// Index of the entry whose value equals `value` exactly, if any.
  std::optional<std::size_t> find_exact(double value) const noexcept;

  /// Distance from `value` to the nearest eigenvalue.
  double nearest_gap(double value) const noexcept;

  friend bool operator==(const Spectrum& lhs, const Spectrum& rhs);

 private:
  std::vector<SpectrumEntry> entries_;
  std::vector<std::uint64_t> cumulative_;
  std::string label_;
  GeneratorKind kind_;
  Params params_;
  double cutoff_;
};

/// Parameters for one of the closed-form generators.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::interval;
  double length_a = 0.0;  // interval length L, rectangle side a
  double length_b = 0.0;  // rectangle side b
  double density = 0.0;   // constant_density C
  std::optional<double> lambda_max;
  std::optional<std::uint64_t> count;
  std::filesystem::path path;  // kind == file

  void validate() const;
};

/// Dirichlet interval [0, L]: (n*pi/L)^2 for n = 1..count.
Spectrum generate_interval(double length, std::uint64_t count);

/// Dirichlet rectangle a x b: (m*pi/a)^2 + (n*pi/b)^2 <= lambda_max, m, n >= 1.
Spectrum generate_rectangle(double a, double b, double lambda_max);

/// Flat torus R^2 / (2*pi Z)^2: m^2 + n^2 <= lambda_max over (m, n) in Z^2.
Spectrum generate_torus(double lambda_max);

/// Evenly spaced n / C, n = 1..count, so that the eigenvalue density is C.
Spectrum generate_constant_density(double density, std::uint64_t count);

Spectrum generate(const GeneratorSpec& spec);

/// Sorts and merges raw (value, multiplicity) pairs. Values within
/// `relative_tolerance` of the first value of a run collapse onto it.
/// `reordered` is set when the input was not already sorted.
std::vector<SpectrumEntry> merge_entries(std::vector<SpectrumEntry> raw, double relative_tolerance,
                                         bool* reordered = nullptr);

nlohmann::json to_json(const Spectrum& spectrum);

/// Builds a spectrum from its JSON document. Non-fatal issues (unsorted input,
/// merged near-duplicates) are appended to `warnings` when provided.
Spectrum spectrum_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);

void save_spectrum(const Spectrum& spectrum, const std::filesystem::path& path);
Spectrum load_spectrum(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

}  // namespace heatcount
