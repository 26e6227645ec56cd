#include "heatcount/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "heatcount/compensated_sum.hpp"
#include "heatcount/errors.hpp"
#include "heatcount/eval_table.hpp"
#include "heatcount/transforms.hpp"

namespace heatcount {

namespace {

using Complex = std::complex<double>;

constexpr std::uint64_t kMinAbscissaEntries = 32;
constexpr double kMaxExponent = 700.0;
// Eigenvalues whose damped weight e^{c (lambda - lambda_n)} falls below this
// cannot move the result by a measurable amount.
constexpr double kNegligibleWeight = 1e-18;
// Rotation recurrences are re-seeded from cos/sin this often.
constexpr std::size_t kResyncInterval = 512;

struct ActiveTerm {
  double weight;  // mult * e^{c (lambda - lambda_n)}
  double offset;  // lambda - lambda_n
};

std::vector<ActiveTerm> active_terms(const Spectrum& spectrum, double lambda, double c) {
  std::vector<ActiveTerm> terms;
  for (const auto& e : spectrum.entries()) {
    const double offset = lambda - e.value;
    const double weight = static_cast<double>(e.multiplicity) * std::exp(c * offset);
    if (weight < kNegligibleWeight) break;
    terms.push_back({weight, offset});
  }
  return terms;
}

// Sum over n of the bound on the trapezoid tail beyond T, times T.
double truncation_numerator(std::span<const ActiveTerm> terms, double c, double h) {
  CompensatedSum<double> sum;
  for (const auto& term : terms) {
    if (term.offset == 0.0) {
      sum += term.weight * c * 1.01;
    } else {
      const double s = std::max(std::abs(std::sin(0.5 * term.offset * h)), 1e-3);
      sum += term.weight * 2.0 * h / s;
    }
  }
  return sum.value() / std::numbers::pi;
}

double aliasing_bound(const Spectrum& spectrum, double lambda, double c, double h) {
  const double period = 2.0 * std::numbers::pi / h;
  const double q = std::exp(-period * c);
  double bound = 0.0;
  double damping = 1.0;
  constexpr int kExplicitImages = 16;
  for (int k = 1; k <= kExplicitImages; ++k) {
    damping *= q;
    bound += static_cast<double>(counting(spectrum, lambda + k * period, CountingMode::inclusive)) *
             damping;
  }
  return bound + static_cast<double>(spectrum.total_count()) * damping * q / (1.0 - q);
}

Complex contour_sample(std::span<const ActiveTerm> terms, double c, double omega) {
  CompensatedSum<Complex> sum;
  for (const auto& term : terms) {
    sum += term.weight * std::polar(1.0, term.offset * omega);
  }
  return sum.value() / Complex(c, omega);
}

InversionConfig resolve_config(const Spectrum& spectrum, double lambda,
                               const InversionConfig& requested, std::vector<ActiveTerm>& terms) {
  InversionConfig cfg = requested;
  const bool can_estimate = spectrum.total_count() >= kMinAbscissaEntries;
  const double abscissa = can_estimate ? abscissa_estimate(spectrum).value : 0.0;

  if (cfg.automatic) {
    if (!(cfg.damping > 0.0)) throw ConfigurationError("damping exponent must be positive");
    cfg.c = std::max(2.0 * abscissa, cfg.damping / lambda);
    // 16 samples per period of e^{i lambda w}; the aliased images then sit at
    // lambda + 16 k lambda with weight e^{-16 k c lambda}.
    cfg.h = std::numbers::pi / (8.0 * lambda);
  } else {
    if (!(cfg.c > 0.0)) throw ConfigurationError("contour abscissa c must be positive");
    if (!(cfg.h > 0.0) || !(cfg.h < cfg.T)) {
      throw ConfigurationError("contour step must satisfy 0 < h < T");
    }
    if (can_estimate && cfg.c <= abscissa) {
      throw ConfigurationError("contour abscissa c must exceed the abscissa of convergence estimate " +
                               format_real(abscissa));
    }
  }
  if (cfg.c * lambda > kMaxExponent) {
    throw ConfigurationError("e^{c*lambda} overflows; choose a smaller c*lambda (currently " +
                             format_real(cfg.c * lambda) + ")");
  }

  terms = active_terms(spectrum, lambda, cfg.c);
  if (cfg.automatic) {
    const double numerator = truncation_numerator(terms, cfg.c, cfg.h);
    const double wanted = numerator / cfg.truncation_tolerance;
    cfg.T = std::clamp(wanted, 64.0 * cfg.h, cfg.max_height_factor * cfg.c);
    cfg.T = std::max(cfg.T, 2.0 * cfg.h);
  }
  return cfg;
}

}  // namespace

AbscissaEstimate abscissa_estimate(const Spectrum& spectrum) {
  const std::uint64_t total = spectrum.total_count();
  if (total < kMinAbscissaEntries) {
    throw InsufficientData("abscissa estimate needs at least 32 eigenvalues, got " +
                           std::to_string(total));
  }
  AbscissaEstimate estimate;
  bool any = false;
  const auto entries = spectrum.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::uint64_t n = spectrum.count_before(i + 1);
    if (2 * n <= total || entries[i].value <= 0.0) continue;
    const double ratio = std::log(static_cast<double>(n)) / entries[i].value;
    any = true;
    estimate.value = std::max(estimate.value, ratio);
    if (4 * n <= 3 * total) {
      estimate.third_quarter_max = std::max(estimate.third_quarter_max, ratio);
    } else {
      estimate.last_quarter_max = std::max(estimate.last_quarter_max, ratio);
    }
  }
  if (!any) {
    throw InsufficientData("upper half of the spectrum has no positive eigenvalue");
  }
  const double reference = std::max(estimate.third_quarter_max, estimate.last_quarter_max);
  const double change = estimate.last_quarter_max - estimate.third_quarter_max;
  if (reference > 0.0 && change > 0.05 * reference) {
    estimate.trend = AbscissaTrend::increasing;
  } else if (reference > 0.0 && -change > 0.05 * reference) {
    estimate.trend = AbscissaTrend::decreasing;
  }
  return estimate;
}

InversionResult bromwich_invert(const Spectrum& spectrum, double lambda,
                                const InversionConfig& config) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be a finite positive number");
  }
  std::vector<ActiveTerm> terms;
  InversionResult result;
  result.config_used = resolve_config(spectrum, lambda, config, terms);
  const double c = result.config_used.c;
  const double h = result.config_used.h;
  const auto steps = static_cast<std::size_t>(std::ceil(result.config_used.T / h));
  result.config_used.T = static_cast<double>(steps) * h;
  const double height = result.config_used.T;

  // F(-w) = conj F(w); check it on one symmetric pair before folding the
  // integral onto w >= 0.
  const Complex plus = contour_sample(terms, c, h);
  const Complex minus = contour_sample(terms, c, -h);
  double magnitude = 0.0;
  for (const auto& term : terms) magnitude += term.weight;
  if (std::abs((plus + minus).imag()) > 1e-10 * std::max(1.0, magnitude / std::abs(Complex(c, h)))) {
    throw std::logic_error("contour integrand violates conjugate symmetry");
  }

  // Trapezoid over w = k h, k = 0..steps. Each term's phase e^{i offset w}
  // advances by a fixed rotation per step.
  std::vector<Complex> phase(terms.size());
  std::vector<Complex> rotation(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    rotation[j] = std::polar(1.0, terms[j].offset * h);
  }
  CompensatedSum<double> total;
  double half_value = 0.0;
  const std::size_t half = steps / 2;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double omega = static_cast<double>(k) * h;
    if (k % kResyncInterval == 0) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        phase[j] = std::polar(1.0, terms[j].offset * omega);
      }
    }
    Complex g{0.0, 0.0};
    for (std::size_t j = 0; j < terms.size(); ++j) {
      g += terms[j].weight * phase[j];
      phase[j] *= rotation[j];
    }
    const double sample = (g / Complex(c, omega)).real();
    const double weight = (k == 0 || k == steps) ? 0.5 : 1.0;
    if (k == half) {
      half_value = total.value() + 0.5 * sample;
    }
    total += weight * sample;
  }

  const double scale = h / std::numbers::pi;
  result.value = scale * total.value();
  result.oscillation_estimate = std::abs(scale * (total.value() - half_value));
  result.truncation_bound = truncation_numerator(terms, c, h) / height;
  result.discretization_bound = aliasing_bound(spectrum, lambda, c, h);
  return result;
}

std::string InversionProfile::to_csv() const {
  CsvWriter csv({"lambda", "value", "oscillation_estimate", "rounded", "oracle", "match"});
  for (const auto& row : rows) {
    csv.real(row.lambda);
    if (row.result) {
      csv.real(row.result->value).real(row.result->oscillation_estimate).integer(row.rounded);
    } else {
      csv.text("nan").text("nan").text("");
    }
    csv.real(row.oracle).text(row.match ? "true" : "false").end_row();
  }
  return csv.str();
}

bool InversionProfile::all_match() const {
  return std::all_of(rows.begin(), rows.end(), [](const InversionRow& r) { return r.match; });
}

InversionProfile invert_profile(const Spectrum& spectrum, std::vector<double> grid,
                                const InversionConfig& config, double tolerance) {
  if (grid.empty()) {
    throw DomainError("inversion grid is empty");
  }
  std::sort(grid.begin(), grid.end());
  InversionProfile profile;
  profile.rows.reserve(grid.size());
  for (const double lambda : grid) {
    InversionRow row;
    row.lambda = lambda;
    const auto strict = counting(spectrum, lambda, CountingMode::strict);
    row.oracle = static_cast<double>(strict);
    if (const auto index = spectrum.find_exact(lambda)) {
      row.on_eigenvalue = true;
      row.oracle += 0.5 * static_cast<double>(spectrum.entries()[*index].multiplicity);
    }
    try {
      row.result = bromwich_invert(spectrum, lambda, config);
      row.rounded = std::llround(row.result->value);
      const bool close = std::abs(row.result->value - row.oracle) <= tolerance;
      row.match = close && (row.on_eigenvalue || row.rounded == static_cast<long long>(strict));
    } catch (const Error& e) {
      row.error = e.what();
    }
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace heatcount
