#include "heatcount/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatcount/compensated_sum.hpp"
#include "heatcount/errors.hpp"
#include "heatcount/eval_table.hpp"

namespace heatcount {

namespace {

void validate(const SmoothingConfig& config) {
  if (!(config.beta > 0.0) || !std::isfinite(config.beta)) {
    throw DomainError("beta must be a finite positive number");
  }
  if (!(config.exponent_cap > 0.0) || config.exponent_cap > 709.0) {
    throw DomainError("exponent cap must lie in (0, 709]");
  }
}

// 1 / (e^x + 1) with saturation outside [-cap, cap].
double occupation(double x, double cap) {
  if (x > cap) return 0.0;
  if (x < -cap) return 1.0;
  return 1.0 / (std::exp(x) + 1.0);
}

}  // namespace

double smoothed_counting(const Spectrum& spectrum, double lambda, const SmoothingConfig& config) {
  validate(config);
  CompensatedSum<double> sum;
  for (const auto& e : spectrum.entries()) {
    const double x = config.beta * (e.value - lambda);
    if (x > config.exponent_cap) break;
    sum += static_cast<double>(e.multiplicity) * occupation(x, config.exponent_cap);
  }
  return sum.value();
}

double smoothing_deviation(const Spectrum& spectrum, double lambda, const SmoothingConfig& config) {
  validate(config);
  CompensatedSum<double> sum;
  for (const auto& e : spectrum.entries()) {
    const double mult = static_cast<double>(e.multiplicity);
    const double x = config.beta * (e.value - lambda);
    if (x > config.exponent_cap) break;
    if (e.value < lambda) {
      // occupation(x) - 1 = -occupation(-x)
      sum += -mult * occupation(-x, config.exponent_cap);
    } else {
      sum += mult * occupation(x, config.exponent_cap);
    }
  }
  return sum.value();
}

double smoothing_error_bound(const Spectrum& spectrum, double lambda, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be a finite positive number");
  }
  if (spectrum.find_exact(lambda)) {
    throw DomainError("lambda is an eigenvalue; the smoothed count converges to the jump "
                      "midpoint N(lambda-) + mult/2 there, not to N(lambda)");
  }
  CompensatedSum<double> sum;
  for (const auto& e : spectrum.entries()) {
    const double x = beta * std::abs(e.value - lambda);
    if (e.value > lambda && x > 745.0) break;
    sum += static_cast<double>(e.multiplicity) * std::min(1.0 / (std::exp(x) + 1.0), std::exp(-x));
  }
  return sum.value();
}

std::string BetaSweep::to_csv() const {
  CsvWriter csv({"beta", "value", "deviation", "bound"});
  for (const auto& row : rows) {
    csv.real(row.beta).real(row.value).real(row.deviation).real(row.bound).end_row();
  }
  return csv.str();
}

BetaSweep beta_sweep(const Spectrum& spectrum, double lambda, std::vector<double> betas,
                     double exponent_cap) {
  if (betas.empty()) {
    throw DomainError("beta list is empty");
  }
  std::sort(betas.begin(), betas.end());
  const bool on_spectrum = spectrum.find_exact(lambda).has_value();
  BetaSweep sweep;
  sweep.lambda = lambda;
  for (const double beta : betas) {
    BetaSweepRow row;
    row.beta = beta;
    try {
      const SmoothingConfig config{beta, exponent_cap};
      row.value = smoothed_counting(spectrum, lambda, config);
      row.deviation = std::abs(smoothing_deviation(spectrum, lambda, config));
      row.bound = on_spectrum ? std::numeric_limits<double>::quiet_NaN()
                              : smoothing_error_bound(spectrum, lambda, beta);
    } catch (const Error& e) {
      row.value = row.deviation = row.bound = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    sweep.rows.push_back(std::move(row));
  }
  return sweep;
}

double default_beta(const Spectrum& spectrum, double lambda) {
  const double gap = spectrum.nearest_gap(lambda);
  if (gap > 0.0 && std::isfinite(gap)) {
    return 50.0 / gap;
  }
  // On an eigenvalue: use the spacing to the neighbouring eigenvalues.
  const auto index = spectrum.find_exact(lambda);
  const auto entries = spectrum.entries();
  double spacing = std::numeric_limits<double>::infinity();
  if (index && *index > 0) spacing = lambda - entries[*index - 1].value;
  if (index && *index + 1 < entries.size()) {
    spacing = std::min(spacing, entries[*index + 1].value - lambda);
  }
  return std::isfinite(spacing) ? 50.0 / spacing : 50.0;
}

}  // namespace heatcount
