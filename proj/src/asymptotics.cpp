#include "heatcount/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatcount/errors.hpp"
#include "heatcount/eval_table.hpp"
#include "heatcount/transforms.hpp"

namespace heatcount {

namespace {

constexpr double kCoverageFraction = 0.8;
constexpr double kDensityBins = 10.0;
constexpr double kPoorFitResidual = 0.05;
constexpr double kMaxRelativeTail = 1e-3;

}  // namespace

std::string WeylCheckReport::to_csv() const {
  CsvWriter csv({"t", "K", "N_inv", "ratio", "flag"});
  for (const auto& row : rows) {
    csv.real(row.t)
        .real(row.heat_trace)
        .integer(static_cast<long long>(row.count_at_inverse))
        .real(row.ratio)
        .text(row.flag)
        .end_row();
  }
  return csv.str();
}

WeylCheckReport weyl_check(const Spectrum& spectrum, std::vector<double> t_grid) {
  if (t_grid.empty()) {
    throw DomainError("t grid is empty");
  }
  for (const double t : t_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("every t must be a finite positive number");
  }
  std::sort(t_grid.begin(), t_grid.end());

  WeylCheckReport report;
  const double coverage = kCoverageFraction * spectrum.cutoff();
  if (coverage > 0.0) {
    const auto density = density_estimate(spectrum, coverage / kDensityBins, 0.0, coverage);
    report.density_constant = density.mean_density;
    report.density_constancy_deviation = density.constancy_deviation;
  }

  for (const double t : t_grid) {
    WeylCheckRow row;
    row.t = t;
    row.heat_trace = heat_trace(spectrum, t).value;
    const double lambda = 1.0 / t;
    row.count_at_inverse = counting(spectrum, lambda, CountingMode::strict);
    if (lambda > coverage) {
      row.flag = "coverage";
      row.ratio = row.deviation = std::numeric_limits<double>::quiet_NaN();
    } else if (row.count_at_inverse == 0) {
      row.flag = "empty";
      row.ratio = row.deviation = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.ratio = row.heat_trace / static_cast<double>(row.count_at_inverse);
      row.deviation = std::abs(row.ratio - 1.0);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string TauberianEstimate::to_csv() const {
  CsvWriter csv({"A", "p", "residual", "lambda_probe", "predicted", "actual", "relative_gap"});
  csv.real(fit.amplitude)
      .real(fit.exponent)
      .real(fit.fit_residual)
      .real(lambda_probe)
      .real(predicted)
      .integer(static_cast<long long>(actual))
      .real(relative_gap)
      .end_row();
  return csv.str();
}

TauberianEstimate tauberian_first_term(const Spectrum& spectrum, double t_lo, double t_hi,
                                       double lambda_probe, std::size_t points) {
  if (!(t_lo > 0.0) || !(t_lo < t_hi) || !std::isfinite(t_hi)) {
    throw DomainError("fit window must satisfy 0 < t_lo < t_hi");
  }
  if (points < 8) {
    throw InvalidParameter("points", "the power-law fit needs at least 8 points");
  }
  if (!(lambda_probe > 0.0) || lambda_probe > spectrum.cutoff()) {
    throw DomainError("lambda probe must lie in (0, cutoff]");
  }

  TauberianEstimate estimate;
  estimate.lambda_probe = lambda_probe;
  estimate.fit.t_lo = t_lo;
  estimate.fit.t_hi = t_hi;

  const auto lowest = heat_trace(spectrum, t_lo);
  if (!lowest.tail.valid) {
    estimate.warnings.push_back("no tail bound for this spectrum; truncation error in K is unchecked");
  } else if (lowest.tail.bound_value > kMaxRelativeTail * lowest.value) {
    throw DomainError("t_lo lies outside the range where the truncated heat trace is accurate "
                      "(tail bound " + format_real(lowest.tail.bound_value) + ")");
  }

  std::vector<double> xs(points);
  std::vector<double> ys(points);
  std::vector<double> traces(points);
  const double log_lo = std::log(t_lo);
  const double log_step = (std::log(t_hi) - log_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = log_lo + static_cast<double>(i) * log_step;
    traces[i] = heat_trace(spectrum, std::exp(xs[i])).value;
    if (!(traces[i] > 0.0)) {
      throw DomainError("heat trace underflows inside the fit window");
    }
    ys[i] = std::log(traces[i]);
  }

  const double n = static_cast<double>(points);
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  const double slope = sxy / sxx;
  estimate.fit.exponent = -slope;
  estimate.fit.amplitude = std::exp(mean_y - slope * mean_x);
  for (std::size_t i = 0; i < points; ++i) {
    const double model = estimate.fit.amplitude * std::exp(slope * xs[i]);
    estimate.fit.fit_residual = std::max(estimate.fit.fit_residual, std::abs(model / traces[i] - 1.0));
  }
  if (estimate.fit.fit_residual > kPoorFitResidual) {
    estimate.warnings.push_back("poor power-law fit: residual " +
                                format_real(estimate.fit.fit_residual) + " exceeds 5%");
  }

  const double p = estimate.fit.exponent;
  estimate.predicted = estimate.fit.amplitude * std::pow(lambda_probe, p) / std::tgamma(p + 1.0);
  estimate.actual = counting(spectrum, lambda_probe, CountingMode::strict);
  estimate.relative_gap =
      estimate.actual > 0
          ? (estimate.predicted - static_cast<double>(estimate.actual)) /
                static_cast<double>(estimate.actual)
          : std::numeric_limits<double>::quiet_NaN();
  return estimate;
}

}  // namespace heatcount
