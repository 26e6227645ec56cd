#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatcount/spectrum.hpp"

namespace heatcount {

struct WeylCheckRow {
  double t = 0.0;
  double heat_trace = 0.0;
  std::uint64_t count_at_inverse = 0;  // N(1/t), strict
  double ratio = 0.0;                  // K(t) / N(1/t)
  double deviation = 0.0;              // |ratio - 1|
  /// "ok", "coverage" (1/t beyond 0.8 * cutoff) or "empty" (N(1/t) = 0).
  std::string flag = "ok";
};

/// Measures how closely K(t) tracks N(1/t); the two coincide in the small-t
/// limit when the eigenvalue density is constant.
struct WeylCheckReport {
  std::vector<WeylCheckRow> rows;  // sorted by t
  double density_constant = 0.0;
  double density_constancy_deviation = 0.0;

  /// `t,K,N_inv,ratio,flag`
  std::string to_csv() const;
};

WeylCheckReport weyl_check(const Spectrum& spectrum, std::vector<double> t_grid);

/// K(t) ~ amplitude * t^{-exponent} over [t_lo, t_hi].
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double fit_residual = 0.0;  // max |A t^{-p} / K(t) - 1| on the fit points
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Leading Tauberian term: N(lambda) ~ A lambda^p / Gamma(p + 1).
struct TauberianEstimate {
  PowerLawFit fit;
  double lambda_probe = 0.0;
  double predicted = 0.0;
  std::uint64_t actual = 0;
  double relative_gap = 0.0;  // (predicted - actual) / actual
  std::vector<std::string> warnings;

  /// `A,p,residual,lambda_probe,predicted,actual,relative_gap`
  std::string to_csv() const;
};

/// Log-log least squares of K over `points` log-spaced t values in
/// [t_lo, t_hi], then the first-term prediction at lambda_probe.
TauberianEstimate tauberian_first_term(const Spectrum& spectrum, double t_lo, double t_hi,
                                       double lambda_probe, std::size_t points = 16);

}  // namespace heatcount
