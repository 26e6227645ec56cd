#pragma once

#include <string>
#include <vector>

#include "heatcount/spectrum.hpp"

namespace heatcount {

struct SmoothingConfig {
  double beta = 1.0;
  /// |beta (lambda_n - lambda)| beyond this saturates the term to 0 or mult.
  double exponent_cap = 700.0;
};

/// Fermi-Dirac smoothed count sum_n mult_n / (e^{beta (lambda_n - lambda)} + 1).
double smoothed_counting(const Spectrum& spectrum, double lambda, const SmoothingConfig& config);

/// Signed smoothed_counting - N_strict(lambda), accumulated term by term so it
/// stays accurate when it is far below the ulp of the count itself.
double smoothing_deviation(const Spectrum& spectrum, double lambda, const SmoothingConfig& config);

/// sum_n mult_n min(1 / (e^{beta |lambda_n - lambda|} + 1), e^{-beta |lambda_n - lambda|}),
/// which dominates |smoothed_counting - N_strict|. lambda must not be an eigenvalue.
double smoothing_error_bound(const Spectrum& spectrum, double lambda, double beta);

struct BetaSweepRow {
  double beta = 0.0;
  double value = 0.0;
  double deviation = 0.0;  // |smoothed - N_strict|
  double bound = 0.0;      // NaN when lambda is an eigenvalue
  std::string error;
};

struct BetaSweep {
  double lambda = 0.0;
  std::vector<BetaSweepRow> rows;  // sorted by beta

  /// `beta,value,deviation,bound`
  std::string to_csv() const;
};

BetaSweep beta_sweep(const Spectrum& spectrum, double lambda, std::vector<double> betas,
                     double exponent_cap = 700.0);

/// 50 / (distance to the nearest eigenvalue): the default sharpness used by the CLI.
double default_beta(const Spectrum& spectrum, double lambda);

}  // namespace heatcount
