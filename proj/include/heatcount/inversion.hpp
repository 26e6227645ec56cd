#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heatcount/spectrum.hpp"

namespace heatcount {

/// Vertical Bromwich contour Re(s) = c, truncated at |Im(s)| = T and sampled
/// with trapezoid step h. With `automatic` set, c, T and h are derived from
/// lambda and the spectrum and the explicit fields are ignored.
struct InversionConfig {
  double c = 0.0;
  double T = 0.0;
  double h = 0.0;
  bool automatic = true;

  /// Damping exponent c * lambda used by the automatic contour.
  double damping = 2.0;
  /// Target for the bound on the contour truncation error.
  double truncation_tolerance = 0.02;
  /// The automatic T never exceeds this multiple of c.
  double max_height_factor = 1e5;
};

enum class AbscissaTrend { increasing, decreasing, flat };

struct AbscissaEstimate {
  double value = 0.0;  // max of ln(n_k) / lambda_k over the upper half of the spectrum
  AbscissaTrend trend = AbscissaTrend::flat;
  double third_quarter_max = 0.0;
  double last_quarter_max = 0.0;
};

/// Tail estimate of limsup (ln n) / lambda_n, the abscissa of convergence of
/// K(t) viewed as a Dirichlet series in e^{lambda_n}. Needs >= 32 eigenvalues.
AbscissaEstimate abscissa_estimate(const Spectrum& spectrum);

struct InversionResult {
  double value = 0.0;
  /// |contribution of the contour segment [T/2, T]|.
  double oscillation_estimate = 0.0;
  /// Upper bound on the error from stopping the contour at T.
  double truncation_bound = 0.0;
  /// Bound on the trapezoid aliasing term sum_k N(lambda + 2 pi k / h) e^{-2 pi k c / h}.
  double discretization_bound = 0.0;
  InversionConfig config_used;
};

/// N(lambda) = (e^{c lambda} / pi) int_0^inf Re[K(c + i w) e^{i lambda w} / (c + i w)] dw.
/// Converges to the strict count away from eigenvalues and to
/// N(lambda^-) + mult / 2 at an eigenvalue.
InversionResult bromwich_invert(const Spectrum& spectrum, double lambda,
                                const InversionConfig& config = {});

struct InversionRow {
  double lambda = 0.0;
  std::optional<InversionResult> result;
  /// Strict count off the spectrum, jump midpoint N(lambda^-) + mult / 2 on it.
  double oracle = 0.0;
  bool on_eigenvalue = false;
  long long rounded = 0;
  bool match = false;
  std::string error;
};

struct InversionProfile {
  std::vector<InversionRow> rows;  // sorted by lambda

  /// `lambda,value,oscillation_estimate,rounded,oracle,match`
  std::string to_csv() const;
  bool all_match() const;
};

/// Inverts every grid point. A row matches when |value - oracle| <= tolerance
/// and, off the spectrum, the rounded value equals the oracle. Per-row errors
/// are recorded in the row instead of aborting the batch.
InversionProfile invert_profile(const Spectrum& spectrum, std::vector<double> grid,
                                const InversionConfig& config = {}, double tolerance = 0.1);

}  // namespace heatcount
