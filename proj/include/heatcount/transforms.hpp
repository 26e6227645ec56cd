#pragma once

#include <cstdint>

#include "heatcount/eval_table.hpp"
#include "heatcount/spectrum.hpp"

namespace heatcount {

/// Whether an eigenvalue equal to lambda is counted. The two conventions
/// differ only at eigenvalue abscissae.
enum class CountingMode { strict, inclusive };

/// Bound on the eigenvalues beyond `truncation_cutoff` that the stored
/// spectrum omits. `valid` is false when the spectrum carries no generator
/// metadata to bound them with.
struct TailBound {
  double truncation_cutoff = 0.0;
  double bound_value = 0.0;
  bool valid = false;
};

struct HeatTrace {
  double value = 0.0;
  TailBound tail;
};

/// N(lambda): eigenvalues below (strict) or up to (inclusive) lambda, with multiplicity.
std::uint64_t counting(const Spectrum& spectrum, double lambda,
                       CountingMode mode = CountingMode::strict);

/// K(t) over the stored spectrum plus a bound on the omitted tail. Throws
/// DomainError for t <= 0.
HeatTrace heat_trace(const Spectrum& spectrum, double t);

/// Upper bound on sum over eigenvalues above the cutoff of e^{-lambda t}.
///
/// interval and constant_density bound the missing terms by a geometric
/// series; rectangle and torus integrate e^{-xt} against a linear Weyl-type
/// majorant of the counting function (area of the quarter ellipse, resp.
/// the disk of radius sqrt(x) + 1).
TailBound heat_trace_tail(const Spectrum& spectrum, double t);

/// A(u, t) = sum over lambda_n <= u of mult_n e^{-lambda_n t}.
double partial_exponential_sum(const Spectrum& spectrum, double u, double t);

enum class LaplaceMethod { step_exact, quadrature };

/// t * integral_0^upper_limit N(lambda) e^{-lambda t} d lambda, together with
/// the truncation term N(upper_limit) e^{-upper_limit t} that the integral
/// drops. value + truncation_term reproduces the heat trace of the stored
/// spectrum.
struct LaplaceResult {
  double value = 0.0;
  double truncation_term = 0.0;
  double upper_limit = 0.0;
  double error_estimate = 0.0;
};

LaplaceResult laplace_of_counting(const Spectrum& spectrum, double t, LaplaceMethod method);

struct DensityEstimate {
  EvalTable bins;  // abscissa = bin centre, value = rho, error = one-eigenvalue quantization
  double mean_density = 0.0;
  double constancy_deviation = 0.0;  // max |rho_i - mean| / mean
};

/// Eigenvalue density per unit interval over half-open bins (lo, lo + w], ...
DensityEstimate density_estimate(const Spectrum& spectrum, double bin_width, double lambda_lo,
                                 double lambda_hi);

}  // namespace heatcount
