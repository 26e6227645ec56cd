#include "heatcount/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatcount/compensated_sum.hpp"
#include "heatcount/errors.hpp"

namespace heatcount {

namespace {

// Beyond this exponent e^{-x} underflows to zero in double precision.
constexpr double kUnderflowExponent = 745.0;

std::size_t upper_index(const Spectrum& spectrum, double lambda, CountingMode mode) {
  const auto entries = spectrum.entries();
  const auto it =
      mode == CountingMode::strict
          ? std::lower_bound(entries.begin(), entries.end(), lambda,
                             [](const SpectrumEntry& e, double v) { return e.value < v; })
          : std::upper_bound(entries.begin(), entries.end(), lambda,
                             [](double v, const SpectrumEntry& e) { return v < e.value; });
  return static_cast<std::size_t>(it - entries.begin());
}

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("t must be a finite positive number");
  }
}

// Adaptive Simpson on one panel with Richardson correction.
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(std::size_t max_depth, std::size_t evaluation_budget)
      : max_depth_(max_depth), budget_(evaluation_budget) {}

  template <typename F>
  double integrate(const F& f, double a, double b, double relative_tolerance, double& error) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    evaluations_ += 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tolerance = relative_tolerance * std::abs(whole) + 1e-300;
    return recurse(f, a, b, fa, fm, fb, whole, tolerance, 0, error);
  }

  bool exhausted() const noexcept { return exhausted_; }

 private:
  template <typename F>
  double recurse(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                 double tolerance, std::size_t depth, double& error) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evaluations_ += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tolerance) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth_ || evaluations_ >= budget_) {
      exhausted_ = true;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * tolerance, depth + 1, error) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * tolerance, depth + 1, error);
  }

  std::size_t max_depth_;
  std::size_t budget_;
  std::size_t evaluations_ = 0;
  bool exhausted_ = false;
};

LaplaceResult laplace_step_exact(const Spectrum& spectrum, double t) {
  const double upper = spectrum.cutoff();
  // t * integral_{lambda_n}^{upper} e^{-lambda t} = e^{-lambda_n t} (1 - e^{-(upper - lambda_n) t})
  CompensatedSum<double> sum;
  for (const auto& e : spectrum.entries()) {
    const double decay = std::exp(-e.value * t);
    if (decay == 0.0) break;
    sum += static_cast<double>(e.multiplicity) * decay * -std::expm1(-(upper - e.value) * t);
  }
  LaplaceResult result;
  result.value = sum.value();
  result.upper_limit = upper;
  result.truncation_term =
      static_cast<double>(counting(spectrum, upper, CountingMode::inclusive)) * std::exp(-upper * t);
  return result;
}

LaplaceResult laplace_quadrature(const Spectrum& spectrum, double t) {
  constexpr double kPanelTolerance = 1e-10;
  constexpr double kStopRatio = 1e-12;
  AdaptiveSimpson simpson(50, 200'000'000);

  const auto entries = spectrum.entries();
  const double cutoff = spectrum.cutoff();
  CompensatedSum<double> integral;
  double error = 0.0;
  double upper = cutoff;

  // N is constant between consecutive eigenvalues, so the eigenvalues are the
  // panel boundaries and every panel integrand is smooth.
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double a = entries[i].value;
    const double b = i + 1 < entries.size() ? std::min(entries[i + 1].value, cutoff) : cutoff;
    if (b > a) {
      const double level = static_cast<double>(counting(spectrum, 0.5 * (a + b)));
      const auto integrand = [level, t](double x) { return level * std::exp(-x * t); };
      integral += simpson.integrate(integrand, a, b, kPanelTolerance, error);
    }
    if (b >= cutoff) {
      upper = cutoff;
      break;
    }
    const double remainder =
        static_cast<double>(counting(spectrum, b, CountingMode::inclusive)) * std::exp(-b * t);
    if (remainder < kStopRatio * t * integral.value()) {
      upper = b;
      break;
    }
  }

  LaplaceResult result;
  result.value = t * integral.value();
  result.error_estimate = t * error;
  result.upper_limit = upper;
  result.truncation_term =
      static_cast<double>(counting(spectrum, upper, CountingMode::inclusive)) * std::exp(-upper * t);
  if (simpson.exhausted()) {
    throw AccuracyError("adaptive quadrature did not converge within its subdivision cap",
                        result.value, result.error_estimate);
  }
  return result;
}

}  // namespace

std::uint64_t counting(const Spectrum& spectrum, double lambda, CountingMode mode) {
  return spectrum.count_before(upper_index(spectrum, lambda, mode));
}

TailBound heat_trace_tail(const Spectrum& spectrum, double t) {
  require_positive_time(t);
  TailBound tail;
  tail.truncation_cutoff = spectrum.cutoff();
  const double cutoff = spectrum.cutoff();

  switch (spectrum.kind()) {
    case GeneratorKind::interval: {
      const auto length = spectrum.param("length");
      const auto count = spectrum.param("count");
      if (!length || !count) return tail;
      const double k2 = (std::numbers::pi / *length) * (std::numbers::pi / *length);
      const double next = *count + 1.0;
      // sum_{j>=0} e^{-(M+1+j)^2 k^2 t} <= e^{-(M+1)^2 k^2 t} / (1 - e^{-2 (M+1) k^2 t})
      tail.bound_value = std::exp(-next * next * k2 * t) / -std::expm1(-2.0 * next * k2 * t);
      tail.valid = true;
      break;
    }
    case GeneratorKind::constant_density: {
      const auto density = spectrum.param("density");
      const auto count = spectrum.param("count");
      if (!density || !count) return tail;
      // Exact remainder of the geometric series.
      tail.bound_value = std::exp(-(*count + 1.0) * t / *density) / -std::expm1(-t / *density);
      tail.valid = true;
      break;
    }
    case GeneratorKind::rectangle: {
      const auto a = spectrum.param("a");
      const auto b = spectrum.param("b");
      if (!a || !b) return tail;
      // N(x) <= a b x / (4 pi); tail <= t int_cutoff^inf N(x) e^{-xt} dx.
      const double slope = *a * *b / (4.0 * std::numbers::pi);
      tail.bound_value = slope * std::exp(-cutoff * t) * (cutoff + 1.0 / t);
      tail.valid = true;
      break;
    }
    case GeneratorKind::torus: {
      // N(x) <= pi (sqrt(x) + 1)^2 <= 2 pi (x + 1).
      tail.bound_value = 2.0 * std::numbers::pi * std::exp(-cutoff * t) * (cutoff + 1.0 + 1.0 / t);
      tail.valid = true;
      break;
    }
    case GeneratorKind::file:
      break;
  }
  return tail;
}

HeatTrace heat_trace(const Spectrum& spectrum, double t) {
  require_positive_time(t);
  CompensatedSum<double> sum;
  for (const auto& e : spectrum.entries()) {
    if (e.value * t > kUnderflowExponent) break;
    sum += static_cast<double>(e.multiplicity) * std::exp(-e.value * t);
  }
  return {sum.value(), heat_trace_tail(spectrum, t)};
}

double partial_exponential_sum(const Spectrum& spectrum, double u, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("t must be nonnegative");
  }
  const std::size_t end = upper_index(spectrum, u, CountingMode::inclusive);
  const auto entries = spectrum.entries();
  CompensatedSum<double> sum;
  for (std::size_t i = 0; i < end; ++i) {
    if (entries[i].value * t > kUnderflowExponent) break;
    sum += static_cast<double>(entries[i].multiplicity) * std::exp(-entries[i].value * t);
  }
  return sum.value();
}

LaplaceResult laplace_of_counting(const Spectrum& spectrum, double t, LaplaceMethod method) {
  require_positive_time(t);
  return method == LaplaceMethod::step_exact ? laplace_step_exact(spectrum, t)
                                             : laplace_quadrature(spectrum, t);
}

DensityEstimate density_estimate(const Spectrum& spectrum, double bin_width, double lambda_lo,
                                 double lambda_hi) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw DomainError("bin width must be a finite positive number");
  }
  if (!(lambda_lo < lambda_hi) || lambda_lo < 0.0) {
    throw DomainError("density range must satisfy 0 <= lo < hi");
  }
  if (lambda_hi > spectrum.cutoff()) {
    throw DomainError("density range extends beyond the spectrum cutoff");
  }

  const auto bins =
      static_cast<std::size_t>(std::ceil((lambda_hi - lambda_lo) / bin_width - 1e-9));
  DensityEstimate estimate;
  estimate.bins.rows.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double a = lambda_lo + static_cast<double>(i) * bin_width;
    const double b = std::min(lambda_lo + static_cast<double>(i + 1) * bin_width, lambda_hi);
    const double width = b - a;
    const auto in_bin = counting(spectrum, b, CountingMode::inclusive) -
                        counting(spectrum, a, CountingMode::inclusive);
    estimate.bins.rows.push_back({0.5 * (a + b), static_cast<double>(in_bin) / width, 1.0 / width});
  }

  const auto total = counting(spectrum, lambda_hi, CountingMode::inclusive) -
                     counting(spectrum, lambda_lo, CountingMode::inclusive);
  estimate.mean_density = static_cast<double>(total) / (lambda_hi - lambda_lo);
  if (estimate.mean_density > 0.0) {
    for (const auto& row : estimate.bins.rows) {
      estimate.constancy_deviation =
          std::max(estimate.constancy_deviation,
                   std::abs(row.value - estimate.mean_density) / estimate.mean_density);
    }
  }
  return estimate;
}

}  // namespace heatcount
