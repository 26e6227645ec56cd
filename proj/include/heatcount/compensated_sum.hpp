#pragma once

#include <cmath>
#include <complex>

namespace heatcount {

/*
  Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact when
  an addend is larger in magnitude than the running sum, which happens at the
  start of every heat-trace sum (largest term first).
*/
template <typename Value>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Value value) {
    const Value t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  Value value() const { return sum_ + compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

template <typename Real>
class CompensatedSum<std::complex<Real>> {
 public:
  CompensatedSum& operator+=(std::complex<Real> value) {
    re_ += value.real();
    im_ += value.imag();
    return *this;
  }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace heatcount
