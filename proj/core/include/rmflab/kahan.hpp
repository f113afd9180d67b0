#pragma once

#include <complex>

namespace rmflab {

// Compensated (Kahan) accumulator. Long Monte Carlo reductions add 1e4..1e6
// terms of comparable size; the compensation keeps the result independent of
// harmless regrouping at the 1e-12 level.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  KahanSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  KahanComplexSum& operator+=(std::complex<double> v) {
    add(v);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

}  // namespace rmflab
