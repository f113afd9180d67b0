#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rmflab/ntcore.hpp"

namespace rmflab {

enum class CoeffFamily { kDense, kAllOnes, kRough, kInterval, kAdditiveChar, kGeometric };

// A weight sequence a(1..N), either user-supplied or one of the named
// families. Families materialize to a dense vector at construction, so all
// downstream code sees one representation; 0/1-valued families additionally
// carry a byte mask for the indicator fast path in partial sums.
class CoefficientSpec {
 public:
  static CoefficientSpec dense(std::vector<std::complex<double>> values);
  static CoefficientSpec all_ones(std::int64_t n);
  static CoefficientSpec rough(std::int64_t x, double r, const SpfTable& spf);
  // Indicator of the interval (x, x+y], materialized over [1, x+y].
  static CoefficientSpec interval(std::int64_t x, std::int64_t y);
  // a(n) = e^{2 pi i n theta}.
  static CoefficientSpec additive_char(std::int64_t n, double theta);
  // Indicator of {p, p^2, ..., p^K}, materialized over [1, p^K].
  static CoefficientSpec geometric(std::int64_t p, int k);

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  CoeffFamily family() const { return family_; }
  // values()[i] is a(i+1).
  const std::vector<std::complex<double>>& values() const { return values_; }
  bool is_indicator() const { return !mask_.empty(); }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::string& describe() const { return describe_; }

 private:
  CoefficientSpec() = default;
  CoeffFamily family_ = CoeffFamily::kDense;
  std::vector<std::complex<double>> values_;
  std::vector<std::uint8_t> mask_;  // mask_[i] = 1 iff a(i+1) = 1, empty unless 0/1-valued
  std::string describe_;
};

// a(n) -> a(n) n^{it}. Unit-modulus reweighting; leaves |a(n)| and the
// multiplicative energy unchanged.
CoefficientSpec twist(const CoefficientSpec& coeffs, double t);

}  // namespace rmflab
