#include "rmflab/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace rmflab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::vector<std::uint8_t> mask_of(const std::vector<std::complex<double>>& values) {
  std::vector<std::uint8_t> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == std::complex<double>(1.0, 0.0)) {
      mask[i] = 1;
    } else if (values[i] == std::complex<double>(0.0, 0.0)) {
      mask[i] = 0;
    } else {
      return {};
    }
  }
  return mask;
}

}  // namespace

CoefficientSpec CoefficientSpec::dense(std::vector<std::complex<double>> values) {
  if (values.empty()) throw std::domain_error("CoefficientSpec: N must be >= 1");
  CoefficientSpec out;
  out.family_ = CoeffFamily::kDense;
  out.values_ = std::move(values);
  out.mask_ = mask_of(out.values_);
  out.describe_ = "dense(N=" + std::to_string(out.values_.size()) + ")";
  return out;
}

CoefficientSpec CoefficientSpec::all_ones(std::int64_t n) {
  if (n < 1) throw std::domain_error("CoefficientSpec: N must be >= 1");
  CoefficientSpec out;
  out.family_ = CoeffFamily::kAllOnes;
  out.values_.assign(static_cast<std::size_t>(n), {1.0, 0.0});
  out.mask_.assign(static_cast<std::size_t>(n), 1);
  out.describe_ = "all_ones(N=" + std::to_string(n) + ")";
  return out;
}

CoefficientSpec CoefficientSpec::rough(std::int64_t x, double r, const SpfTable& spf) {
  if (x < 1) throw std::domain_error("CoefficientSpec: x must be >= 1");
  if (static_cast<std::uint64_t>(x) > spf.limit()) {
    throw std::domain_error("CoefficientSpec::rough: x exceeds table limit");
  }
  CoefficientSpec out;
  out.family_ = CoeffFamily::kRough;
  out.values_.assign(static_cast<std::size_t>(x), {0.0, 0.0});
  out.mask_.assign(static_cast<std::size_t>(x), 0);
  out.values_[0] = 1.0;
  out.mask_[0] = 1;
  for (std::int64_t n = 2; n <= x; ++n) {
    if (static_cast<double>(spf.spf(static_cast<std::uint64_t>(n))) >= r) {
      out.values_[static_cast<std::size_t>(n - 1)] = 1.0;
      out.mask_[static_cast<std::size_t>(n - 1)] = 1;
    }
  }
  out.describe_ = "rough(x=" + std::to_string(x) + ",R=" + std::to_string(r) + ")";
  return out;
}

CoefficientSpec CoefficientSpec::interval(std::int64_t x, std::int64_t y) {
  if (x < 0 || y < 1) throw std::domain_error("CoefficientSpec::interval: need x >= 0, y >= 1");
  CoefficientSpec out;
  out.family_ = CoeffFamily::kInterval;
  const std::int64_t n = x + y;
  out.values_.assign(static_cast<std::size_t>(n), {0.0, 0.0});
  out.mask_.assign(static_cast<std::size_t>(n), 0);
  for (std::int64_t m = x + 1; m <= n; ++m) {
    out.values_[static_cast<std::size_t>(m - 1)] = 1.0;
    out.mask_[static_cast<std::size_t>(m - 1)] = 1;
  }
  out.describe_ = "interval(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ")";
  return out;
}

CoefficientSpec CoefficientSpec::additive_char(std::int64_t n, double theta) {
  if (n < 1) throw std::domain_error("CoefficientSpec: N must be >= 1");
  CoefficientSpec out;
  out.family_ = CoeffFamily::kAdditiveChar;
  out.values_.resize(static_cast<std::size_t>(n));
  for (std::int64_t m = 1; m <= n; ++m) {
    const double phase = kTwoPi * std::fmod(static_cast<double>(m) * theta, 1.0);
    out.values_[static_cast<std::size_t>(m - 1)] = {std::cos(phase), std::sin(phase)};
  }
  out.describe_ = "additive_char(N=" + std::to_string(n) + ",theta=" + std::to_string(theta) + ")";
  return out;
}

CoefficientSpec CoefficientSpec::geometric(std::int64_t p, int k) {
  if (p < 2 || k < 1) throw std::domain_error("CoefficientSpec::geometric: need p >= 2, K >= 1");
  constexpr std::int64_t kMaxMaterialize = 2'000'000;
  std::int64_t n = 1;
  for (int i = 0; i < k; ++i) {
    if (n > kMaxMaterialize / p) {
      throw std::domain_error("CoefficientSpec::geometric: p^K too large to materialize");
    }
    n *= p;
  }
  CoefficientSpec out;
  out.family_ = CoeffFamily::kGeometric;
  out.values_.assign(static_cast<std::size_t>(n), {0.0, 0.0});
  out.mask_.assign(static_cast<std::size_t>(n), 0);
  std::int64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    out.values_[static_cast<std::size_t>(q - 1)] = 1.0;
    out.mask_[static_cast<std::size_t>(q - 1)] = 1;
  }
  out.describe_ = "geometric(p=" + std::to_string(p) + ",K=" + std::to_string(k) + ")";
  return out;
}

CoefficientSpec twist(const CoefficientSpec& coeffs, double t) {
  std::vector<std::complex<double>> twisted(coeffs.values().size());
  for (std::size_t i = 0; i < twisted.size(); ++i) {
    const double phase = t * std::log(static_cast<double>(i + 1));
    twisted[i] = coeffs.values()[i] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return CoefficientSpec::dense(std::move(twisted));
}

}  // namespace rmflab
