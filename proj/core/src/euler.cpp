#include "rmflab/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "rmflab/kahan.hpp"

namespace rmflab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlNode[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr double kGlWeight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

double just_below(double v) {
  return std::nextafter(v, -std::numeric_limits<double>::infinity());
}

}  // namespace

double EulerParams::cap() const {
  if (!k) return x;
  return std::exp(std::log(x) * std::exp(-static_cast<double>(*k + 1)));
}

std::complex<double> log_euler_range(const RmfSample& sample, double a, double b, double sigma,
                                     double t) {
  if (b > static_cast<double>(sample.limit())) {
    throw std::domain_error("log_euler_range: range exceeds sample limit");
  }
  const auto [first, last] = sample.primes().range_open_closed(a, b);
  KahanComplexSum acc;
  for (std::size_t i = first; i < last; ++i) {
    const double p = static_cast<double>(sample.primes().values()[i]);
    const double lp = std::log(p);
    const double r = std::exp(-(0.5 + sigma) * lp);
    const std::complex<double> rot{std::cos(t * lp), -std::sin(t * lp)};
    const std::complex<double> z = sample.phase(i) * r * rot;
    acc.add(-std::log(std::complex<double>(1.0, 0.0) - z));
  }
  return acc.value();
}

std::complex<double> log_increment(const RmfSample& sample, int ell, double sigma, double t,
                                   double x) {
  if (ell < 0) throw std::domain_error("log_increment: ell must be >= 0");
  const double x0 = x > 0.0 ? x : static_cast<double>(sample.limit());
  const double lx = std::log(x0);
  const double a = std::exp(lx * std::exp(-static_cast<double>(ell + 2)));
  const double b = std::exp(lx * std::exp(-static_cast<double>(ell + 1)));
  return log_euler_range(sample, a, b, sigma, t);
}

std::complex<double> log_product(const RmfSample& sample, const EulerParams& params, double t) {
  const double cap = params.cap();
  if (cap < params.r) return {0.0, 0.0};
  return log_euler_range(sample, just_below(params.r), cap, params.sigma, t);
}

int min_grid_points(double x) {
  const int floor_points = static_cast<int>(std::ceil(8.0 * std::log(x)));
  return std::max(64, floor_points);
}

std::vector<double> log_abs_sq_grid(const RmfSample& sample, double a, double b, double sigma,
                                    double t0, double dt, int m) {
  if (m < 1) throw std::domain_error("log_abs_sq_grid: need m >= 1");
  if (b > static_cast<double>(sample.limit())) {
    throw std::domain_error("log_abs_sq_grid: range exceeds sample limit");
  }
  const auto [first, last] = sample.primes().range_open_closed(a, b);
  std::vector<KahanSum> acc(static_cast<std::size_t>(m));
  std::vector<double> prod(static_cast<std::size_t>(m), 1.0);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(m));
  // ln |1-z|^2 accumulated with one log per node per 16 primes; the per-factor
  // values stay within [(1-r)^2, (1+r)^2], so 16 of them cannot leave double
  // range for any sigma > -1/2.
  int batch = 0;
  for (std::size_t i = first; i < last; ++i) {
    const double p = static_cast<double>(sample.primes().values()[i]);
    const double lp = std::log(p);
    const double r = std::exp(-(0.5 + sigma) * lp);
    const double r2 = r * r;
    const std::complex<double> rot{std::cos(dt * lp), -std::sin(dt * lp)};
    std::complex<double> zi =
        sample.phase(i) * r * std::complex<double>{std::cos(t0 * lp), -std::sin(t0 * lp)};
    for (int j = 0; j < m; ++j) {
      prod[static_cast<std::size_t>(j)] *= 1.0 - 2.0 * zi.real() + r2;
      zi *= rot;
    }
    if (++batch == 16 || i + 1 == last) {
      for (int j = 0; j < m; ++j) {
        acc[static_cast<std::size_t>(j)].add(std::log(prod[static_cast<std::size_t>(j)]));
        prod[static_cast<std::size_t>(j)] = 1.0;
      }
      batch = 0;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = -acc[static_cast<std::size_t>(j)].value();
  return out;
}

namespace {

int resolve_grid_points(const EulerParams& params, int m) {
  const int floor_points = min_grid_points(params.x);
  if (m == 0) return floor_points;
  if (m < floor_points) {
    throw std::domain_error("grid resolution below the oscillation floor for this x");
  }
  return m;
}

}  // namespace

ProductGrid build_product_grid(const RmfSample& sample, const EulerParams& params, int m) {
  m = std::max(resolve_grid_points(params, m), 64);
  ProductGrid grid;
  grid.t.resize(static_cast<std::size_t>(m));
  grid.log_f.resize(static_cast<std::size_t>(m));
  const double h = 1.0 / static_cast<double>(m - 1);
  for (int j = 0; j < m; ++j) {
    grid.t[static_cast<std::size_t>(j)] = -0.5 + h * static_cast<double>(j);
    grid.log_f[static_cast<std::size_t>(j)] =
        log_product(sample, params, grid.t[static_cast<std::size_t>(j)]);
  }
  return grid;
}

double integral_sq(const RmfSample& sample, const EulerParams& params, int m) {
  m = resolve_grid_points(params, m);
  const double cap = params.cap();
  const double h = 1.0 / static_cast<double>(m - 1);
  std::vector<double> log_abs2;
  if (cap < params.r) {
    log_abs2.assign(static_cast<std::size_t>(m), 0.0);
  } else {
    log_abs2 = log_abs_sq_grid(sample, just_below(params.r), cap, params.sigma, -0.5, h, m);
  }
  KahanSum acc;
  for (int j = 0; j < m; ++j) {
    const double v = std::exp(log_abs2[static_cast<std::size_t>(j)]);
    acc.add((j == 0 || j == m - 1) ? 0.5 * v : v);
  }
  return h * acc.value();
}

PrimeMoment mean_sq_closed_form(double a, double b, double sigma, const PrimeList& primes) {
  if (sigma <= -0.5) throw std::domain_error("mean_sq_closed_form: need sigma > -1/2");
  const auto [first, last] = primes.range_open_closed(a, b);
  KahanSum log_exact, lead;
  for (std::size_t i = first; i < last; ++i) {
    const double r2 = std::pow(static_cast<double>(primes.values()[i]), -(1.0 + 2.0 * sigma));
    log_exact.add(-std::log1p(-r2));
    lead.add(r2);
  }
  return {std::exp(log_exact.value()), std::exp(lead.value())};
}

PrimeMoment two_point_closed_form(double a, double b, double sigma, double t,
                                  const PrimeList& primes) {
  if (sigma <= -0.5) throw std::domain_error("two_point_closed_form: need sigma > -1/2");
  const auto [first, last] = primes.range_open_closed(a, b);
  KahanSum log_exact, lead;
  for (std::size_t i = first; i < last; ++i) {
    const double p = static_cast<double>(primes.values()[i]);
    const double lp = std::log(p);
    const double r2 = std::exp(-(1.0 + 2.0 * sigma) * lp);
    const std::complex<double> w{std::cos(t * lp), -std::sin(t * lp)};
    // sum over s >= 0 of r^{2s} |sum_{l<=s} p^{-itl}|^2
    std::complex<double> geom{0.0, 0.0};
    std::complex<double> ws{1.0, 0.0};
    double r2s = 1.0;
    KahanSum series;
    for (std::int64_t s = 0; s < 2'000'000; ++s) {
      geom += ws;
      const double term = r2s * std::norm(geom);
      series.add(term);
      if (s >= 8 && term < 1e-14 * series.value()) break;
      ws *= w;
      r2s *= r2;
    }
    log_exact.add(std::log(series.value()));
    lead.add((2.0 + 2.0 * std::cos(t * lp)) * r2);
  }
  return {std::exp(log_exact.value()), std::exp(lead.value())};
}

namespace {

// h(t) = 1/(sigma^2 + t^2) and its derivatives:
// h^{(m)}(t) = (-1)^m m! Im[(t - i sigma)^{-(m+1)}] / sigma.
void lorentz_derivatives(double t, double sigma, int m_max, double* out) {
  const std::complex<double> u = 1.0 / std::complex<double>(t, -sigma);
  std::complex<double> v = u;
  double factorial = 1.0;
  double sign = 1.0;
  for (int m = 0; m <= m_max; ++m) {
    out[m] = sign * factorial * v.imag() / sigma;
    v *= u;
    factorial *= static_cast<double>(m + 1);
    sign = -sign;
  }
}

double gl16_cos_lorentz(double omega, double sigma, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double t1 = mid + half * kGlNode[i];
    const double t2 = mid - half * kGlNode[i];
    acc += kGlWeight[i] * (std::cos(omega * t1) / (sigma * sigma + t1 * t1) +
                           std::cos(omega * t2) / (sigma * sigma + t2 * t2));
  }
  return half * acc;
}

// Boundary series of repeated integration by parts for
// int cos(omega t) h(t) dt evaluated at t; 2K derivative orders.
double by_parts_boundary(double omega, double sigma, double t, int k_terms) {
  std::vector<double> d(static_cast<std::size_t>(2 * k_terms + 1));
  lorentz_derivatives(t, sigma, 2 * k_terms, d.data());
  const double s = std::sin(omega * t);
  const double c = std::cos(omega * t);
  const double w2 = omega * omega;
  double scale = 1.0;  // (-1/omega^2)^k
  double acc = 0.0;
  for (int k = 0; k < k_terms; ++k) {
    acc += scale * (d[static_cast<std::size_t>(2 * k)] * s / omega +
                    d[static_cast<std::size_t>(2 * k + 1)] * c / w2);
    scale *= -1.0 / w2;
  }
  return acc;
}

}  // namespace

double cos_lorentz_integral(double omega, double sigma, double cutoff) {
  if (sigma <= 0.0) throw std::domain_error("cos_lorentz_integral: need sigma > 0");
  if (cutoff <= 0.0) throw std::domain_error("cos_lorentz_integral: need cutoff > 0");
  omega = std::abs(omega);
  if (omega == 0.0) return 2.0 * std::atan(cutoff / sigma) / sigma;

  // Resolve oscillations up to t0 = 40/omega with panel quadrature, then
  // integrate [t0, cutoff] by parts: with omega t0 = 40 the dropped remainder
  // after 8 double steps is below 16!/(40^16 t0).
  const double t0 = std::min(cutoff, 40.0 / omega);
  KahanSum core;
  double pos = 0.0;
  while (pos < t0) {
    double w = t0 - pos;
    w = std::min(w, std::max(0.5 * sigma, 0.5 * pos));
    w = std::min(w, 10.0 / omega);
    core.add(gl16_cos_lorentz(omega, sigma, pos, pos + w));
    pos += w;
  }
  double tail = 0.0;
  if (t0 < cutoff) {
    constexpr int kTerms = 8;
    tail = by_parts_boundary(omega, sigma, cutoff, kTerms) -
           by_parts_boundary(omega, sigma, t0, kTerms);
  }
  return 2.0 * (core.value() + tail);
}

ParsevalSides parseval_both_sides(std::span<const std::complex<double>> coeffs, double sigma) {
  if (sigma <= 0.0) throw std::domain_error("parseval_both_sides: need sigma > 0");
  const std::size_t n = coeffs.size();
  if (n == 0 || n > 1000) throw std::domain_error("parseval_both_sides: need 1 <= N <= 1000");

  // Left side: |sum_{m<=x} a_m|^2 is a step function of x, so the integral is
  // an exact finite sum.
  std::vector<double> step(n);
  {
    KahanComplexSum s;
    for (std::size_t k = 0; k < n; ++k) {
      s.add(coeffs[k]);
      step[k] = std::norm(s.value());
    }
  }
  KahanSum lhs_acc;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double weight =
        std::pow(kk, -2.0 * sigma) * (-std::expm1(-2.0 * sigma * std::log1p(1.0 / kk)));
    lhs_acc.add(step[k - 1] * weight / (2.0 * sigma));
  }
  lhs_acc.add(step[n - 1] * std::pow(static_cast<double>(n), -2.0 * sigma) / (2.0 * sigma));
  const double lhs = lhs_acc.value();
  if (lhs == 0.0) return {0.0, 0.0};

  // Truncation point: the dropped tail of the right side is at most
  // (sum |a_n|)^2 / (pi T), pushed below 1e-8 * lhs.
  KahanSum abs_sum;
  for (const auto& a : coeffs) abs_sum.add(std::abs(a));
  const double cutoff =
      std::max(1e4, abs_sum.value() * abs_sum.value() * 1e8 / (3.141592653589793 * lhs));

  // Right side: |A(sigma+it)|^2 is a finite cosine sum over frequencies
  // ln(m/n); integrate each frequency against the Lorentz kernel.
  KahanSum rhs_acc;
  {
    KahanSum diag;
    for (std::size_t m = 1; m <= n; ++m) {
      diag.add(std::norm(coeffs[m - 1]) * std::pow(static_cast<double>(m), -2.0 * sigma));
    }
    rhs_acc.add(diag.value() * cos_lorentz_integral(0.0, sigma, cutoff));
  }
  std::map<std::uint64_t, double> by_ratio;  // reduced m/n -> accumulated coefficient
  for (std::size_t m = 2; m <= n; ++m) {
    for (std::size_t l = 1; l < m; ++l) {
      const double c = 2.0 *
                       (coeffs[m - 1] * std::conj(coeffs[l - 1])).real() *
                       std::pow(static_cast<double>(m) * static_cast<double>(l), -sigma);
      if (c == 0.0) continue;
      const std::uint64_t g = std::gcd(m, l);
      by_ratio[(static_cast<std::uint64_t>(m / g) << 32) | static_cast<std::uint64_t>(l / g)] += c;
    }
  }
  for (const auto& [key, c] : by_ratio) {
    const double num = static_cast<double>(key >> 32);
    const double den = static_cast<double>(key & 0xffffffffu);
    rhs_acc.add(c * cos_lorentz_integral(std::log(num / den), sigma, cutoff));
  }
  return {lhs, rhs_acc.value() / kTwoPi};
}

}  // namespace rmflab
