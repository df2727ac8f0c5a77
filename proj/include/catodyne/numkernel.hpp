#ifndef CATODYNE_NUMKERNEL_HPP
#define CATODYNE_NUMKERNEL_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "catodyne/errors.hpp"

namespace catodyne {

using ComplexAmplitude = std::complex<double>;

/// A non-negative factor stored as its natural logarithm. Products add.
struct LogWeight {
  double value = 0.0;

  static LogWeight zero() { return {-std::numeric_limits<double>::infinity()}; }
  bool is_zero() const { return value == -std::numeric_limits<double>::infinity(); }
  double exp() const { return std::exp(value); }

  friend LogWeight operator*(LogWeight a, LogWeight b) { return {a.value + b.value}; }
  friend LogWeight operator/(LogWeight a, LogWeight b) { return {a.value - b.value}; }
  friend bool operator<(LogWeight a, LogWeight b) { return a.value < b.value; }
};

namespace detail {

inline constexpr int kLogFactorialTableSize = 1024;

inline const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTableSize; ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// ln(n!). Exact table below 1024, Stirling series above.
inline double log_factorial(std::int64_t n) {
  if (n < 0) return std::numeric_limits<double>::quiet_NaN();
  if (n < detail::kLogFactorialTableSize) return detail::log_factorial_table()[n];
  const long double x = static_cast<long double>(n);
  const long double inv = 1.0L / x;
  const long double inv2 = inv * inv;
  const long double series =
      inv * (1.0L / 12 - inv2 * (1.0L / 360 - inv2 * (1.0L / 1260 - inv2 / 1680)));
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  return static_cast<double>(x * std::log(x) - x + 0.5L * std::log(two_pi * x) + series);
}

inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Binomial coefficient as a double, correctly rounded for small arguments.
inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    std::uint64_t r = 1;
    for (std::int64_t j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / j;
    return static_cast<double>(r);
  }
  return std::round(std::exp(log_binomial(n, k)));
}

/// ln of the Poisson pmf at k with mean `mean`.
inline double log_poisson(std::int64_t k, double mean) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
}

inline double poisson_pmf(std::int64_t k, double mean) { return std::exp(log_poisson(k, mean)); }

/// ln of the binomial pmf B(k; n, p).
inline double log_binomial_pmf(std::int64_t k, std::int64_t n, double p) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  double lp = 0.0;
  if (k > 0) lp += static_cast<double>(k) * std::log(p);
  if (n - k > 0) lp += static_cast<double>(n - k) * std::log1p(-p);
  return log_binomial(n, k) + lp;
}

inline double log_normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * d * d / variance - 0.5 * std::log(2.0 * std::numbers::pi * variance);
}

/// Physicists' Hermite polynomial by upward recurrence.
inline double hermite_phys(int k, double x) {
  if (k <= 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// 2F1(a, b; c; z) for a <= 0 by direct summation of Pochhammer ratios.
/// Summation stops as soon as either numerator parameter reaches zero.
inline double terminating_2f1(int a, int b, int c, double z) {
  if (a > 0) throw PoleError("terminating_2f1: a must be a non-positive integer");
  double sum = 1.0;
  double term = 1.0;
  for (int j = 0; j < -a; ++j) {
    if (b + j == 0) break;
    if (c + j == 0) {
      throw PoleError("terminating_2f1: (c)_j vanishes at j=" + std::to_string(j + 1) +
                      " before the series terminates");
    }
    term *= static_cast<double>(a + j) * static_cast<double>(b + j) /
            (static_cast<double>(c + j) * static_cast<double>(j + 1)) * z;
    sum += term;
  }
  return sum;
}

namespace detail {

inline std::complex<double> erf_series(std::complex<double> z) {
  // erf(z) = 2/sqrt(pi) * sum_k (-1)^k z^{2k+1} / (k! (2k+1))
  const std::complex<double> z2 = z * z;
  std::complex<double> power = z;
  std::complex<double> sum = z;
  for (int k = 1; k < 200; ++k) {
    power *= -z2 / static_cast<double>(k);
    const std::complex<double> term = power / static_cast<double>(2 * k + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum * (2.0 / std::sqrt(std::numbers::pi));
}

// Laplace continued fraction for e^{z^2} erfc(z), Re z > 0, evaluated with
// the modified Lentz method.
inline std::complex<double> erfcx_continued_fraction(std::complex<double> z) {
  constexpr double tiny = 1e-300;
  std::complex<double> f = z;
  if (std::abs(f) < tiny) f = tiny;
  std::complex<double> c = f;
  std::complex<double> d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double ak = 0.5 * k;
    d = z + ak * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + ak / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const std::complex<double> delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

// The series cancels badly once e^{Re z^2} is large; the continued fraction
// converges quickly for Re z >= 1 or |z| >= 3.
inline bool use_erf_series(std::complex<double> z) { return z.real() < 1.0 && std::abs(z) < 3.0; }

}  // namespace detail

/// Scaled complementary error function e^{z^2} erfc(z) for Re z >= 0.
inline std::complex<double> erfcx_complex(std::complex<double> z) {
  if (detail::use_erf_series(z)) return std::exp(z * z) * (1.0 - detail::erf_series(z));
  return detail::erfcx_continued_fraction(z);
}

/// Error function of a complex argument.
inline std::complex<double> erf_complex(std::complex<double> z) {
  if (z.real() < 0.0) return -erf_complex(-z);
  if (detail::use_erf_series(z)) return detail::erf_series(z);
  return 1.0 - std::exp(-z * z) * detail::erfcx_continued_fraction(z);
}

}  // namespace catodyne

#endif  // CATODYNE_NUMKERNEL_HPP
