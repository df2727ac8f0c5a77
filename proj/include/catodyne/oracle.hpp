#ifndef CATODYNE_ORACLE_HPP
#define CATODYNE_ORACLE_HPP

// Brute-force two-mode validator. Deliberately shares nothing with
// exactclicks.hpp: beamsplitter matrix elements come from exact integer
// expansions of the creation-operator polynomial, and amplitudes are dense
// sums over the truncated input vectors.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/numkernel.hpp"
#include "catodyne/states.hpp"

namespace catodyne::oracle {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kOracleTailTolerance = 1e-10;

inline BigInt exact_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int j = 1; j <= k; ++j) {
    r *= (n - k + j);
    r /= j;
  }
  return r;
}

/// Integer coefficient of a^n b^m in (a + b)^k (a - b)^l, with n + m = k + l.
inline BigInt bs_integer_coefficient(int n, int k, int l) {
  BigInt sum = 0;
  // i creation operators of mode a come from the first factor, n - i from the second.
  for (int i = 0; i <= k; ++i) {
    const int j = n - i;
    if (j < 0 || j > l) continue;
    BigInt term = exact_binomial(k, i) * exact_binomial(l, j);
    if ((l - j) % 2 != 0) term = -term;
    sum += term;
  }
  return sum;
}

namespace detail {

// Write-once table of beamsplitter columns keyed by input (k, l). Column
// entry n holds <n, k+l-n| U_BS |k, l>. Concurrent fills of one key compute
// identical values; the first insertion wins.
class ColumnCache {
 public:
  const std::vector<double>& column(int k, int l) {
    {
      std::shared_lock lock(mutex_);
      auto it = columns_.find({k, l});
      if (it != columns_.end()) return *it->second;
    }
    auto fresh = std::make_unique<std::vector<double>>(compute(k, l));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = columns_.try_emplace({k, l}, std::move(fresh));
    return *it->second;
  }

  static std::vector<double> compute(int k, int l) {
    const int total = k + l;
    std::vector<double> col(total + 1, 0.0);
    for (int n = 0; n <= total; ++n) {
      const int m = total - n;
      const BigInt c = bs_integer_coefficient(n, k, l);
      if (c == 0) continue;
      // a^{+n} b^{+m}|0,0> = sqrt(n! m!) |n, m>, and the input carries 1/sqrt(k! l!).
      const double log_scale = 0.5 * (log_factorial(n) + log_factorial(m) - log_factorial(k) -
                                      log_factorial(l)) -
                               0.5 * total * std::numbers::ln2;
      col[n] = c.convert_to<double>() * std::exp(log_scale);
    }
    return col;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<int, int>, std::unique_ptr<std::vector<double>>> columns_;
};

inline ColumnCache& column_cache() {
  static ColumnCache cache;
  return cache;
}

}  // namespace detail

/// <n, m| U_BS |k, l> for a -> (a + b)/sqrt2, b -> (a - b)/sqrt2.
inline double bs_element(int n, int m, int k, int l) {
  if (n < 0 || m < 0 || k < 0 || l < 0) return 0.0;
  if (n + m != k + l) return 0.0;
  return detail::column_cache().column(k, l)[n];
}

struct TwoModeAmplitudeQuery {
  int n = 0;
  int m = 0;
  TruncatedFockVector signal_vec;
  TruncatedFockVector lo_vec;
};

/// <n|<m| U_BS |signal>|LO> by dense summation over k + l = n + m.
inline ComplexAmplitude amplitude_bruteforce(const TwoModeAmplitudeQuery& q) {
  if (q.signal_vec.tail_bound > kOracleTailTolerance || q.lo_vec.tail_bound > kOracleTailTolerance) {
    throw CutoffError("oracle: input truncation tail exceeds 1e-10",
                      std::max(q.signal_vec.tail_bound, q.lo_vec.tail_bound));
  }
  const int total = q.n + q.m;
  if (q.lo_vec.n_max() < total && q.lo_vec.tail_bound > 0.0) {
    throw CutoffError("oracle: LO cutoff below required support n+m", q.lo_vec.tail_bound);
  }
  if (q.signal_vec.n_max() < total && q.signal_vec.tail_bound > 0.0) {
    throw CutoffError("oracle: signal cutoff below required support n+m", q.signal_vec.tail_bound);
  }
  ComplexAmplitude sum{};
  for (int k = 0; k <= total && k <= q.signal_vec.n_max(); ++k) {
    const int l = total - k;
    if (l > q.lo_vec.n_max()) continue;
    const auto c = q.signal_vec.coeffs[k];
    const auto d = q.lo_vec.coeffs[l];
    if (c == ComplexAmplitude{} || d == ComplexAmplitude{}) continue;
    sum += c * d * bs_element(q.n, q.m, k, l);
  }
  return sum;
}

}  // namespace catodyne::oracle

#endif  // CATODYNE_ORACLE_HPP
