#ifndef CATODYNE_STATES_HPP
#define CATODYNE_STATES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/numkernel.hpp"

namespace catodyne {

inline constexpr double kDefaultTailTolerance = 1e-12;

enum class Parity { plus, minus };

inline double parity_sign(Parity p) { return p == Parity::plus ? 1.0 : -1.0; }

// ---------------------------------------------------------------------------
// Signal states
// ---------------------------------------------------------------------------

struct Vacuum {};

struct Coherent {
  std::complex<double> alpha;
};

struct Fock {
  int kappa = 0;
};

/// Arbitrary pure state given by its Fock coefficients (unit norm).
struct Custom {
  std::vector<std::complex<double>> coeffs;
};

class SignalState {
 public:
  using Kind = std::variant<Vacuum, Coherent, Fock, Custom>;

  SignalState() = default;

  static SignalState vacuum() { return SignalState(Vacuum{}); }
  static SignalState coherent(std::complex<double> alpha) { return SignalState(Coherent{alpha}); }
  static SignalState fock(int kappa) {
    if (kappa < 0) throw std::invalid_argument("fock: photon number must be non-negative");
    return SignalState(Fock{kappa});
  }
  static SignalState custom(std::vector<std::complex<double>> coeffs) {
    double norm2 = 0.0;
    for (const auto& c : coeffs) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > 1e-10) {
      throw std::invalid_argument("custom signal coefficients must have unit norm (got " +
                                  detail::short_num(norm2) + ")");
    }
    return SignalState(Custom{std::move(coeffs)});
  }

  const Kind& kind() const { return kind_; }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(kind_);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(kind_);
  }

  double mean_photon_number() const {
    return std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Vacuum>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, Coherent>) {
            return std::norm(s.alpha);
          } else if constexpr (std::is_same_v<T, Fock>) {
            return static_cast<double>(s.kappa);
          } else {
            double mean = 0.0;
            for (std::size_t k = 0; k < s.coeffs.size(); ++k) mean += k * std::norm(s.coeffs[k]);
            return mean;
          }
        },
        kind_);
  }

  /// Photon-number parity if the state has one: +1 even, -1 odd.
  std::optional<Parity> definite_parity() const {
    if (is<Vacuum>()) return Parity::plus;
    if (is<Fock>()) return as<Fock>().kappa % 2 == 0 ? Parity::plus : Parity::minus;
    if (is<Coherent>() && as<Coherent>().alpha == std::complex<double>{}) return Parity::plus;
    if (is<Custom>()) {
      bool even = false, odd = false;
      const auto& c = as<Custom>().coeffs;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == std::complex<double>{}) continue;
        (k % 2 == 0 ? even : odd) = true;
      }
      if (even && !odd) return Parity::plus;
      if (odd && !even) return Parity::minus;
    }
    return std::nullopt;
  }

 private:
  explicit SignalState(Kind k) : kind_(std::move(k)) {}
  Kind kind_ = Vacuum{};
};

// ---------------------------------------------------------------------------
// Local oscillators
// ---------------------------------------------------------------------------

enum class LoKind { coherent, cat_plus, cat_minus, mixed };

/// sqrt(2 (1 +/- e^{-2|beta|^2})), the cat-state normalization.
inline double cat_norm(Parity parity, double magnitude) {
  if (magnitude < 0.0) throw std::invalid_argument("cat_norm: magnitude must be non-negative");
  if (parity == Parity::minus) {
    if (magnitude == 0.0) throw DegenerateCat("minus cat with zero amplitude is the zero vector");
    return std::sqrt(-2.0 * std::expm1(-2.0 * magnitude * magnitude));
  }
  return std::sqrt(2.0 * (1.0 + std::exp(-2.0 * magnitude * magnitude)));
}

struct LocalOscillatorSpec {
  LoKind kind = LoKind::coherent;
  double magnitude = 0.0;
  double theta = 0.0;

  static LocalOscillatorSpec coherent(double mag, double theta = 0.0) {
    return make(LoKind::coherent, mag, theta);
  }
  static LocalOscillatorSpec cat(Parity p, double mag, double theta = 0.0) {
    auto lo = make(p == Parity::plus ? LoKind::cat_plus : LoKind::cat_minus, mag, theta);
    if (p == Parity::minus) (void)cat_norm(p, mag);
    return lo;
  }
  static LocalOscillatorSpec mixed(double mag, double theta = 0.0) {
    return make(LoKind::mixed, mag, theta);
  }

  std::complex<double> beta() const { return std::polar(magnitude, theta); }
  bool is_cat() const { return kind == LoKind::cat_plus || kind == LoKind::cat_minus; }
  Parity parity() const { return kind == LoKind::cat_minus ? Parity::minus : Parity::plus; }

 private:
  static LocalOscillatorSpec make(LoKind k, double mag, double theta) {
    if (!(mag >= 0.0)) throw std::invalid_argument("LO magnitude must be non-negative");
    return {k, mag, theta};
  }
};

inline std::string to_string(LoKind k) {
  switch (k) {
    case LoKind::coherent: return "coherent";
    case LoKind::cat_plus: return "cat+";
    case LoKind::cat_minus: return "cat-";
    case LoKind::mixed: return "mixed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Truncated Fock representations
// ---------------------------------------------------------------------------

struct TruncatedFockVector {
  std::vector<std::complex<double>> coeffs;  // indices 0..n_max
  double tail_bound = 0.0;                   // probability beyond n_max

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
  double norm2() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
  }
};

namespace detail {

// Sum of Poisson(k; mean) for k > n_max, accumulated upward from the first
// omitted term until terms are negligible.
inline double poisson_upper_tail(int n_max, double mean) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (std::int64_t k = n_max + 1;; ++k) {
    const double p = poisson_pmf(k, mean);
    tail += p;
    if (static_cast<double>(k) > mean && p < 1e-18 * std::max(tail, 1e-300)) break;
    if (static_cast<double>(k) > mean && p == 0.0) break;
  }
  return tail;
}

// Same, restricted to one photon-number parity.
inline double parity_poisson_upper_tail(int n_max, double mean, Parity parity) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  std::int64_t k = n_max + 1;
  if ((k % 2 == 0) != (parity == Parity::plus)) ++k;
  for (;; k += 2) {
    const double p = poisson_pmf(k, mean);
    tail += p;
    if (static_cast<double>(k) > mean && (p == 0.0 || p < 1e-18 * tail)) break;
  }
  return tail;
}

inline std::complex<double> coherent_coefficient(std::complex<double> alpha, int k) {
  const double mag = std::abs(alpha);
  if (mag == 0.0) return k == 0 ? 1.0 : 0.0;
  const double log_mag = -0.5 * mag * mag + k * std::log(mag) - 0.5 * log_factorial(k);
  return std::polar(std::exp(log_mag), k * std::arg(alpha));
}

inline void check_tail(double tail, double tol, const char* what) {
  if (tail > tol) {
    throw TruncationError(std::string(what) + ": truncation tail " + detail::short_num(tail) +
                              " exceeds tolerance " + detail::short_num(tol),
                          tail);
  }
}

}  // namespace detail

inline TruncatedFockVector to_fock(const SignalState& state, int n_max,
                                   double tail_tol = kDefaultTailTolerance) {
  if (n_max < 0) throw std::invalid_argument("to_fock: n_max must be non-negative");
  TruncatedFockVector v;
  v.coeffs.assign(n_max + 1, {0.0, 0.0});
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vacuum>) {
          v.coeffs[0] = 1.0;
        } else if constexpr (std::is_same_v<T, Coherent>) {
          for (int k = 0; k <= n_max; ++k) v.coeffs[k] = detail::coherent_coefficient(s.alpha, k);
          v.tail_bound = detail::poisson_upper_tail(n_max, std::norm(s.alpha));
        } else if constexpr (std::is_same_v<T, Fock>) {
          if (s.kappa <= n_max) {
            v.coeffs[s.kappa] = 1.0;
          } else {
            v.tail_bound = 1.0;
          }
        } else {
          for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
            if (static_cast<int>(k) <= n_max) {
              v.coeffs[k] = s.coeffs[k];
            } else {
              v.tail_bound += std::norm(s.coeffs[k]);
            }
          }
        }
      },
      state.kind());
  detail::check_tail(v.tail_bound, tail_tol, "to_fock(signal)");
  return v;
}

/// Fock expansion of a pure local oscillator. Mixed LOs have no state vector.
inline TruncatedFockVector to_fock(const LocalOscillatorSpec& lo, int n_max,
                                   double tail_tol = kDefaultTailTolerance) {
  if (n_max < 0) throw std::invalid_argument("to_fock: n_max must be non-negative");
  if (lo.kind == LoKind::mixed) {
    throw std::invalid_argument("to_fock: a mixed local oscillator has no state vector");
  }
  const std::complex<double> beta = lo.beta();
  TruncatedFockVector v;
  v.coeffs.assign(n_max + 1, {0.0, 0.0});
  const double mean = lo.magnitude * lo.magnitude;
  if (lo.kind == LoKind::coherent) {
    for (int k = 0; k <= n_max; ++k) v.coeffs[k] = detail::coherent_coefficient(beta, k);
    v.tail_bound = detail::poisson_upper_tail(n_max, mean);
  } else {
    const Parity p = lo.parity();
    const double norm = cat_norm(p, lo.magnitude);
    for (int k = 0; k <= n_max; ++k) {
      const bool even = k % 2 == 0;
      if (even != (p == Parity::plus)) continue;  // cancels exactly
      v.coeffs[k] = 2.0 * detail::coherent_coefficient(beta, k) / norm;
    }
    v.tail_bound =
        4.0 / (norm * norm) * detail::parity_poisson_upper_tail(n_max, mean, p);
  }
  detail::check_tail(v.tail_bound, tail_tol, "to_fock(lo)");
  return v;
}

/// Photon-number distribution of the signal on 0..len-1.
inline std::vector<double> number_distribution(const SignalState& s, int len) {
  std::vector<double> p(len, 0.0);
  if (s.is<Vacuum>()) {
    if (len > 0) p[0] = 1.0;
  } else if (s.is<Coherent>()) {
    const double mean = std::norm(s.as<Coherent>().alpha);
    for (int k = 0; k < len; ++k) p[k] = poisson_pmf(k, mean);
  } else if (s.is<Fock>()) {
    if (s.as<Fock>().kappa < len) p[s.as<Fock>().kappa] = 1.0;
  } else {
    const auto& c = s.as<Custom>().coeffs;
    for (int k = 0; k < len && k < static_cast<int>(c.size()); ++k) p[k] = std::norm(c[k]);
  }
  return p;
}

/// Photon-number distribution of the LO (mixed LOs are Poissonian).
inline std::vector<double> number_distribution(const LocalOscillatorSpec& lo, int len) {
  std::vector<double> p(len, 0.0);
  const double mean = lo.magnitude * lo.magnitude;
  if (!lo.is_cat()) {
    for (int k = 0; k < len; ++k) p[k] = poisson_pmf(k, mean);
    return p;
  }
  const double norm = cat_norm(lo.parity(), lo.magnitude);
  for (int k = 0; k < len; ++k) {
    if ((k % 2 == 0) != (lo.parity() == Parity::plus)) continue;
    p[k] = 4.0 / (norm * norm) * poisson_pmf(k, mean);
  }
  return p;
}

namespace detail {

// Upper tails T(N) = P(signal + LO photons > N) for N = 0..len-1.
inline std::vector<double> total_photon_tails(const LocalOscillatorSpec& lo,
                                              const SignalState& signal, int len) {
  // Both distributions are computed far enough out that the remainder is far
  // below double precision; tails are summed from the top down.
  const double mean_lo = lo.magnitude * lo.magnitude;
  const double mean_sig = signal.mean_photon_number();
  int extent = len + static_cast<int>(std::ceil(mean_lo + mean_sig + 40.0 * std::sqrt(mean_lo + mean_sig + 1.0))) + 60;
  if (signal.is<Fock>()) extent = std::max(extent, signal.as<Fock>().kappa + len + 60);
  if (signal.is<Custom>()) extent = std::max(extent, static_cast<int>(signal.as<Custom>().coeffs.size()) + len + 60);
  const auto ps = number_distribution(signal, extent);
  const auto pl = number_distribution(lo, extent);
  std::vector<double> total(extent, 0.0);
  for (int i = 0; i < extent; ++i) {
    if (ps[i] == 0.0) continue;
    for (int j = 0; i + j < extent; ++j) total[i + j] += ps[i] * pl[j];
  }
  std::vector<double> tails(len, 0.0);
  double acc = 0.0;
  for (int t = extent - 1; t >= 0; --t) {
    if (t < len) tails[t] = acc;  // mass strictly above t
    acc += total[t];
  }
  return tails;
}

}  // namespace detail

/// Smallest cutoff whose combined photon-number tail is below `tail_tol`,
/// never less than |beta|^2 + 10|beta| + <n_signal> + 10.
inline int choose_cutoff(const LocalOscillatorSpec& lo, const SignalState& signal,
                         double tail_tol = kDefaultTailTolerance) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw std::invalid_argument("choose_cutoff: tail_tol must lie in (0, 1)");
  }
  const double b = lo.magnitude;
  const int floor_value =
      static_cast<int>(std::ceil(b * b + 10.0 * b + signal.mean_photon_number() + 10.0));
  int len = floor_value + 1;
  for (;;) {
    const auto tails = detail::total_photon_tails(lo, signal, len);
    for (int n = 0; n < len; ++n) {
      if (tails[n] < tail_tol) return std::max(n, floor_value);
    }
    len *= 2;
  }
}

/// Exact probability that the combined photon number exceeds n_max.
inline double total_photon_tail(const LocalOscillatorSpec& lo, const SignalState& signal,
                                int n_max) {
  return detail::total_photon_tails(lo, signal, n_max + 1)[n_max];
}

}  // namespace catodyne

#endif  // CATODYNE_STATES_HPP
