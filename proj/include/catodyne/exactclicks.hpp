#ifndef CATODYNE_EXACTCLICKS_HPP
#define CATODYNE_EXACTCLICKS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/numkernel.hpp"
#include "catodyne/states.hpp"

namespace catodyne {

/// Maximum Fock support accepted for custom signals.
inline constexpr int kCustomExpansionDepth = 64;

/// Largest tail mass a joint distribution may drop.
inline constexpr double kJointTailTolerance = 1e-9;

struct ClickOutcome {
  int n = 0;  // detector D1
  int m = 0;  // detector D2
};

namespace detail {

// sign/phase * exp(log_mag). A zero amplitude has log_mag = -inf.
struct PolarLog {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }
  ComplexAmplitude value() const {
    return is_zero() ? ComplexAmplitude{} : std::polar(std::exp(log_mag), phase);
  }
};

// Common envelope e^{-|beta|^2/2} / (2^{(n+m)/2} sqrt(n! m!)) in log form.
inline double log_click_envelope(int n, int m, double beta_mag) {
  return -0.5 * beta_mag * beta_mag - 0.5 * (n + m) * std::numbers::ln2 -
         0.5 * (log_factorial(n) + log_factorial(m));
}

// z^k in log-polar form, with 0^0 = 1.
inline PolarLog log_power(std::complex<double> z, int k) {
  if (k == 0) return {0.0, 0.0};
  if (z == std::complex<double>{}) return {};
  return {k * std::log(std::abs(z)), k * std::arg(z)};
}

// e^{-(|a|^2+|b|^2)/2} (a+b)^n (a-b)^m / (2^{(n+m)/2} sqrt(n!m!)): the
// coherent-LO amplitude for a coherent signal a and LO b.
inline PolarLog coherent_pair_amplitude(int n, int m, std::complex<double> alpha,
                                        std::complex<double> beta) {
  const PolarLog plus = log_power(alpha + beta, n);
  const PolarLog minus = log_power(alpha - beta, m);
  if (plus.is_zero() || minus.is_zero()) return {};
  return {log_click_envelope(n, m, std::abs(beta)) - 0.5 * std::norm(alpha) + plus.log_mag +
              minus.log_mag,
          plus.phase + minus.phase};
}

// Real polynomial factor H of <0|(a+beta)^n (a-beta)^m|kappa> = beta^N sqrt(kappa!) H,
// N = n+m-kappa, written with the terminating 2F1 at z = -1. The branch on m
// keeps the lower parameter positive.
inline double fock_bracket_polynomial(int n, int m, int kappa) {
  const int total = n + m - kappa;
  if (total < 0) return 0.0;
  if (m <= kappa) {
    return binomial(n, total) * terminating_2f1(-m, -total, 1 - m + kappa, -1.0);
  }
  const double sign = ((m - kappa) % 2 == 0) ? 1.0 : -1.0;
  return sign * binomial(m, m - kappa) * terminating_2f1(-n, -kappa, 1 + m - kappa, -1.0);
}

// Coherent-LO amplitude for Fock signal kappa, assembled in log space.
inline PolarLog fock_amplitude(int n, int m, std::complex<double> beta, int kappa) {
  const int total = n + m - kappa;
  if (total < 0) return {};
  const double poly = fock_bracket_polynomial(n, m, kappa);
  if (poly == 0.0) return {};
  const PolarLog bpow = log_power(beta, total);
  if (bpow.is_zero()) return {};
  return {log_click_envelope(n, m, std::abs(beta)) + 0.5 * log_factorial(kappa) + bpow.log_mag +
              std::log(std::abs(poly)),
          bpow.phase + (poly < 0.0 ? std::numbers::pi : 0.0)};
}

inline void check_custom_depth(const Custom& c) {
  for (std::size_t k = kCustomExpansionDepth + 1; k < c.coeffs.size(); ++k) {
    if (c.coeffs[k] != std::complex<double>{}) {
      throw CutoffError("custom signal support exceeds expansion depth " +
                            std::to_string(kCustomExpansionDepth),
                        std::norm(c.coeffs[k]));
    }
  }
}

}  // namespace detail

/// Exact click amplitude <n,m| U_BS |signal>|beta> for a coherent LO.
inline ComplexAmplitude amp_coherent_lo(int n, int m, std::complex<double> beta,
                                        const SignalState& signal) {
  if (n < 0 || m < 0) throw std::invalid_argument("click counts must be non-negative");
  if (signal.is<Vacuum>()) return detail::fock_amplitude(n, m, beta, 0).value();
  if (signal.is<Fock>()) return detail::fock_amplitude(n, m, beta, signal.as<Fock>().kappa).value();
  if (signal.is<Coherent>()) {
    return detail::coherent_pair_amplitude(n, m, signal.as<Coherent>().alpha, beta).value();
  }
  const auto& c = signal.as<Custom>();
  detail::check_custom_depth(c);
  ComplexAmplitude sum{};
  for (std::size_t k = 0; k < c.coeffs.size() && k <= kCustomExpansionDepth; ++k) {
    if (c.coeffs[k] == std::complex<double>{}) continue;
    sum += c.coeffs[k] * detail::fock_amplitude(n, m, beta, static_cast<int>(k)).value();
  }
  return sum;
}

/// Exact click amplitude for a cat LO (|beta> +/- |-beta>)/N+/-.
inline ComplexAmplitude amp_cat_lo(int n, int m, std::complex<double> beta, Parity parity,
                                   const SignalState& signal) {
  if (n < 0 || m < 0) throw std::invalid_argument("click counts must be non-negative");
  const double norm = cat_norm(parity, std::abs(beta));
  const double s = parity_sign(parity);

  // Under beta -> -beta a Fock amplitude picks up (-1)^{n+m-kappa}, so the
  // symmetrized bracket is either doubled or exactly zero.
  auto fock_cat = [&](int kappa) -> ComplexAmplitude {
    const int total = n + m - kappa;
    if (total < 0) return {};
    const double relative = (total % 2 == 0) ? 1.0 : -1.0;
    if (1.0 + s * relative == 0.0) return {};
    detail::PolarLog a = detail::fock_amplitude(n, m, beta, kappa);
    if (a.is_zero()) return {};
    a.log_mag += std::log(2.0 / norm);
    return a.value();
  };

  if (signal.is<Vacuum>()) return fock_cat(0);
  if (signal.is<Fock>()) return fock_cat(signal.as<Fock>().kappa);
  if (signal.is<Coherent>()) {
    const auto alpha = signal.as<Coherent>().alpha;
    if (alpha == std::complex<double>{}) return fock_cat(0);
    const detail::PolarLog f_plus = detail::coherent_pair_amplitude(n, m, alpha, beta);
    const detail::PolarLog f_minus = detail::coherent_pair_amplitude(n, m, alpha, -beta);
    if (f_plus.is_zero() && f_minus.is_zero()) return {};
    const double ref = std::max(f_plus.log_mag, f_minus.log_mag);
    auto scaled = [ref](const detail::PolarLog& f) {
      return f.is_zero() ? ComplexAmplitude{} : std::polar(std::exp(f.log_mag - ref), f.phase);
    };
    return std::exp(ref) * (scaled(f_plus) + s * scaled(f_minus)) / norm;
  }
  const auto& c = signal.as<Custom>();
  detail::check_custom_depth(c);
  ComplexAmplitude sum{};
  for (std::size_t k = 0; k < c.coeffs.size() && k <= kCustomExpansionDepth; ++k) {
    if (c.coeffs[k] == std::complex<double>{}) continue;
    sum += c.coeffs[k] * fock_cat(static_cast<int>(k));
  }
  return sum;
}

/// Probability of the click pair (n, m) for any LO kind.
inline double click_probability(int n, int m, const LocalOscillatorSpec& lo,
                                const SignalState& signal) {
  const std::complex<double> beta = lo.beta();
  switch (lo.kind) {
    case LoKind::coherent: return std::norm(amp_coherent_lo(n, m, beta, signal));
    case LoKind::cat_plus: return std::norm(amp_cat_lo(n, m, beta, Parity::plus, signal));
    case LoKind::cat_minus: return std::norm(amp_cat_lo(n, m, beta, Parity::minus, signal));
    case LoKind::mixed:
      return 0.5 * (std::norm(amp_coherent_lo(n, m, beta, signal)) +
                    std::norm(amp_coherent_lo(n, m, -beta, signal)));
  }
  return 0.0;
}

/// P(n, m) on the square grid [0, n_max]^2 plus the mass it misses.
struct JointClickDistribution {
  std::vector<double> probs;  // row-major, index n * (n_max + 1) + m
  int n_max = 0;
  double tail_bound = 0.0;
  LocalOscillatorSpec lo;
  SignalState signal;
  double eta = 1.0;

  int side() const { return n_max + 1; }
  double operator()(int n, int m) const { return probs[static_cast<std::size_t>(n) * side() + m]; }
  double& at(int n, int m) { return probs[static_cast<std::size_t>(n) * side() + m]; }

  double total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
  /// Marginal over m (distribution of n).
  std::vector<double> marginal_n() const {
    std::vector<double> out(side(), 0.0);
    for (int n = 0; n < side(); ++n)
      for (int m = 0; m < side(); ++m) out[n] += (*this)(n, m);
    return out;
  }
  /// Marginal over n (distribution of m).
  std::vector<double> marginal_m() const {
    std::vector<double> out(side(), 0.0);
    for (int n = 0; n < side(); ++n)
      for (int m = 0; m < side(); ++m) out[m] += (*this)(n, m);
    return out;
  }
};

/// Finite-efficiency smearing: each detector reports a binomial thinning of
/// its ideal count. eta = 1 returns the input unchanged.
inline JointClickDistribution smear_efficiency(const JointClickDistribution& ideal, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  JointClickDistribution out = ideal;
  out.eta = eta;
  if (eta == 1.0) return out;
  const int side = ideal.side();
  // kernel[k * side + n] = B(k; n, eta)
  std::vector<double> kernel(static_cast<std::size_t>(side) * side, 0.0);
  for (int n = 0; n < side; ++n)
    for (int k = 0; k <= n; ++k) kernel[static_cast<std::size_t>(k) * side + n] = std::exp(log_binomial_pmf(k, n, eta));

  std::vector<double> partial(static_cast<std::size_t>(side) * side, 0.0);  // (n, m')
  for (int n = 0; n < side; ++n)
    for (int mp = 0; mp < side; ++mp) {
      double acc = 0.0;
      for (int m = mp; m < side; ++m) acc += kernel[static_cast<std::size_t>(mp) * side + m] * ideal(n, m);
      partial[static_cast<std::size_t>(n) * side + mp] = acc;
    }
  for (int np = 0; np < side; ++np)
    for (int mp = 0; mp < side; ++mp) {
      double acc = 0.0;
      for (int n = np; n < side; ++n)
        acc += kernel[static_cast<std::size_t>(np) * side + n] * partial[static_cast<std::size_t>(n) * side + mp];
      out.at(np, mp) = acc;
    }
  return out;
}

/// Joint click distribution. `n_max` defaults to choose_cutoff. Rows are
/// filled by independent workers; every cell is a pure function of (n, m),
/// so the result does not depend on the thread count.
inline JointClickDistribution joint_distribution(const LocalOscillatorSpec& lo,
                                                 const SignalState& signal,
                                                 std::optional<int> n_max = std::nullopt,
                                                 double eta = 1.0, unsigned threads = 0) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  const int cutoff = n_max ? *n_max : choose_cutoff(lo, signal);
  if (cutoff < 0) throw std::invalid_argument("n_max must be non-negative");
  if (signal.is<Custom>()) detail::check_custom_depth(signal.as<Custom>());

  JointClickDistribution dist;
  dist.n_max = cutoff;
  dist.lo = lo;
  dist.signal = signal;
  dist.eta = 1.0;
  dist.probs.assign(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1), 0.0);
  dist.tail_bound = total_photon_tail(lo, signal, cutoff);
  if (dist.tail_bound > kJointTailTolerance) {
    throw TruncationError("joint_distribution: tail bound " + detail::short_num(dist.tail_bound) +
                              " exceeds " + detail::short_num(kJointTailTolerance),
                          dist.tail_bound);
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cutoff + 1));
  auto fill_rows = [&](unsigned worker) {
    for (int n = static_cast<int>(worker); n <= cutoff; n += static_cast<int>(threads))
      for (int m = 0; m <= cutoff; ++m) dist.at(n, m) = click_probability(n, m, lo, signal);
  };
  if (threads <= 1) {
    fill_rows(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(fill_rows, w);
  }
  return eta == 1.0 ? dist : smear_efficiency(dist, eta);
}

}  // namespace catodyne

#endif  // CATODYNE_EXACTCLICKS_HPP
