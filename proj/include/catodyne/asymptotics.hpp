#ifndef CATODYNE_ASYMPTOTICS_HPP
#define CATODYNE_ASYMPTOTICS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/numkernel.hpp"
#include "catodyne/states.hpp"
#include "catodyne/sumdiff.hpp"

namespace catodyne {

inline double pi_quarter_root_inv() { return 1.0 / std::pow(std::numbers::pi, 0.25); }

/// <x_theta | alpha>, with the quadrature axis chosen by the LO phase theta.
inline ComplexAmplitude overlap_coherent(double x, double theta, std::complex<double> alpha) {
  const std::complex<double> rotated = std::polar(1.0, -theta) * alpha;
  const std::complex<double> exponent = -0.5 * x * x + std::numbers::sqrt2 * x * rotated -
                                        0.5 * rotated * rotated - 0.5 * std::norm(alpha);
  return pi_quarter_root_inv() * std::exp(exponent);
}

/// <x | kappa> = H_kappa(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^kappa kappa!)).
inline double overlap_fock(double x, int kappa) {
  if (kappa < 0) throw std::invalid_argument("overlap_fock: kappa must be non-negative");
  const double log_norm = -0.5 * (kappa * std::numbers::ln2 + log_factorial(kappa));
  const double h = hermite_phys(kappa, x);
  if (h == 0.0) return 0.0;
  const double sign = h < 0.0 ? -1.0 : 1.0;
  return sign * pi_quarter_root_inv() * std::exp(std::log(std::abs(h)) - 0.5 * x * x + log_norm);
}

/// <x_theta | signal> for any signal kind; Fock components rotate by e^{-i k theta}.
inline ComplexAmplitude overlap(double x, double theta, const SignalState& signal) {
  return std::visit(
      [&](const auto& s) -> ComplexAmplitude {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vacuum>) {
          return overlap_coherent(x, theta, 0.0);
        } else if constexpr (std::is_same_v<T, Coherent>) {
          return overlap_coherent(x, theta, s.alpha);
        } else if constexpr (std::is_same_v<T, Fock>) {
          return std::polar(1.0, -theta * s.kappa) * overlap_fock(x, s.kappa);
        } else {
          ComplexAmplitude sum{};
          for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
            if (s.coeffs[k] == ComplexAmplitude{}) continue;
            sum += s.coeffs[k] * std::polar(1.0, -theta * static_cast<double>(k)) *
                   overlap_fock(x, static_cast<int>(k));
          }
          return sum;
        }
      },
      signal.kind());
}

enum class DensityKind { projector, reflection_symmetric };

/// Limiting outcome density: |x_theta><x_theta| for a coherent LO,
/// (|x_theta><x_theta| + |-x_theta><-x_theta|)/2 for cat or mixed LOs.
struct AsymptoticDensity {
  DensityKind kind = DensityKind::projector;
  double theta = 0.0;
  SignalState signal;

  double operator()(double x) const {
    const double direct = std::norm(overlap(x, theta, signal));
    if (kind == DensityKind::projector) return direct;
    return 0.5 * (direct + std::norm(overlap(-x, theta, signal)));
  }
};

inline DensityKind limiting_kind(const LocalOscillatorSpec& lo) {
  return lo.kind == LoKind::coherent ? DensityKind::projector : DensityKind::reflection_symmetric;
}

inline double density(DensityKind kind, double theta, const SignalState& signal, double x) {
  return AsymptoticDensity{kind, theta, signal}(x);
}

/// G(beta) = (1 + erf(|beta|/sqrt2)) / 2.
inline double envelope_G(double beta_mag) {
  if (beta_mag < 0.0) throw std::invalid_argument("envelope_G: magnitude must be non-negative");
  return 0.5 * std::erfc(-beta_mag / std::numbers::sqrt2);
}

/// I(beta) = e^{-2 pi^2 |b|^2} e^{2 pi i |b|^2} (1 + erf((1 + 2 pi i)|b|/sqrt2)) / 2,
/// evaluated as e^{-2pi^2 b^2 + 2 pi i b^2} - e^{-z^2 - 2pi^2 b^2 + 2 pi i b^2} erfcx(z) / 2
/// so the large erf and the small envelope never meet in floating point.
inline std::complex<double> envelope_I(double beta_mag) {
  if (beta_mag < 0.0) throw std::invalid_argument("envelope_I: magnitude must be non-negative");
  const double pi = std::numbers::pi;
  const double b2 = beta_mag * beta_mag;
  const std::complex<double> z = std::complex<double>(1.0, 2.0 * pi) * (beta_mag / std::numbers::sqrt2);
  const std::complex<double> envelope_exp(-2.0 * pi * pi * b2, 2.0 * pi * b2);
  // envelope_exp - z^2 = -b^2/2 exactly.
  return std::exp(envelope_exp) - 0.5 * std::exp(-0.5 * b2) * erfcx_complex(z);
}

namespace detail {

inline constexpr std::array<double, 8> kGaussLegendreNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussLegendreWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace detail

/// Integral of f over [lo, hi] by 8-point Gauss-Legendre on `pieces` panels.
template <typename F>
double integrate_interval(const F& f, double lo, double hi, int pieces = 1) {
  const double h = (hi - lo) / pieces;
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double mid = lo + (p + 0.5) * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < detail::kGaussLegendreNodes.size(); ++i)
      acc += detail::kGaussLegendreWeights[i] * f(mid + 0.5 * h * detail::kGaussLegendreNodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

/// Lattice spacing (in d units) of the x-marginal's support: 2 when a cat LO
/// leaves one parity class of d empty, 1 otherwise. Also returns the parity
/// offset of the occupied class.
struct SupportLattice {
  int spacing = 1;
  int offset = 0;
};

inline SupportLattice support_lattice(const SumDiffDistribution& sd) {
  if (!sd.lo.is_cat()) return {};
  double even = 0.0, odd = 0.0;
  for (int d = sd.marginal_x.first; d <= sd.marginal_x.last(); ++d)
    (std::abs(d) % 2 == 0 ? even : odd) += sd.marginal_x.at(d);
  const double total = even + odd;
  if (odd <= 1e-15 * total) return {2, 0};
  if (even <= 1e-15 * total) return {2, 1};
  return {};
}

/// Total-variation distance between the lattice x-marginal and a reference
/// measure given by `bin_mass(x_lo, x_hi)`. Reference mass outside the
/// covered bins counts fully toward the distance.
template <typename BinMass>
double lattice_total_variation(const SumDiffDistribution& sd, const BinMass& bin_mass) {
  if (sd.scale == 0.0) throw ZeroScale("convergence_metric: zero scale");
  const SupportLattice lat = support_lattice(sd);
  double abs_diff = 0.0;
  double covered = 0.0;
  for (int d = sd.marginal_x.first; d <= sd.marginal_x.last(); ++d) {
    const double p = sd.marginal_x.at(d);
    if (lat.spacing == 2 && std::abs(d) % 2 != lat.offset) {
      abs_diff += p;
      continue;
    }
    const double half = 0.5 * lat.spacing;
    const double q = bin_mass((d - half) / sd.scale, (d + half) / sd.scale);
    covered += q;
    abs_diff += std::abs(p - q);
  }
  return 0.5 * (abs_diff + std::abs(1.0 - covered));
}

/// Distance between the finite-beta x-marginal and the limiting density,
/// with the density integrated over each occupied lattice bin.
inline double convergence_metric(const SumDiffDistribution& sd, const AsymptoticDensity& dens) {
  return lattice_total_variation(sd, [&](double lo, double hi) {
    return integrate_interval(dens, lo, hi, 2);
  });
}

/// Least-squares slope of log(metric) against log(beta).
inline double fitted_log_slope(std::span<const double> betas, std::span<const double> metrics) {
  if (betas.size() != metrics.size() || betas.size() < 2)
    throw std::invalid_argument("fitted_log_slope: need at least two matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double lx = std::log(betas[i]);
    const double ly = std::log(metrics[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace catodyne

#endif  // CATODYNE_ASYMPTOTICS_HPP
