#ifndef CATODYNE_REMOTEPREP_HPP
#define CATODYNE_REMOTEPREP_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/states.hpp"

namespace catodyne {

/// Two-mode squeezing strength r >= 0; r_dB = 10 log10 e^{2r}.
class SqueezingParam {
 public:
  explicit SqueezingParam(double r) : r_(r) {
    if (!(r >= 0.0)) throw std::invalid_argument("squeezing r must be non-negative");
  }
  static SqueezingParam from_db(double r_db) {
    if (!(r_db >= 0.0)) throw std::invalid_argument("squeezing in dB must be non-negative");
    return SqueezingParam(r_db * std::numbers::ln10 / 20.0);
  }

  double r() const { return r_; }
  double db() const { return 20.0 * r_ / std::numbers::ln10; }

 private:
  double r_;
};

inline double r_to_db(double r) { return SqueezingParam(r).db(); }
inline double db_to_r(double r_db) { return SqueezingParam::from_db(r_db).r(); }

struct RemoteOutcome {
  double q = 0.0;
  Parity parity = Parity::plus;
};

struct WavefunctionGrid {
  std::vector<double> xs;
  std::vector<std::complex<double>> psi;
  double dx = 0.0;

  double norm2() const {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * dx;
  }
};

/// Uniform grid from x_min in steps of dx, covering x_max.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;

  std::size_t points() const {
    return static_cast<std::size_t>(std::floor((x_max - x_min) / dx + 1e-9)) + 1;
  }
};

/// Lobe centre |q| tanh 2r and amplitude width 1/sqrt(2 cosh 2r).
inline double remote_lobe_center(double q, const SqueezingParam& r) {
  return std::abs(q) * std::tanh(2.0 * r.r());
}
inline double remote_lobe_sigma(const SqueezingParam& r) {
  return 1.0 / std::sqrt(2.0 * std::cosh(2.0 * r.r()));
}

/// Default grid: +/-(|q| tanh2r + 8 sigma) with spacing sigma/50.
inline GridSpec default_remote_grid(double q, const SqueezingParam& r) {
  const double sigma = remote_lobe_sigma(r);
  const double half = remote_lobe_center(q, r) + 8.0 * sigma;
  const double dx = sigma / 50.0;
  const double steps = std::ceil(2.0 * half / dx);
  return {-half, -half + steps * dx, dx};
}

namespace detail {

struct RemoteProfile {
  double c2 = 0.0;         // cosh 2r
  double shift = 0.0;      // q tanh 2r
  double sign = 1.0;       // +/- branch
  double prefactor = 0.0;  // normalization
};

inline RemoteProfile remote_profile(const RemoteOutcome& outcome, const SqueezingParam& r) {
  if (!(r.r() > 0.0)) throw std::invalid_argument("remote_wavefunction: r must be positive");
  if (outcome.parity == Parity::minus && outcome.q == 0.0) {
    throw DegenerateOutcome("remote_wavefunction: the odd branch vanishes identically at q = 0");
  }
  RemoteProfile p;
  p.c2 = std::cosh(2.0 * r.r());
  const double t2 = std::tanh(2.0 * r.r());
  p.shift = outcome.q * t2;
  p.sign = parity_sign(outcome.parity);
  const double energy = outcome.q * outcome.q * std::sinh(2.0 * r.r()) * t2;
  const double log1p_term = outcome.parity == Parity::plus
                                ? std::log1p(std::exp(-2.0 * energy))
                                : std::log(-std::expm1(-2.0 * energy));
  p.prefactor = std::pow(p.c2 / (2.0 * std::numbers::pi), 0.25) * std::exp(-0.5 * log1p_term);
  return p;
}

inline double remote_value(const RemoteProfile& p, double x) {
  const double left = std::exp(-p.c2 * (x + p.shift) * (x + p.shift));
  const double right = std::exp(-p.c2 * (x - p.shift) * (x - p.shift));
  return p.prefactor * (left + p.sign * right);
}

}  // namespace detail

/// Conditional wavefunction of the retained mode after outcome (q, +/-):
///   (cosh2r/2pi)^{1/4} e^{E} / sqrt(e^{2E} +/- 1)
///   * [exp(-cosh2r (x + q tanh2r)^2) +/- exp(-cosh2r (x - q tanh2r)^2)],
/// E = q^2 sinh2r tanh2r. The prefactor is formed as
/// exp(-log1p(+/- e^{-2E}) / 2) so large E cannot overflow.
inline std::complex<double> remote_psi(double x, const RemoteOutcome& outcome,
                                       const SqueezingParam& r) {
  return detail::remote_value(detail::remote_profile(outcome, r), x);
}

inline WavefunctionGrid remote_wavefunction(const RemoteOutcome& outcome, const SqueezingParam& r,
                                            std::optional<GridSpec> grid = std::nullopt) {
  const detail::RemoteProfile profile = detail::remote_profile(outcome, r);
  const GridSpec g = grid ? *grid : default_remote_grid(outcome.q, r);
  if (!(g.dx > 0.0) || !(g.x_max > g.x_min)) throw GridError("remote_wavefunction: empty grid");
  const double reach = remote_lobe_center(outcome.q, r) + 6.0 * remote_lobe_sigma(r);
  if (g.x_min > -reach || g.x_min + (g.points() - 1) * g.dx < reach) {
    throw GridError("remote_wavefunction: grid must contain +/-" + detail::short_num(reach));
  }

  WavefunctionGrid out;
  out.dx = g.dx;
  const std::size_t count = g.points();
  out.xs.resize(count);
  out.psi.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = g.x_min + static_cast<double>(i) * g.dx;
    out.xs[i] = x;
    out.psi[i] = detail::remote_value(profile, x);
  }
  return out;
}

/// Outcome density sqrt(2 sech2r / pi) exp(-2 q^2 sech2r).
inline double prob_q(double q, const SqueezingParam& r) {
  const double sech = 1.0 / std::cosh(2.0 * r.r());
  return std::sqrt(2.0 * sech / std::numbers::pi) * std::exp(-2.0 * q * q * sech);
}

}  // namespace catodyne

#endif  // CATODYNE_REMOTEPREP_HPP
