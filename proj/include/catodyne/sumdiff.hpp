#ifndef CATODYNE_SUMDIFF_HPP
#define CATODYNE_SUMDIFF_HPP

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <vector>

#include "catodyne/errors.hpp"
#include "catodyne/exactclicks.hpp"

namespace catodyne {

/// One occupied lattice point: d = n - m, s = n + m.
struct LatticeCell {
  int d = 0;
  int s = 0;
  double prob = 0.0;
};

/// Mass on a contiguous run of integer lattice sites starting at `first`.
struct LatticeMarginal {
  int first = 0;
  std::vector<double> mass;

  int last() const { return first + static_cast<int>(mass.size()) - 1; }
  double at(int i) const {
    if (i < first || i > last()) return 0.0;
    return mass[i - first];
  }
  double total() const {
    double t = 0.0;
    for (double p : mass) t += p;
    return t;
  }
};

/// Joint click mass re-indexed by integer (d, s); physical coordinates are
/// x = d / scale and w = s / scale with scale = sqrt2 |beta|.
struct SumDiffDistribution {
  std::vector<LatticeCell> entries;  // sorted by (d, s), zero cells omitted
  double scale = 0.0;
  LatticeMarginal marginal_x;  // indexed by d
  LatticeMarginal marginal_w;  // indexed by s
  LocalOscillatorSpec lo;
  int n_max = 0;

  double x(int d) const { return d / scale; }
  double w(int s) const { return s / scale; }
};

inline SumDiffDistribution to_sumdiff(const JointClickDistribution& joint) {
  if (joint.lo.magnitude == 0.0) throw ZeroScale("to_sumdiff: |beta| = 0 gives a zero scale");
  SumDiffDistribution sd;
  sd.scale = std::numbers::sqrt2 * joint.lo.magnitude;
  sd.lo = joint.lo;
  sd.n_max = joint.n_max;
  const int side = joint.side();

  // Walk d ascending, then s ascending, so entries come out sorted.
  for (int d = -joint.n_max; d <= joint.n_max; ++d) {
    const int m0 = d >= 0 ? 0 : -d;
    for (int m = m0; m + d < side && m < side; ++m) {
      const int n = m + d;
      const double p = joint(n, m);
      if (p != 0.0) sd.entries.push_back({d, n + m, p});
    }
  }

  sd.marginal_x.first = -joint.n_max;
  sd.marginal_x.mass.assign(2 * joint.n_max + 1, 0.0);
  sd.marginal_w.first = 0;
  sd.marginal_w.mass.assign(2 * joint.n_max + 1, 0.0);
  for (const auto& c : sd.entries) {
    sd.marginal_x.mass[c.d - sd.marginal_x.first] += c.prob;
    sd.marginal_w.mass[c.s] += c.prob;
  }
  return sd;
}

struct ParityReport {
  double mass_even_d = 0.0;
  double mass_odd_d = 0.0;
  double mass_even_s = 0.0;
  double mass_odd_s = 0.0;
  /// Parity class of s that the LO/signal combination forbids, if any.
  std::optional<Parity> suppressed_s;
  /// Mass found in the suppressed class (zero when the selection rule holds).
  double residual = 0.0;
};

/// Mass per parity class. For cat LOs and definite-parity signals, the total
/// count s must have parity (signal parity) x (LO parity).
inline ParityReport parity_report(const SumDiffDistribution& sd,
                                  std::optional<Parity> signal_parity) {
  ParityReport r;
  for (const auto& c : sd.entries) {
    (std::abs(c.d) % 2 == 0 ? r.mass_even_d : r.mass_odd_d) += c.prob;
    (c.s % 2 == 0 ? r.mass_even_s : r.mass_odd_s) += c.prob;
  }
  if (sd.lo.is_cat() && signal_parity) {
    const bool allowed_even = (*signal_parity == sd.lo.parity());
    r.suppressed_s = allowed_even ? Parity::minus : Parity::plus;
    r.residual = allowed_even ? r.mass_odd_s : r.mass_even_s;
  }
  return r;
}

}  // namespace catodyne

#endif  // CATODYNE_SUMDIFF_HPP
