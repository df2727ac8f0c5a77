#ifndef CATODYNE_VERIFY_HPP
#define CATODYNE_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "catodyne/exactclicks.hpp"
#include "catodyne/oracle.hpp"
#include "catodyne/states.hpp"

namespace catodyne {

/// Worst closed-form vs brute-force amplitude deviation for one
/// (LO, signal) pair over all outcomes with n + m <= max_total.
struct VerifyRecord {
  LocalOscillatorSpec lo;
  SignalState signal;
  std::string signal_label;
  int max_total = 0;
  int outcomes = 0;
  double max_abs_dev = 0.0;
};

inline VerifyRecord verify_pair(const LocalOscillatorSpec& lo, const SignalState& signal,
                                int max_total) {
  // The LO vector must reach n + m; the signal vector is cut where its own
  // tail is negligible (Fock and vacuum signals are exact).
  const int lo_cut = std::max(max_total, choose_cutoff(lo, SignalState::vacuum(), 1e-14));
  const int sig_cut =
      std::max(max_total, static_cast<int>(std::ceil(signal.mean_photon_number())) + 60);
  oracle::TwoModeAmplitudeQuery q;
  q.signal_vec = to_fock(signal, sig_cut, oracle::kOracleTailTolerance);
  q.lo_vec = to_fock(lo, lo_cut, oracle::kOracleTailTolerance);

  VerifyRecord rec{lo, signal, "", max_total, 0, 0.0};
  const std::complex<double> beta = lo.beta();
  for (int total = 0; total <= max_total; ++total) {
    for (int n = 0; n <= total; ++n) {
      q.n = n;
      q.m = total - n;
      const ComplexAmplitude brute = oracle::amplitude_bruteforce(q);
      const ComplexAmplitude closed =
          lo.kind == LoKind::coherent ? amp_coherent_lo(q.n, q.m, beta, signal)
                                      : amp_cat_lo(q.n, q.m, beta, lo.parity(), signal);
      rec.max_abs_dev = std::max(rec.max_abs_dev, std::abs(brute - closed));
      ++rec.outcomes;
    }
  }
  return rec;
}

}  // namespace catodyne

#endif  // CATODYNE_VERIFY_HPP
