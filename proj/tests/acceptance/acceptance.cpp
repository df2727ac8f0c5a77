// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Optional argv[1]: scratch directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "catodyne/catodyne.hpp"
#include "cli_app.hpp"

using namespace catodyne;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<SignalState>& criterion_signals() {
  static const std::vector<SignalState> s = {SignalState::vacuum(),   SignalState::coherent(0.8),
                                             SignalState::coherent(1.6), SignalState::fock(1),
                                             SignalState::fock(2),   SignalState::fock(3)};
  return s;
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  int outcomes = 0;
  for (double b : {0.5, 1.0, 2.0})
    for (const auto& lo : {LocalOscillatorSpec::coherent(b), LocalOscillatorSpec::cat(Parity::plus, b),
                           LocalOscillatorSpec::cat(Parity::minus, b)})
      for (const auto& s : criterion_signals()) {
        const auto rec = verify_pair(lo, s, 40);
        worst = std::max(worst, rec.max_abs_dev);
        outcomes += rec.outcomes;
      }
  return {worst <= 1e-8, std::to_string(outcomes) + " amplitudes, max |dev| = " + fmt("%.3e", worst)};
}

Outcome normalization(double& slowest) {
  double worst = 0.0;
  int configs = 0;
  std::vector<SignalState> sigs = criterion_signals();
  sigs.push_back(SignalState::coherent(-1.6));
  sigs.push_back(SignalState::fock(0));
  for (const auto& lo : {LocalOscillatorSpec::coherent(5.0), LocalOscillatorSpec::cat(Parity::plus, 5.0),
                         LocalOscillatorSpec::cat(Parity::minus, 5.0), LocalOscillatorSpec::mixed(5.0)})
    for (const auto& s : sigs) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto j = joint_distribution(lo, s);
      const double sum = j.total() + j.tail_bound;
      slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      worst = std::max(worst, std::abs(sum - 1.0));
      ++configs;
    }
  return {worst <= 1e-9 && slowest < 10.0,
          std::to_string(configs) + " configurations, max |sum - 1| = " + fmt("%.3e", worst) +
              ", slowest " + fmt("%.3f", slowest) + " s"};
}

Outcome parity_selection() {
  long violations = 0, checked = 0;
  for (int kappa = 0; kappa <= 3; ++kappa)
    for (double b : {1.0, 5.0})
      for (Parity p : {Parity::plus, Parity::minus}) {
        const auto j = joint_distribution(LocalOscillatorSpec::cat(p, b), SignalState::fock(kappa));
        for (int n = 0; n < j.side(); ++n)
          for (int m = 0; m < j.side(); ++m) {
            const bool odd = (n + m - kappa) % 2 != 0;
            if (odd == (p == Parity::plus)) {
              ++checked;
              if (j(n, m) != 0.0) ++violations;
            }
          }
      }
  return {violations == 0,
          std::to_string(checked) + " forbidden cells, " + std::to_string(violations) + " nonzero"};
}

Outcome cat_marginals() {
  double worst = 0.0, worst_exact = 0.0;
  for (double b : {1.0, 3.0, 5.0})
    for (Parity p : {Parity::plus, Parity::minus}) {
      const auto j = joint_distribution(LocalOscillatorSpec::cat(p, b), SignalState::vacuum());
      const auto mn = j.marginal_n();
      const auto mm = j.marginal_m();
      for (int k = 0; k < j.side(); ++k) {
        const double want = poisson_pmf(k, b * b / 2);
        worst = std::max({worst, std::abs(mn[k] - want), std::abs(mm[k] - want)});
        const double sgn = p == Parity::plus ? 1.0 : -1.0;
        const double alt = (k % 2 ? -1.0 : 1.0) * sgn;
        const double exact = want * (1 + alt * std::exp(-b * b)) / (1 + sgn * std::exp(-2 * b * b));
        worst_exact = std::max({worst_exact, std::abs(mn[k] - exact), std::abs(mm[k] - exact)});
      }
    }
  return {worst <= 1e-10, "max |marginal - Poisson(|b|^2/2)| = " + fmt("%.3e", worst) +
                             "; vs Poisson(|b|^2/2) (1 +/- (-1)^k e^{-b^2}) / (1 +/- e^{-2b^2}) = " +
                             fmt("%.3e", worst_exact)};
}

Outcome coherent_moments() {
  const double b = 5.0, a = 1.6;
  const auto sd = to_sumdiff(joint_distribution(LocalOscillatorSpec::coherent(b), SignalState::coherent(a)));
  double mean = 0.0, m2 = 0.0;
  for (const auto& c : sd.entries) {
    mean += c.prob * sd.x(c.d);
    m2 += c.prob * sd.x(c.d) * sd.x(c.d);
  }
  const double var = m2 - mean * mean;
  const double want_mean = std::sqrt(2.0) * a;
  const double want_var = 0.5 + a * a / (2 * b * b);
  return {std::abs(mean - want_mean) <= 1e-6 && std::abs(var - want_var) <= 1e-6,
          "mean x = " + fmt("%.9f", mean) + " (want " + fmt("%.9f", want_mean) + "), var x = " +
              fmt("%.9f", var) + " (want " + fmt("%.9f", want_var) + ")"};
}

Outcome reflection_symmetry() {
  double worst = 0.0;
  for (Parity p : {Parity::plus, Parity::minus}) {
    const auto lo = LocalOscillatorSpec::cat(p, 5.0);
    const auto a = joint_distribution(lo, SignalState::coherent(1.6));
    const auto b = joint_distribution(lo, SignalState::coherent(-1.6));
    if (a.n_max != b.n_max) return {false, "cutoffs differ"};
    for (std::size_t i = 0; i < a.probs.size(); ++i) worst = std::max(worst, std::abs(a.probs[i] - b.probs[i]));
  }
  return {worst <= 1e-12, "max |P(+1.6) - P(-1.6)| = " + fmt("%.3e", worst)};
}

Outcome convergence(double& elapsed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> betas = {2, 3, 4, 6}, metrics;
  for (double b : betas) {
    const auto lo = LocalOscillatorSpec::coherent(b);
    const auto sd = to_sumdiff(joint_distribution(lo, SignalState::vacuum()));
    metrics.push_back(convergence_metric(sd, AsymptoticDensity{limiting_kind(lo), 0.0, SignalState::vacuum()}));
  }
  elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool monotone = true;
  for (std::size_t i = 1; i < metrics.size(); ++i) monotone = monotone && metrics[i] <= metrics[i - 1];
  const double ratio = metrics.front() / metrics.back();
  std::string detail = "metrics";
  for (double m : metrics) detail += " " + fmt("%.4e", m);
  detail += ", ratio b=2/b=6 " + fmt("%.2f", ratio) + ", slope " + fmt("%.2f", fitted_log_slope(betas, metrics));
  return {monotone && ratio >= 3.0 && elapsed < 30.0, detail};
}

Outcome remote_prep() {
  const double p = prob_q(2.0, SqueezingParam(0.345));
  const double db = r_to_db(0.345);
  double worst = 0.0;
  for (double q : {0.5, 1.0, 2.0})
    for (Parity par : {Parity::plus, Parity::minus})
      for (double r : {0.345, 0.691, 1.382})
        worst = std::max(worst, std::abs(remote_wavefunction({q, par}, SqueezingParam(r)).norm2() - 1.0));
  return {std::abs(p - 1.17e-3) <= 5e-5 && std::abs(db - 3.0) <= 0.01 && worst <= 1e-6,
          "prob_q(2, 0.345) = " + fmt("%.6e", p) + ", dB(0.345) = " + fmt("%.4f", db) +
              ", max |norm - 1| = " + fmt("%.2e", worst)};
}

Outcome efficiency() {
  const auto lo = LocalOscillatorSpec::cat(Parity::plus, 5.0);
  const auto sig = SignalState::coherent(1.6);
  const auto ideal = joint_distribution(lo, sig);
  const auto unit = joint_distribution(lo, sig, std::nullopt, 1.0);
  const auto unit_smeared = smear_efficiency(ideal, 1.0);
  const bool identity = unit.probs == ideal.probs && unit_smeared.probs == ideal.probs;
  const auto lossy = joint_distribution(lo, sig, std::nullopt, 0.7);
  auto mean_total = [](const JointClickDistribution& j) {
    double s = 0.0;
    for (int n = 0; n < j.side(); ++n)
      for (int m = 0; m < j.side(); ++m) s += (n + m) * j(n, m);
    return s;
  };
  const double norm_dev = std::abs(lossy.total() + lossy.tail_bound - 1.0);
  const double m1 = mean_total(ideal), m07 = mean_total(lossy);
  return {identity && norm_dev <= 1e-9 && m07 < m1,
          std::string("eta=1 bit-exact: ") + (identity ? "yes" : "no") + ", eta=0.7 |sum - 1| = " +
              fmt("%.3e", norm_dev) + ", <n+m> " + fmt("%.4f", m1) + " -> " + fmt("%.4f", m07)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args, const fs::path& out) {
  args.insert(args.begin(), "catodyne");
  args.push_back("--out");
  args.push_back(out.string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream sink;
  return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
}

Outcome determinism(const fs::path& scratch) {
  const std::vector<std::vector<std::string>> commands = {
      {"clicks", "--lo", "cat+:5", "--signal", "vacuum"},
      {"sumdiff", "--lo", "cat-:5", "--signal", "fock:2"},
      {"asymptote", "--kind", "reflection", "--signal", "coherent:1.6"},
      {"remote-prep", "--q", "2", "--parity", "+", "--r", "1.382"},
      {"prq", "--r-db", "3", "--q-max", "3"},
      {"sweep", "--lo-kind", "coherent", "--signal", "vacuum", "--betas", "2,3,4,6"},
      {"verify", "--beta", "2", "--signals", "vacuum,coherent:0.8,fock:1,fock:2,fock:3"},
  };
  int files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const fs::path a = scratch / ("run" + std::to_string(i)) / "a";
    const fs::path b = scratch / ("run" + std::to_string(i)) / "b";
    fs::remove_all(a.parent_path());
    if (run_cli(commands[i], a) != 0 || run_cli(commands[i], b) != 0)
      return {false, "command failed: " + commands[i][0]};
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename()))
        return {false, "differs: " + commands[i][0] + " " + e.path().filename().string()};
    }
  }
  return {files > 0, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                         " CSV files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "catodyne_acceptance";
  fs::create_directories(scratch);

  double slowest_config = 0.0, convergence_time = 0.0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence (n+m <= 40, tol 1e-8, < 60 s)", [] { return oracle_equivalence(); }},
      {"normalization at beta=5 (tol 1e-9, < 10 s each)", [&] { return normalization(slowest_config); }},
      {"parity selection (exact zeros)", [] { return parity_selection(); }},
      {"cat-LO detector marginals are Poisson (tol 1e-10)", [] { return cat_marginals(); }},
      {"coherent-LO quadrature moments (tol 1e-6)", [] { return coherent_moments(); }},
      {"reflection symmetry alpha -> -alpha (tol 1e-12)", [] { return reflection_symmetry(); }},
      {"convergence to limiting density (< 30 s)", [&] { return convergence(convergence_time); }},
      {"remote preparation", [] { return remote_prep(); }},
      {"efficiency smearing", [] { return efficiency(); }},
      {"CLI determinism", [&] { return determinism(scratch); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (i == 0 && secs >= 60.0) o.pass = false;
    failures += !o.pass;
    std::printf("%s  criterion %2zu: %s | %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
