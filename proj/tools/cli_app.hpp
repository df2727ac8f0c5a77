#ifndef CATODYNE_TOOLS_CLI_APP_HPP
#define CATODYNE_TOOLS_CLI_APP_HPP

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catodyne/catodyne.hpp"

namespace catodyne::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct Squeezing {
  std::optional<double> r;
  std::optional<double> r_db;

  SqueezingParam get() const {
    if (r) return SqueezingParam(*r);
    return SqueezingParam::from_db(*r_db);
  }
};

inline void add_squeezing(CLI::App* sub, Squeezing& sq) {
  auto* r = sub->add_option("--r", sq.r, "squeezing parameter r");
  auto* db = sub->add_option("--r-db", sq.r_db, "squeezing in dB");
  r->excludes(db);
  db->excludes(r);
}

inline std::vector<double> parse_number_list(const std::string& text) {
  return catodyne::detail::parse_numbers(text, text);
}

inline std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

inline LocalOscillatorSpec lo_of_kind(const std::string& kind, double mag, double theta) {
  if (kind == "coherent") return LocalOscillatorSpec::coherent(mag, theta);
  if (kind == "cat+") return LocalOscillatorSpec::cat(Parity::plus, mag, theta);
  if (kind == "cat-") return LocalOscillatorSpec::cat(Parity::minus, mag, theta);
  if (kind == "mixed") return LocalOscillatorSpec::mixed(mag, theta);
  throw SpecParseError("unknown LO kind '" + kind + "'");
}

/// Uniform grid lo, lo + h, ... up to hi; point i is computed as lo + i*h.
inline std::vector<double> uniform_grid(double lo, double hi, double h) {
  if (!(h > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid needs x-max >= x-min and dx > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / h + 1e-9)) + 1;
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = lo + static_cast<double>(i) * h;
  return xs;
}

}  // namespace detail

/// Runs the command-line tool. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  namespace fs = std::filesystem;
  CLI::App app{"catodyne: photon-counting cat-state measurement toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->envname("CATODYNE_OUT");

  std::function<int()> action;

  // clicks / sumdiff share the distribution flags.
  struct DistArgs {
    std::string lo;
    std::string signal = "vacuum";
    std::optional<int> n_max;
    double eta = 1.0;
    bool json = false;
  };
  DistArgs clicks_args, sumdiff_args;
  auto add_dist = [](CLI::App* sub, DistArgs& a) {
    sub->add_option("--lo", a.lo, "LO spec, e.g. cat+:5")->required();
    sub->add_option("--signal", a.signal, "signal spec, e.g. fock:2");
    sub->add_option("--n-max", a.n_max, "per-detector cutoff (default: automatic)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--eta", a.eta, "detector efficiency in (0, 1]");
  };
  auto dist_manifest = [](const std::string& command, const DistArgs& a,
                          const JointClickDistribution& j) {
    RunManifest m;
    m.command = command;
    m.params = {{"lo", format_lo(j.lo)}, {"signal", format_signal(j.signal)},
                {"n_max", a.n_max ? nlohmann::json(*a.n_max) : nlohmann::json("auto")},
                {"eta", a.eta}};
    m.n_max = j.n_max;
    m.tail_bound = j.tail_bound;
    m.eta = j.eta;
    return m;
  };
  auto make_joint = [](const DistArgs& a) {
    return joint_distribution(parse_lo(a.lo), parse_signal(a.signal), a.n_max, a.eta);
  };

  auto* clicks = app.add_subcommand("clicks", "joint click distribution P(n, m)");
  add_dist(clicks, clicks_args);
  clicks->add_flag("--json", clicks_args.json, "also write clicks.json");
  clicks->callback([&] {
    action = [&] {
      const auto joint = make_joint(clicks_args);
      const auto manifest = dist_manifest("clicks", clicks_args, joint);
      const fs::path csv = fs::path(out_dir) / "clicks.csv";
      write_with_manifest(csv, manifest, [&](std::ostream& os) { write_joint_csv(os, joint); });
      if (clicks_args.json) {
        const fs::path js = fs::path(out_dir) / "clicks.json";
        write_with_manifest(js, manifest,
                            [&](std::ostream& os) { os << to_json(joint).dump(1) << '\n'; });
      }
      out << "clicks: n_max=" << joint.n_max << " tail_bound=" << format_double(joint.tail_bound)
          << " total=" << format_double(joint.total()) << " -> " << csv.string() << '\n';
      return kExitOk;
    };
  });

  auto* sumdiff = app.add_subcommand("sumdiff", "sum/difference lattice and marginals");
  add_dist(sumdiff, sumdiff_args);
  sumdiff->callback([&] {
    action = [&] {
      const auto joint = make_joint(sumdiff_args);
      const auto sd = to_sumdiff(joint);
      const auto manifest = dist_manifest("sumdiff", sumdiff_args, joint);
      const fs::path dir(out_dir);
      write_with_manifest(dir / "sumdiff.csv", manifest,
                          [&](std::ostream& os) { write_lattice_csv(os, sd); });
      write_with_manifest(dir / "sumdiff_x.csv", manifest,
                          [&](std::ostream& os) { write_marginal_x_csv(os, sd); });
      write_with_manifest(dir / "sumdiff_w.csv", manifest,
                          [&](std::ostream& os) { write_marginal_w_csv(os, sd); });
      const auto rep = parity_report(sd, joint.signal.definite_parity());
      out << "sumdiff: scale=" << format_double(sd.scale) << " even_d=" << format_double(rep.mass_even_d)
          << " odd_d=" << format_double(rep.mass_odd_d) << " even_s=" << format_double(rep.mass_even_s)
          << " odd_s=" << format_double(rep.mass_odd_s);
      if (rep.suppressed_s) {
        out << " suppressed_s=" << (*rep.suppressed_s == Parity::plus ? "even" : "odd")
            << " residual=" << format_double(rep.residual);
      }
      out << '\n';
      return kExitOk;
    };
  });

  struct AsymArgs {
    std::string kind = "projector";
    std::string signal = "vacuum";
    double theta = 0.0;
    double x_min = -6.0, x_max = 6.0, dx = 0.01;
  } asym;
  auto* asymptote = app.add_subcommand("asymptote", "limiting outcome density on an x grid");
  asymptote->add_option("--kind", asym.kind, "projector | reflection")
      ->check(CLI::IsMember({"projector", "reflection"}));
  asymptote->add_option("--signal", asym.signal, "signal spec");
  asymptote->add_option("--theta", asym.theta, "quadrature angle (rad)");
  asymptote->add_option("--x-min", asym.x_min, "grid start");
  asymptote->add_option("--x-max", asym.x_max, "grid end");
  asymptote->add_option("--dx", asym.dx, "grid spacing");
  asymptote->callback([&] {
    action = [&] {
      const auto signal = parse_signal(asym.signal);
      const AsymptoticDensity dens{
          asym.kind == "projector" ? DensityKind::projector : DensityKind::reflection_symmetric,
          asym.theta, signal};
      const auto xs = detail::uniform_grid(asym.x_min, asym.x_max, asym.dx);
      std::vector<double> vals(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = dens(xs[i]);
      RunManifest m;
      m.command = "asymptote";
      m.params = {{"kind", asym.kind}, {"signal", format_signal(signal)}, {"theta", asym.theta},
                  {"x_min", asym.x_min}, {"x_max", asym.x_max}, {"dx", asym.dx}};
      const fs::path csv = fs::path(out_dir) / "asymptote.csv";
      write_with_manifest(csv, m, [&](std::ostream& os) { write_density_csv(os, xs, vals); });
      out << "asymptote: " << xs.size() << " points -> " << csv.string() << '\n';
      return kExitOk;
    };
  });

  struct RemoteArgs {
    double q = 0.0;
    std::string parity = "+";
    detail::Squeezing sq;
    std::optional<double> x_min, x_max, dx;
  } remote;
  auto* remote_prep = app.add_subcommand("remote-prep", "conditional wavefunction of the retained mode");
  remote_prep->add_option("--q", remote.q, "position outcome q")->required();
  remote_prep->add_option("--parity", remote.parity, "+ or -")->check(CLI::IsMember({"+", "-"}));
  detail::add_squeezing(remote_prep, remote.sq);
  remote_prep->add_option("--x-min", remote.x_min, "grid start (default: automatic)");
  remote_prep->add_option("--x-max", remote.x_max, "grid end");
  remote_prep->add_option("--dx", remote.dx, "grid spacing");
  remote_prep->callback([&] {
    if (!remote.sq.r && !remote.sq.r_db) throw CLI::RequiredError("--r or --r-db");
    const int given = int(remote.x_min.has_value()) + int(remote.x_max.has_value()) + int(remote.dx.has_value());
    if (given != 0 && given != 3) throw CLI::ValidationError("--x-min, --x-max and --dx go together");
    action = [&] {
      const SqueezingParam r = remote.sq.get();
      const RemoteOutcome outcome{remote.q, remote.parity == "+" ? Parity::plus : Parity::minus};
      std::optional<GridSpec> grid;
      if (remote.dx) grid = GridSpec{*remote.x_min, *remote.x_max, *remote.dx};
      const auto wf = remote_wavefunction(outcome, r, grid);
      RunManifest m;
      m.command = "remote-prep";
      m.params = {{"q", remote.q}, {"parity", remote.parity}, {"r", r.r()}, {"r_db", r.db()},
                  {"x_min", wf.xs.front()}, {"x_max", wf.xs.back()}, {"dx", wf.dx}};
      const fs::path csv = fs::path(out_dir) / "remote_prep.csv";
      write_with_manifest(csv, m, [&](std::ostream& os) { write_wavefunction_csv(os, wf); });
      out << "remote-prep: r=" << format_double(r.r()) << " norm=" << format_double(wf.norm2())
          << " -> " << csv.string() << '\n';
      return kExitOk;
    };
  });

  struct PrqArgs {
    detail::Squeezing sq;
    double q_max = 3.0;
    double dq = 0.01;
  } prq_args;
  auto* prq = app.add_subcommand("prq", "outcome density of q over [-q_max, q_max]");
  detail::add_squeezing(prq, prq_args.sq);
  prq->add_option("--q-max", prq_args.q_max, "largest |q|")->check(CLI::PositiveNumber);
  prq->add_option("--dq", prq_args.dq, "grid spacing")->check(CLI::PositiveNumber);
  prq->callback([&] {
    if (!prq_args.sq.r && !prq_args.sq.r_db) throw CLI::RequiredError("--r or --r-db");
    action = [&] {
      const SqueezingParam r = prq_args.sq.get();
      // q = i / k keeps round values such as q = 2 exact on the grid.
      const double k = std::max(1.0, std::round(1.0 / prq_args.dq));
      const auto imax = static_cast<long>(std::floor(prq_args.q_max * k + 1e-9));
      std::vector<double> qs, ps;
      for (long i = -imax; i <= imax; ++i) {
        qs.push_back(static_cast<double>(i) / k);
        ps.push_back(prob_q(qs.back(), r));
      }
      RunManifest m;
      m.command = "prq";
      m.params = {{"r", r.r()}, {"r_db", r.db()}, {"q_max", prq_args.q_max}, {"dq", 1.0 / k}};
      const fs::path csv = fs::path(out_dir) / "prq.csv";
      write_with_manifest(csv, m, [&](std::ostream& os) { write_prq_csv(os, qs, ps); });
      out << "prq: r=" << format_double(r.r()) << " prob(q=2)=" << format_double(prob_q(2.0, r))
          << " -> " << csv.string() << '\n';
      return kExitOk;
    };
  });

  struct SweepArgs {
    std::string lo_kind = "coherent";
    std::string signal = "vacuum";
    std::string betas = "2,3,4,6";
    double theta = 0.0;
  } sweep_args;
  auto* sweep = app.add_subcommand("sweep", "convergence of the x-marginal to the limiting density");
  sweep->add_option("--lo-kind", sweep_args.lo_kind, "coherent | cat+ | cat- | mixed")
      ->check(CLI::IsMember({"coherent", "cat+", "cat-", "mixed"}));
  sweep->add_option("--signal", sweep_args.signal, "signal spec");
  sweep->add_option("--betas", sweep_args.betas, "comma list of |beta| values");
  sweep->add_option("--theta", sweep_args.theta, "LO phase (rad)");
  sweep->callback([&] {
    action = [&] {
      const auto signal = parse_signal(sweep_args.signal);
      const auto betas = detail::parse_number_list(sweep_args.betas);
      std::vector<double> metrics;
      for (double b : betas) {
        const auto lo = detail::lo_of_kind(sweep_args.lo_kind, b, sweep_args.theta);
        const auto sd = to_sumdiff(joint_distribution(lo, signal));
        metrics.push_back(
            convergence_metric(sd, AsymptoticDensity{limiting_kind(lo), sweep_args.theta, signal}));
      }
      RunManifest m;
      m.command = "sweep";
      m.params = {{"lo_kind", sweep_args.lo_kind}, {"signal", format_signal(signal)},
                  {"betas", betas}, {"theta", sweep_args.theta}};
      const fs::path dir(out_dir);
      write_with_manifest(dir / "sweep.csv", m,
                          [&](std::ostream& os) { write_sweep_csv(os, betas, metrics); });
      nlohmann::json diag = {{"betas", betas}, {"metrics", metrics}};
      if (betas.size() >= 2) {
        const double slope = fitted_log_slope(betas, metrics);
        diag["fitted_slope"] = slope;
        out << "sweep: fitted log-log slope " << format_double(slope) << '\n';
      }
      write_with_manifest(dir / "sweep.json", m,
                          [&](std::ostream& os) { os << diag.dump(2) << '\n'; });
      for (std::size_t i = 0; i < betas.size(); ++i)
        out << "  beta=" << format_double(betas[i]) << " metric=" << format_double(metrics[i]) << '\n';
      return kExitOk;
    };
  });

  struct VerifyArgs {
    double beta = 2.0;
    std::string signals = "vacuum,coherent:0.8,fock:1,fock:2,fock:3";
    std::string lo_kinds = "coherent,cat+,cat-";
    int max_total = 40;
    double tol = 1e-8;
  } verify_args;
  auto* verify = app.add_subcommand("verify", "closed-form amplitudes against the brute-force oracle");
  verify->add_option("--beta", verify_args.beta, "LO magnitude")->check(CLI::PositiveNumber);
  verify->add_option("--signals", verify_args.signals, "comma list of signal specs");
  verify->add_option("--lo-kinds", verify_args.lo_kinds, "comma list from coherent, cat+, cat-");
  verify->add_option("--max-total", verify_args.max_total, "largest n + m checked")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--tol", verify_args.tol, "absolute tolerance");
  verify->callback([&] {
    action = [&] {
      std::vector<SignalState> signals;
      for (const auto& s : split_signal_list(verify_args.signals)) signals.push_back(parse_signal(s));
      std::vector<LocalOscillatorSpec> los;
      for (const auto& kind : detail::split_commas(verify_args.lo_kinds)) {
        if (kind == "mixed") throw SpecParseError("verify: mixed LOs have no single amplitude");
        los.push_back(detail::lo_of_kind(kind, verify_args.beta, 0.0));
      }
      std::vector<VerifyRecord> records;
      double worst = 0.0;
      for (const auto& lo : los)
        for (const auto& s : signals) {
          records.push_back(verify_pair(lo, s, verify_args.max_total));
          worst = std::max(worst, records.back().max_abs_dev);
        }
      RunManifest m;
      m.command = "verify";
      m.params = {{"beta", verify_args.beta}, {"signals", verify_args.signals},
                  {"lo_kinds", verify_args.lo_kinds}, {"max_total", verify_args.max_total},
                  {"tol", verify_args.tol}};
      const fs::path csv = fs::path(out_dir) / "verify.csv";
      write_with_manifest(csv, m, [&](std::ostream& os) { write_verify_csv(os, records); });
      for (const auto& r : records)
        out << "  " << format_lo(r.lo) << " " << format_signal(r.signal)
            << " max_abs_dev=" << format_double(r.max_abs_dev) << '\n';
      const bool ok = worst <= verify_args.tol;
      out << "verify: max abs deviation " << format_double(worst) << (ok ? " <= " : " > ")
          << format_double(verify_args.tol) << (ok ? " (pass)" : " (FAIL)") << '\n';
      return ok ? kExitOk : kExitFailure;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const SpecParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    return action();
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << " (bound " << format_double(e.bound()) << ")\n";
    return kExitFailure;
  } catch (const CutoffError& e) {
    err << "error: " << e.what() << " (bound " << format_double(e.bound()) << ")\n";
    return kExitFailure;
  } catch (const SpecParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateCat& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateOutcome& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ZeroScale& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace catodyne::cli

#endif  // CATODYNE_TOOLS_CLI_APP_HPP
