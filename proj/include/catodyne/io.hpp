#ifndef CATODYNE_IO_HPP
#define CATODYNE_IO_HPP

// CSV and JSON serialization. Every number is written with %.17g so output
// round-trips and diffs stay stable.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "catodyne/asymptotics.hpp"
#include "catodyne/exactclicks.hpp"
#include "catodyne/remoteprep.hpp"
#include "catodyne/spec_parse.hpp"
#include "catodyne/sumdiff.hpp"
#include "catodyne/verify.hpp"

namespace catodyne {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

template <typename... Ts>
void csv_row(std::ostream& os, const Ts&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>) {
      os << format_double(f);
    } else {
      os << f;
    }
  };
  (put(fields), ...);
  os << '\n';
}

}  // namespace detail

inline void write_joint_csv(std::ostream& os, const JointClickDistribution& joint) {
  os << "n,m,prob\n";
  for (int n = 0; n < joint.side(); ++n)
    for (int m = 0; m < joint.side(); ++m) detail::csv_row(os, n, m, joint(n, m));
}

inline void write_lattice_csv(std::ostream& os, const SumDiffDistribution& sd) {
  os << "d,s,prob\n";
  for (const auto& c : sd.entries) detail::csv_row(os, c.d, c.s, c.prob);
}

inline void write_marginal_x_csv(std::ostream& os, const SumDiffDistribution& sd) {
  os << "d,x,prob\n";
  for (int d = sd.marginal_x.first; d <= sd.marginal_x.last(); ++d)
    detail::csv_row(os, d, sd.x(d), sd.marginal_x.at(d));
}

inline void write_marginal_w_csv(std::ostream& os, const SumDiffDistribution& sd) {
  os << "s,w,prob\n";
  for (int s = sd.marginal_w.first; s <= sd.marginal_w.last(); ++s)
    detail::csv_row(os, s, sd.w(s), sd.marginal_w.at(s));
}

inline void write_density_csv(std::ostream& os, std::span<const double> xs,
                              std::span<const double> values) {
  os << "x,density\n";
  for (std::size_t i = 0; i < xs.size(); ++i) detail::csv_row(os, xs[i], values[i]);
}

inline void write_wavefunction_csv(std::ostream& os, const WavefunctionGrid& g) {
  os << "x,re_psi,im_psi,abs2\n";
  for (std::size_t i = 0; i < g.xs.size(); ++i)
    detail::csv_row(os, g.xs[i], g.psi[i].real(), g.psi[i].imag(), std::norm(g.psi[i]));
}

inline void write_prq_csv(std::ostream& os, std::span<const double> qs,
                          std::span<const double> probs) {
  os << "q,prob\n";
  for (std::size_t i = 0; i < qs.size(); ++i) detail::csv_row(os, qs[i], probs[i]);
}

inline void write_sweep_csv(std::ostream& os, std::span<const double> betas,
                            std::span<const double> metrics) {
  os << "beta,metric\n";
  for (std::size_t i = 0; i < betas.size(); ++i) detail::csv_row(os, betas[i], metrics[i]);
}

inline void write_verify_csv(std::ostream& os, std::span<const VerifyRecord> records) {
  os << "lo,signal,max_total,outcomes,max_abs_dev\n";
  for (const auto& r : records)
    detail::csv_row(os, format_lo(r.lo), format_signal(r.signal), r.max_total, r.outcomes,
                    r.max_abs_dev);
}

inline nlohmann::json to_json(const JointClickDistribution& joint) {
  nlohmann::json j;
  j["lo"] = format_lo(joint.lo);
  j["signal"] = format_signal(joint.signal);
  j["n_max"] = joint.n_max;
  j["tail_bound"] = joint.tail_bound;
  j["eta"] = joint.eta;
  j["probs"] = nlohmann::json::array();
  for (int n = 0; n < joint.side(); ++n) {
    auto row = nlohmann::json::array();
    for (int m = 0; m < joint.side(); ++m) row.push_back(joint(n, m));
    j["probs"].push_back(std::move(row));
  }
  return j;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Provenance written next to each data file as `<file>.manifest.json`.
struct RunManifest {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::optional<int> n_max;
  std::optional<double> tail_bound;
  std::optional<double> eta;
  std::string version = kToolVersion;
  std::string timestamp = utc_timestamp();

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["params"] = params;
    j["n_max"] = n_max ? nlohmann::json(*n_max) : nlohmann::json(nullptr);
    j["tail_bound"] = tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json(nullptr);
    j["eta"] = eta ? nlohmann::json(*eta) : nlohmann::json(nullptr);
    j["version"] = version;
    j["timestamp"] = timestamp;
    return j;
  }
};

inline std::filesystem::path manifest_path(const std::filesystem::path& data_file) {
  return std::filesystem::path(data_file.string() + ".manifest.json");
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

/// Writes `data_file` via `writer(ostream&)` and its manifest sidecar.
template <typename Writer>
void write_with_manifest(const std::filesystem::path& data_file, const RunManifest& manifest,
                         const Writer& writer) {
  {
    auto os = open_output(data_file);
    writer(os);
    if (!os) throw std::runtime_error("write failed: " + data_file.string());
  }
  auto ms = open_output(manifest_path(data_file));
  ms << manifest.to_json().dump(2) << '\n';
}

}  // namespace catodyne

#endif  // CATODYNE_IO_HPP
