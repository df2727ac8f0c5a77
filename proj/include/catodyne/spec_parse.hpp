#ifndef CATODYNE_SPEC_PARSE_HPP
#define CATODYNE_SPEC_PARSE_HPP

// Text grammar for states used on the command line:
//   vacuum | coherent:RE[,IM] | fock:K | cat+:MAG[,THETA] | cat-:MAG[,THETA] | mixed:MAG[,THETA]

#include <charconv>
#include <cmath>
#include <cstdio>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catodyne/states.hpp"

namespace catodyne {

class SpecParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double parse_number(std::string_view text, std::string_view context) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw SpecParseError("invalid number '" + s + "' in '" + std::string(context) + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw SpecParseError("invalid number '" + s + "' in '" + std::string(context) + "'");
  }
  return v;
}

inline std::vector<double> parse_numbers(std::string_view args, std::string_view context) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= args.size()) {
    const std::size_t comma = args.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? args.size() : comma;
    out.push_back(parse_number(args.substr(start, end - start), context));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::pair<std::string_view, std::string_view> split_kind(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

}  // namespace detail

inline SignalState parse_signal(std::string_view text) {
  const auto [kind, args] = detail::split_kind(text);
  if (kind == "vacuum" && args.empty()) return SignalState::vacuum();
  if (kind == "coherent" && !args.empty()) {
    const auto v = detail::parse_numbers(args, text);
    if (v.size() > 2) throw SpecParseError("coherent takes RE[,IM]: '" + std::string(text) + "'");
    return SignalState::coherent({v[0], v.size() == 2 ? v[1] : 0.0});
  }
  if (kind == "fock" && !args.empty()) {
    int k = -1;
    const auto res = std::from_chars(args.data(), args.data() + args.size(), k);
    if (res.ec != std::errc{} || res.ptr != args.data() + args.size() || k < 0) {
      throw SpecParseError("fock takes a non-negative integer: '" + std::string(text) + "'");
    }
    return SignalState::fock(k);
  }
  throw SpecParseError("unrecognized signal spec '" + std::string(text) + "'");
}

/// LO spec; `coherent:RE[,IM]` gives beta directly, cat and mixed kinds take MAG[,THETA].
inline LocalOscillatorSpec parse_lo(std::string_view text) {
  const auto [kind, args] = detail::split_kind(text);
  if (args.empty()) throw SpecParseError("LO spec needs parameters: '" + std::string(text) + "'");
  const auto v = detail::parse_numbers(args, text);
  if (v.size() > 2) throw SpecParseError("too many LO parameters: '" + std::string(text) + "'");
  const double second = v.size() == 2 ? v[1] : 0.0;
  if (kind == "coherent") {
    const std::complex<double> beta(v[0], second);
    return LocalOscillatorSpec::coherent(std::abs(beta), std::arg(beta));
  }
  if (v[0] < 0.0) throw SpecParseError("LO magnitude must be non-negative: '" + std::string(text) + "'");
  if (kind == "cat+") return LocalOscillatorSpec::cat(Parity::plus, v[0], second);
  if (kind == "cat-") return LocalOscillatorSpec::cat(Parity::minus, v[0], second);
  if (kind == "mixed") return LocalOscillatorSpec::mixed(v[0], second);
  throw SpecParseError("unrecognized LO spec '" + std::string(text) + "'");
}

/// Splits a comma list of signal specs. A token that does not start with a
/// kind keyword continues the previous spec (as in `coherent:0.8,0.1`).
inline std::vector<std::string> split_signal_list(std::string_view text) {
  static constexpr std::string_view kKinds[] = {"vacuum", "coherent", "fock"};
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    const std::string_view token = text.substr(start, end - start);
    bool is_new = out.empty();
    for (auto k : kKinds) is_new = is_new || token.substr(0, k.size()) == k;
    if (is_new) {
      out.emplace_back(token);
    } else {
      out.back() += ",";
      out.back() += token;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string format_signal(const SignalState& s) {
  if (s.is<Vacuum>()) return "vacuum";
  if (s.is<Fock>()) return "fock:" + std::to_string(s.as<Fock>().kappa);
  if (s.is<Coherent>()) {
    const auto a = s.as<Coherent>().alpha;
    char buf[96];
    if (a.imag() == 0.0) {
      std::snprintf(buf, sizeof buf, "coherent:%.17g", a.real());
    } else {
      std::snprintf(buf, sizeof buf, "coherent:%.17g,%.17g", a.real(), a.imag());
    }
    return buf;
  }
  return "custom:" + std::to_string(s.as<Custom>().coeffs.size());
}

inline std::string format_lo(const LocalOscillatorSpec& lo) {
  char buf[96];
  if (lo.kind == LoKind::coherent) {
    const auto beta = lo.beta();
    std::snprintf(buf, sizeof buf, "coherent:%.17g,%.17g", beta.real(), beta.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%s:%.17g,%.17g", to_string(lo.kind).c_str(), lo.magnitude,
                  lo.theta);
  }
  return buf;
}

}  // namespace catodyne

#endif  // CATODYNE_SPEC_PARSE_HPP
