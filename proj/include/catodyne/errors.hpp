#ifndef CATODYNE_ERRORS_HPP
#define CATODYNE_ERRORS_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace catodyne {

namespace detail {

/// Short %g rendering of a number for error messages.
inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

/// The minus cat at zero amplitude is the zero vector.
class DegenerateCat : public Error {
 public:
  using Error::Error;
};

/// A truncated representation drops more probability than allowed.
/// `bound` carries the offending tail mass.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class ZeroScale : public Error {
 public:
  using Error::Error;
};

class DegenerateOutcome : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

}  // namespace catodyne

#endif  // CATODYNE_ERRORS_HPP
