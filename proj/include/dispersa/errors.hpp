#pragma once

#include <stdexcept>
#include <string>

namespace dispersa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments or configuration detected before any work is done.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A non-finite value appeared during time integration. Carries the last
/// time at which the state was still finite.
class BlowUpError : public Error {
  public:
    BlowUpError(const std::string& msg, double last_finite_time)
        : Error(msg), last_finite_time(last_finite_time) {}
    double last_finite_time;
};

/// Too much mass reached the outer quarter of the box; x-weighted
/// quantities are no longer meaningful.
class TailOverflowError : public Error {
  public:
    TailOverflowError(const std::string& msg, double time, double tail_mass)
        : Error(msg), time(time), tail_mass(tail_mass) {}
    double time;
    double tail_mass;
};

/// File or directory operation failed.
class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Raised when a sup over a region is requested but the region selects no
/// grid points (distinct from a sup value of zero).
class EmptyRegionError : public Error {
  public:
    explicit EmptyRegionError(const std::string& msg) : Error(msg) {}
};

/// A quadrature failed to meet its error target. Carries the achieved
/// error estimate.
class QuadratureError : public Error {
  public:
    QuadratureError(const std::string& msg, double achieved)
        : Error(msg), achieved(achieved) {}
    double achieved;
};

}  // namespace dispersa
