#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "dispersa/errors.hpp"

namespace dispersa {

/// Uniform periodic grid on the centered box [-L/2, L/2).
///
/// Points are x_j = -L/2 + j*L/n. Frequencies are xi_k = 2*pi*k/L with
/// k in [-n/2, n/2); storage follows the usual FFT layout where index
/// i <= n/2 maps to k = i and i > n/2 to k = i - n, the lone Nyquist mode
/// sitting at k = -n/2.
class Grid1D {
  public:
    Grid1D(std::size_t n, double length) : n_(n), length_(length) {
        if (n < 16 || (n & (n - 1)) != 0)
            throw ValidationError("Grid1D: n must be a power of two >= 16, got " +
                                  std::to_string(n));
        if (!(length > 0.0) || !std::isfinite(length))
            throw ValidationError("Grid1D: box length must be positive and finite");
    }

    std::size_t size() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / static_cast<double>(n_); }
    double dxi() const { return 2.0 * std::numbers::pi / length_; }

    double x(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * dx(); }

    /// Signed mode number for storage index i (Nyquist counted negative).
    long mode(std::size_t i) const {
        return i < n_ / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n_);
    }

    /// Frequency xi_k for storage index i.
    double freq(std::size_t i) const { return static_cast<double>(mode(i)) * dxi(); }

    double nyquist() const { return static_cast<double>(n_ / 2) * dxi(); }

    bool operator==(const Grid1D& other) const {
        return n_ == other.n_ && length_ == other.length_;
    }

  private:
    std::size_t n_;
    double length_;
};

}  // namespace dispersa
