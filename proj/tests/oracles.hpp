#pragma once

// Test-only reference implementations, kept independent of the production
// code paths they check: naive DFT sums, direct convolution in frequency,
// and the brute-force bilinear double loop.

#include <complex>
#include <numbers>
#include <vector>

#include "dispersa/field.hpp"

namespace oracles {

using dispersa::Complex;
using dispersa::Grid1D;
using dispersa::RealField;
using dispersa::SpectralField;

/// Forward transform by the O(n^2) definition sum (no FFT).
inline SpectralField naive_forward(const RealField& f) {
    const std::size_t n = f.grid.size();
    SpectralField out(f.grid, f.time);
    const double scale = f.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = f.grid.freq(i);
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ph = -xi * f.grid.x(j);
            acc += f.values[j] * Complex(std::cos(ph), std::sin(ph));
        }
        out.coefficients[i] = scale * acc;
    }
    return out;
}

/// Inverse transform by the definition sum (no FFT).
inline RealField naive_inverse(const SpectralField& F) {
    const std::size_t n = F.grid.size();
    RealField out(F.grid, F.time);
    const double scale = F.grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = F.grid.freq(i) * F.grid.x(j);
            acc += F.coefficients[i] * Complex(std::cos(ph), std::sin(ph));
        }
        out.values[j] = scale * acc.real();
    }
    return out;
}

/// Spectrum of the pointwise product f*g by direct convolution over mode
/// pairs (no wrap: pairs leaving the represented band are dropped).
inline SpectralField convolve_spectra(const SpectralField& F, const SpectralField& G) {
    const std::size_t n = F.grid.size();
    const auto half = static_cast<long>(n / 2);
    SpectralField out(F.grid, F.time);
    const double scale = F.grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t a = 0; a < n; ++a) {
        const long ka = F.grid.mode(a);
        if (std::abs(F.coefficients[a]) == 0.0) continue;
        for (std::size_t b = 0; b < n; ++b) {
            const long kb = G.grid.mode(b);
            const long kc = ka + kb;
            if (kc < -half || kc >= half) continue;
            const auto c = static_cast<std::size_t>((kc + static_cast<long>(n)) %n);
            out.coefficients[c] += scale * F.coefficients[a] * G.coefficients[b];
        }
    }
    return out;
}

}  // namespace oracles
