#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dispersa/errors.hpp"
#include "dispersa/grid.hpp"

namespace dispersa {

using Complex = std::complex<double>;

/// Real-valued state u(t, .) sampled on a Grid1D.
struct RealField {
    Grid1D grid;
    std::vector<double> values;
    double time = 0.0;

    RealField(Grid1D g, double t = 0.0) : grid(g), values(g.size(), 0.0), time(t) {}
    RealField(Grid1D g, std::vector<double> v, double t = 0.0)
        : grid(g), values(std::move(v)), time(t) {
        if (values.size() != grid.size())
            throw ValidationError("RealField: value count does not match grid");
    }

    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Discrete Fourier coefficients of a field, indexed by xi_k in FFT
/// storage order (see Grid1D::mode).
struct SpectralField {
    Grid1D grid;
    std::vector<Complex> coefficients;
    double time = 0.0;

    SpectralField(Grid1D g, double t = 0.0) : grid(g), coefficients(g.size()), time(t) {}
    SpectralField(Grid1D g, std::vector<Complex> c, double t = 0.0)
        : grid(g), coefficients(std::move(c)), time(t) {
        if (coefficients.size() != grid.size())
            throw ValidationError("SpectralField: coefficient count does not match grid");
    }

    /// Largest deviation from Hermitian symmetry coef(-xi) = conj(coef(xi)),
    /// normalized by the largest coefficient magnitude. The unpaired Nyquist
    /// mode must be real.
    double symmetry_defect() const {
        const std::size_t n = grid.size();
        double scale = 0.0;
        for (const auto& c : coefficients) scale = std::max(scale, std::abs(c));
        if (scale == 0.0) return 0.0;
        double defect = std::abs(coefficients[0].imag());
        defect = std::max(defect, std::abs(coefficients[n / 2].imag()));
        for (std::size_t i = 1; i < n / 2; ++i)
            defect = std::max(defect, std::abs(coefficients[i] - std::conj(coefficients[n - i])));
        return defect / scale;
    }
};

/// Pointwise mean (1/L) * Integral of f, via the Riemann sum.
inline double field_mean(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / static_cast<double>(f.grid.size());
}

}  // namespace dispersa
