#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "dispersa/field.hpp"

namespace dispersa {

namespace detail {

// FFTW planner is not thread-safe; plan creation is serialized. Each thread
// keeps its own plans and work buffers so transforms are re-entrant and
// bit-deterministic for a fixed grid.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlans {
    fftw_complex* buf = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::size_t n = 0;

    explicit FftPlans(std::size_t n_) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        buf = fftw_alloc_complex(n);
        forward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPlans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buf);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
};

inline FftPlans& plans_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<FftPlans>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlans>(n);
    return *slot;
}

}  // namespace detail

/// Forward transform with the 1/sqrt(2*pi) convention scaled to the box:
/// coef(xi_k) = (dx/sqrt(2*pi)) * sum_j u_j exp(-i xi_k x_j), which is the
/// Riemann-sum approximation of the continuum transform on [-L/2, L/2).
/// The centered box contributes the exact phase exp(i pi k) = (-1)^k.
inline SpectralField forward_transform(const RealField& f) {
    const std::size_t n = f.grid.size();
    auto& plans = detail::plans_for(n);
    for (std::size_t j = 0; j < n; ++j) {
        plans.buf[j][0] = f.values[j];
        plans.buf[j][1] = 0.0;
    }
    fftw_execute(plans.forward);
    const double scale = f.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
    SpectralField out(f.grid, f.time);
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        out.coefficients[i] = sign * scale * Complex(plans.buf[i][0], plans.buf[i][1]);
    }
    // Real input has exactly Hermitian coefficients; the complex FFT's
    // rounding noise is not. Symmetrize so that real-field-preserving
    // multipliers (m(-xi) = conj(m(xi)), which covers every symbol here)
    // keep the symmetry bitwise exact no matter how much they amplify
    // high frequencies.
    out.coefficients[0] = Complex(out.coefficients[0].real(), 0.0);
    out.coefficients[n / 2] = Complex(out.coefficients[n / 2].real(), 0.0);
    for (std::size_t i = 1; i < n / 2; ++i) {
        const Complex avg = 0.5 * (out.coefficients[i] + std::conj(out.coefficients[n - i]));
        out.coefficients[i] = avg;
        out.coefficients[n - i] = std::conj(avg);
    }
    return out;
}

/// Exact inverse of forward_transform. Requires Hermitian symmetry; a
/// defect beyond `symmetry_tol` signals a corrupted spectral state.
inline RealField inverse_transform(const SpectralField& F, double symmetry_tol = 1e-10) {
    const double defect = F.symmetry_defect();
    if (defect > symmetry_tol)
        throw ValidationError("inverse_transform: Hermitian symmetry violated, defect " +
                              std::to_string(defect));
    const std::size_t n = F.grid.size();
    auto& plans = detail::plans_for(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const Complex c = sign * F.coefficients[i];
        plans.buf[i][0] = c.real();
        plans.buf[i][1] = c.imag();
    }
    fftw_execute(plans.backward);
    const double scale = F.grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
    RealField out(F.grid, F.time);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = scale * plans.buf[j][0];
    return out;
}

}  // namespace dispersa
