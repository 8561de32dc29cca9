#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "dispersa/fft.hpp"

namespace dispersa {

/// A Fourier multiplier: a symbol m(xi) applied diagonally in frequency.
/// The symbol must be finite at every represented frequency, including
/// xi = 0, where homogeneous symbols need an explicit value.
struct MultiplierSpec {
    std::function<Complex(double)> symbol;
    std::string description;
};

/// coef(xi) <- m(xi) * coef(xi). The unpaired Nyquist mode receives the
/// even part (m(xi) + m(-xi))/2, which is exact for the one Nyquist
/// harmonic a real grid can represent and keeps real fields real.
inline SpectralField apply_multiplier(const SpectralField& F, const MultiplierSpec& m) {
    SpectralField out = F;
    const std::size_t n = F.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = F.grid.freq(i);
        Complex v = m.symbol(xi);
        if (i == n / 2) v = 0.5 * (v + m.symbol(-xi));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("apply_multiplier: symbol '" + m.description +
                                  "' not finite at xi = " + std::to_string(xi));
        out.coefficients[i] *= v;
    }
    return out;
}

inline RealField apply_multiplier(const RealField& f, const MultiplierSpec& m) {
    return inverse_transform(apply_multiplier(forward_transform(f), m));
}

namespace symbols {

/// (i xi)^k, the k-th spatial derivative.
inline MultiplierSpec derivative(int k) {
    return {[k](double xi) {
                Complex v(1.0, 0.0);
                const Complex ix(0.0, xi);
                for (int p = 0; p < k; ++p) v *= ix;
                return v;
            },
            "d^" + std::to_string(k) + "/dx^" + std::to_string(k)};
}

/// |xi|^s with |0|^s := 0 for s > 0 and := 1 for s = 0. For s < 0 the
/// caller must zero the mean first (see fractional_derivative).
inline MultiplierSpec abs_power(double s) {
    return {[s](double xi) -> Complex {
                if (xi == 0.0) return s == 0.0 ? 1.0 : 0.0;
                return std::pow(std::abs(xi), s);
            },
            "|D|^" + std::to_string(s)};
}

/// -i sgn(xi) with sgn(0) = 0.
inline MultiplierSpec hilbert() {
    return {[](double xi) -> Complex {
                if (xi == 0.0) return 0.0;
                return Complex(0.0, xi > 0.0 ? -1.0 : 1.0);
            },
            "Hilbert transform"};
}

/// exp(i xi^5 t): the exact flow of u_t - u_5x = 0 over time t.
inline MultiplierSpec free_propagator(double t) {
    return {[t](double xi) {
                const double phase = xi * xi * xi * xi * xi * t;
                return Complex(std::cos(phase), std::sin(phase));
            },
            "exp(i xi^5 t), t = " + std::to_string(t)};
}

/// 1/(i xi) with zero mean output: the antiderivative fixed by mean zero.
inline MultiplierSpec antiderivative() {
    return {[](double xi) -> Complex {
                if (xi == 0.0) return 0.0;
                return Complex(0.0, -1.0 / xi);
            },
            "d/dx^{-1} (mean-zero)"};
}

}  // namespace symbols

/// Derivative of order 0..5 via the multiplier (i xi)^k.
inline RealField derivative(const RealField& f, int k) {
    if (k < 0 || k > 5)
        throw ValidationError("derivative: order must be in 0..5, got " + std::to_string(k));
    if (k == 0) return f;
    return apply_multiplier(f, symbols::derivative(k));
}

inline SpectralField derivative(const SpectralField& F, int k) {
    if (k < 0 || k > 5)
        throw ValidationError("derivative: order must be in 0..5, got " + std::to_string(k));
    if (k == 0) return F;
    return apply_multiplier(F, symbols::derivative(k));
}

namespace detail {
/// Relative size of the zero mode against the spectral l2 norm.
inline double mean_defect(const SpectralField& F) {
    double l2 = 0.0;
    for (const auto& c : F.coefficients) l2 += std::norm(c);
    l2 = std::sqrt(l2);
    if (l2 == 0.0) return 0.0;
    return std::abs(F.coefficients[0]) / l2;
}
}  // namespace detail

/// |D|^s f. For s < 0 the input must be mean-zero (the antiderivative of a
/// nonzero-mean field is not periodic); the zero mode of the output is 0.
inline SpectralField fractional_derivative(const SpectralField& F, double s) {
    if (s < 0.0 && detail::mean_defect(F) > 1e-10)
        throw ValidationError("fractional_derivative: s < 0 requires mean-zero input");
    return apply_multiplier(F, symbols::abs_power(s));
}

inline RealField fractional_derivative(const RealField& f, double s) {
    return inverse_transform(fractional_derivative(forward_transform(f), s));
}

inline RealField hilbert_transform(const RealField& f) {
    return apply_multiplier(f, symbols::hilbert());
}

/// Exact solution of u_t - u_5x = 0 over dt; the time stamp advances.
inline RealField linear_propagate(const RealField& f, double dt) {
    RealField out = apply_multiplier(f, symbols::free_propagator(dt));
    out.time = f.time + dt;
    return out;
}

inline SpectralField linear_propagate(const SpectralField& F, double dt) {
    SpectralField out = apply_multiplier(F, symbols::free_propagator(dt));
    out.time = F.time + dt;
    return out;
}

/// Zero all coefficients with |xi| above keep_fraction * Nyquist.
inline SpectralField dealias(const SpectralField& F, double keep_fraction) {
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
        throw ValidationError("dealias: keep_fraction must lie in (0, 1]");
    SpectralField out = F;
    const double cutoff = keep_fraction * F.grid.nyquist();
    for (std::size_t i = 0; i < F.grid.size(); ++i)
        if (std::abs(F.grid.freq(i)) > cutoff) out.coefficients[i] = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Littlewood-Paley projections.
//
// The bump psi is even, equal to 1 on [-1, 1], 0 outside [-2, 2], with the
// transition exp(1 - 1/(1 - u^2)) for u = |xi| - 1 in (0, 1). It is fixed
// once so every norm built on it is reproducible bit-for-bit.
// ---------------------------------------------------------------------------

inline double lp_bump(double xi) {
    const double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double u = a - 1.0;
    const double d = 1.0 - u * u;
    if (d <= 1e-300) return 0.0;
    return std::exp(1.0 - 1.0 / d);
}

enum class LpKind { AT, LE, LT, GE, GT };

/// The five Littlewood-Paley multipliers at scale N:
///   LE: psi(xi/N)             AT: psi(xi/N) - psi(2 xi/N)
///   LT: P_{<N} = P_{<=N} - P_N = psi(2 xi/N)
///   GE: 1 - P_{<N}            GT: 1 - P_{<=N}
inline MultiplierSpec lp_multiplier(double N, LpKind kind) {
    if (!(N > 0.0)) throw ValidationError("lp_project: scale N must be positive");
    auto le = [N](double xi) { return lp_bump(xi / N); };
    auto lt = [N](double xi) { return lp_bump(2.0 * xi / N); };
    switch (kind) {
        case LpKind::LE:
            return {[le](double xi) -> Complex { return le(xi); }, "P_<=N"};
        case LpKind::AT:
            return {[le, lt](double xi) -> Complex { return le(xi) - lt(xi); }, "P_N"};
        case LpKind::LT:
            return {[lt](double xi) -> Complex { return lt(xi); }, "P_<N"};
        case LpKind::GE:
            return {[lt](double xi) -> Complex { return 1.0 - lt(xi); }, "P_>=N"};
        case LpKind::GT:
            return {[le](double xi) -> Complex { return 1.0 - le(xi); }, "P_>N"};
    }
    throw ValidationError("lp_project: unknown kind");
}

inline RealField lp_project(const RealField& f, double N, LpKind kind) {
    return apply_multiplier(f, lp_multiplier(N, kind));
}

inline SpectralField lp_project(const SpectralField& F, double N, LpKind kind) {
    return apply_multiplier(F, lp_multiplier(N, kind));
}

}  // namespace dispersa
