#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dispersa/spectral.hpp"

namespace dispersa {

/// Time-dependent Japanese bracket <x> = (x^2 + t^{2/5})^{1/2}.
inline double japanese_bracket(double x, double t) {
    if (t < 0.0) throw ValidationError("japanese_bracket: t must be nonnegative");
    return std::sqrt(x * x + std::pow(t, 0.4));
}

/// Riemann-sum L^p norm; p = infinity gives the max norm.
inline double lp_norm(const RealField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1.0) throw ValidationError("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(f.grid.dx() * s, 1.0 / p);
}

inline double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(f.grid.dx() * s);
}

/// Homogeneous Sobolev norm || |D|^s f ||_{L^2}, evaluated in frequency
/// space with the spectral measure dxi (Parseval holds exactly for the
/// box-scaled 1/sqrt(2 pi) convention). For s < 0 the mean must vanish.
inline double sobolev_norm(const SpectralField& F, double s) {
    if (s < 0.0 && detail::mean_defect(F) > 1e-10)
        throw ValidationError("sobolev_norm: s < 0 requires mean-zero input");
    double acc = 0.0;
    for (std::size_t i = 0; i < F.grid.size(); ++i) {
        const double xi = std::abs(F.grid.freq(i));
        if (xi == 0.0) {
            if (s == 0.0) acc += std::norm(F.coefficients[i]);
            continue;
        }
        acc += std::pow(xi, 2.0 * s) * std::norm(F.coefficients[i]);
    }
    return std::sqrt(F.grid.dxi() * acc);
}

inline double sobolev_norm(const RealField& f, double s) {
    return sobolev_norm(forward_transform(f), s);
}

/// Homogeneous Besov B^{-1/2}_{2,inf} report: the sup over representable
/// dyadic shells of 2^{-j/2} ||P_j f||_{L^2}, together with the per-shell
/// table. A shell j is representable when its bump support
/// [2^{j-1}, 2^{j+1}] fits between the box frequency 2 pi / L and the
/// Nyquist frequency.
struct BesovReport {
    double value = 0.0;
    std::map<int, double> shells;  // j -> 2^{-j/2} ||P_j f||_{L^2}
    int j_min = 0;
    int j_max = -1;
};

inline BesovReport besov_report(const SpectralField& F) {
    BesovReport rep;
    const double xi_box = F.grid.dxi();
    const double xi_nyq = F.grid.nyquist();
    rep.j_min = static_cast<int>(std::ceil(std::log2(xi_box) - 1e-12)) + 1;
    rep.j_max = static_cast<int>(std::floor(std::log2(xi_nyq) + 1e-12)) - 1;
    for (int j = rep.j_min; j <= rep.j_max; ++j) {
        const double N = std::ldexp(1.0, j);
        double acc = 0.0;
        for (std::size_t i = 0; i < F.grid.size(); ++i) {
            const double xi = F.grid.freq(i);
            const double w = lp_bump(xi / N) - lp_bump(2.0 * xi / N);
            acc += w * w * std::norm(F.coefficients[i]);
        }
        const double shell = std::pow(2.0, -0.5 * j) * std::sqrt(F.grid.dxi() * acc);
        rep.shells[j] = shell;
        rep.value = std::max(rep.value, shell);
    }
    return rep;
}

inline BesovReport besov_report(const RealField& f) { return besov_report(forward_transform(f)); }

inline double besov_norm(const RealField& f) { return besov_report(f).value; }
inline double besov_norm(const SpectralField& F) { return besov_report(F).value; }

/// Norm bundle for one snapshot.
struct NormReport {
    std::map<double, double> lp;  // p -> value
    double hs_half = 0.0;         // homogeneous H^{1/2}
    double besov = 0.0;           // B^{-1/2}_{2,inf}
    std::map<int, double> besov_shells;
};

inline NormReport norm_report(const RealField& f) {
    NormReport rep;
    const auto F = forward_transform(f);
    rep.lp[1.0] = lp_norm(f, 1.0);
    rep.lp[2.0] = l2_norm(f);
    rep.lp[std::numeric_limits<double>::infinity()] = lp_norm(f, std::numeric_limits<double>::infinity());
    rep.hs_half = sobolev_norm(F, 0.5);
    const auto b = besov_report(F);
    rep.besov = b.value;
    rep.besov_shells = b.shells;
    return rep;
}

}  // namespace dispersa
