#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dispersa/norms.hpp"

namespace dispersa {

enum class RegionLabel { SELF_SIMILAR, ELLIPTIC, HYPERBOLIC, DYADIC, DYADIC_E, DYADIC_H };

/// Pointwise selection of a subset of the grid at a fixed time.
struct RegionMask {
    Grid1D grid;
    std::vector<std::uint8_t> indicator;
    RegionLabel label;
    double t = 0.0;
    std::optional<double> R;  // band center for dyadic masks

    RegionMask(Grid1D g, RegionLabel lbl, double time)
        : grid(g), indicator(g.size(), 0), label(lbl), t(time) {}

    std::size_t count() const {
        std::size_t c = 0;
        for (auto v : indicator) c += v;
        return c;
    }
};

struct RegionThresholds {
    double K_s = 4.0;                    // the concrete constant behind "x >> t^{1/5}"
    double band_ratio = std::sqrt(2.0);  // dyadic band is [R/ratio, R*ratio)
    int max_bands = 24;
};

/// Region decomposition at time t > 0:
///   SELF_SIMILAR = {|x| <= K_s t^{1/5}},  ELLIPTIC = {x > K_s t^{1/5}},
///   HYPERBOLIC = {-x > K_s t^{1/5}},
/// plus dyadic bands A_R = {<x> in [R/sqrt2, R sqrt2)} for R = 2^m t^{1/5}
/// up to the box edge, and their elliptic/hyperbolic intersections.
/// The three named regions partition the grid; the dyadic bands together
/// with the self-similar region cover it.
inline std::vector<RegionMask> region_masks(const Grid1D& grid, double t,
                                            const RegionThresholds& thr = {}) {
    if (!(t > 0.0)) throw ValidationError("region_masks: t must be positive");
    const double t15 = std::pow(t, 0.2);
    const double edge = thr.K_s * t15;

    std::vector<RegionMask> masks;
    RegionMask self(grid, RegionLabel::SELF_SIMILAR, t);
    RegionMask ell(grid, RegionLabel::ELLIPTIC, t);
    RegionMask hyp(grid, RegionLabel::HYPERBOLIC, t);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        if (x > edge)
            ell.indicator[j] = 1;
        else if (-x > edge)
            hyp.indicator[j] = 1;
        else
            self.indicator[j] = 1;
    }
    masks.push_back(std::move(self));
    masks.push_back(std::move(ell));
    masks.push_back(std::move(hyp));

    const double bracket_max = japanese_bracket(0.5 * grid.length(), t);
    for (int m = 0; m < thr.max_bands; ++m) {
        const double R = std::ldexp(1.0, m) * t15;
        if (R / thr.band_ratio > bracket_max) break;
        RegionMask band(grid, RegionLabel::DYADIC, t);
        RegionMask band_e(grid, RegionLabel::DYADIC_E, t);
        RegionMask band_h(grid, RegionLabel::DYADIC_H, t);
        band.R = band_e.R = band_h.R = R;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.x(j);
            const double br = japanese_bracket(x, t);
            if (br >= R / thr.band_ratio && br < R * thr.band_ratio) {
                band.indicator[j] = 1;
                if (x > edge) band_e.indicator[j] = 1;
                if (-x > edge) band_h.indicator[j] = 1;
            }
        }
        masks.push_back(std::move(band));
        masks.push_back(std::move(band_e));
        masks.push_back(std::move(band_h));
    }
    return masks;
}

/// sup over masked points of t^alpha <x>^beta |f(x)|. An empty mask is an
/// error, distinct from a sup of zero.
inline double weighted_sup(const RealField& f, double t, double alpha, double beta,
                           const RegionMask* mask = nullptr) {
    if (!(t > 0.0)) throw ValidationError("weighted_sup: t must be positive");
    if (mask && mask->count() == 0)
        throw EmptyRegionError("weighted_sup: mask selects no grid points");
    const double tw = std::pow(t, alpha);
    double sup = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        if (mask && !mask->indicator[j]) continue;
        const double w = tw * std::pow(japanese_bracket(f.grid.x(j), t), beta);
        sup = std::max(sup, w * std::abs(f.values[j]));
    }
    return sup;
}

/// Elliptic-region constant for the logarithmically improved bound:
/// sup over {x > K_s t^{1/5}, t^{-1/5} <x> >= e} of
///   t^{k/4} <x>^{1 - k/4} |d^k f / dx^k| / log(t^{-1/5} <x>).
/// Returns nullopt when no admissible points exist.
inline std::optional<double> elliptic_log_sup(const RealField& f, double t, int k,
                                              double K_s = 4.0) {
    if (!(t > 0.0)) throw ValidationError("elliptic_log_sup: t must be positive");
    const RealField dkf = derivative(f, k);
    const double t15 = std::pow(t, 0.2);
    const double edge = K_s * t15;
    const double tw = std::pow(t, 0.25 * k);
    bool any = false;
    double sup = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        const double x = f.grid.x(j);
        if (!(x > edge)) continue;
        const double br = japanese_bracket(x, t);
        const double arg = br / t15;
        if (arg < std::numbers::e) continue;
        any = true;
        const double val =
            tw * std::pow(br, 1.0 - 0.25 * k) * std::abs(dkf.values[j]) / std::log(arg);
        sup = std::max(sup, val);
    }
    if (!any) return std::nullopt;
    return sup;
}

/// L^2 norm restricted to a mask.
inline double localized_l2(const RealField& f, const RegionMask& mask) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j)
        if (mask.indicator[j]) s += f.values[j] * f.values[j];
    return std::sqrt(f.grid.dx() * s);
}

/// Relative L^2 mass in the outer quarter of the box |x| > L/4. This is
/// the monitor policing the box-for-line approximation: x-weighted
/// quantities are only reported while it stays below threshold.
inline double tail_mass(const RealField& f) {
    const double quarter = 0.25 * f.grid.length();
    double tail = 0.0, total = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        const double v2 = f.values[j] * f.values[j];
        total += v2;
        if (std::abs(f.grid.x(j)) > quarter) tail += v2;
    }
    if (total == 0.0) return 0.0;
    return std::sqrt(tail / total);
}

}  // namespace dispersa
