#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "dispersa/fft.hpp"
#include "dispersa/norms.hpp"
#include "dispersa/spectral.hpp"

namespace testutil {

using namespace dispersa;

inline RealField make_field(const Grid1D& g, auto&& fn, double t = 0.0) {
    RealField f(g, t);
    for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = fn(g.x(j));
    return f;
}

inline RealField cosine(const Grid1D& g, double k, double t = 0.0) {
    return make_field(g, [k](double x) { return std::cos(k * x); }, t);
}

inline RealField sine(const Grid1D& g, double k, double t = 0.0) {
    return make_field(g, [k](double x) { return std::sin(k * x); }, t);
}

inline RealField gaussian(const Grid1D& g, double width, double center = 0.0, double amp = 1.0) {
    return make_field(g, [=](double x) {
        const double u = (x - center) / width;
        return amp * std::exp(-u * u);
    });
}

/// Smooth random field: white noise confined to a frequency band.
inline RealField random_band_field(const Grid1D& g, std::mt19937_64& rng, double xi_lo,
                                   double xi_hi) {
    std::normal_distribution<double> dist(0.0, 1.0);
    RealField noise(g);
    for (auto& v : noise.values) v = dist(rng);
    auto F = forward_transform(noise);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = std::abs(g.freq(i));
        if (a < xi_lo || a > xi_hi) F.coefficients[i] = 0.0;
    }
    return inverse_transform(F);
}

inline double rel_l2_error(const RealField& a, const RealField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) {
        const double d = a.values[j] - b.values[j];
        num += d * d;
        den += b.values[j] * b.values[j];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

}  // namespace testutil
