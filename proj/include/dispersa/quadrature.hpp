#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "dispersa/errors.hpp"

namespace dispersa {

namespace quad {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
template <int N>
struct GaussRule {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussRule() {
        for (int i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

template <int N>
inline const GaussRule<N>& gauss_rule() {
    static const GaussRule<N> rule;
    return rule;
}

template <int N, class F>
auto gauss(const F& f, double a, double b) {
    const auto& rule = gauss_rule<N>();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) acc{};
    for (int i = 0; i < N; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc;
}

struct Integral {
    std::complex<double> value{0.0, 0.0};
    double err_est = 0.0;
};

/// Adaptive bisection with a GL15/GL7 error estimate. Handles oscillatory
/// integrands by refining to the local wavelength.
inline Integral adaptive(const std::function<std::complex<double>(double)>& f, double a, double b,
                         double tol, int max_depth = 48) {
    Integral total;
    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<Seg> stack{{a, b, 0}};
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const auto coarse = gauss<7>(f, s.a, s.b);
        const auto fine = gauss<15>(f, s.a, s.b);
        const double err = std::abs(fine - coarse);
        // proportional budget keeps the summed estimate below tol; the
        // absolute floor stops refinement at the rounding noise of the rule
        const double local_tol =
            std::max(tol * (s.b - s.a) / (b - a), 2e-16 * (1.0 + std::abs(fine)));
        if (err < local_tol || s.depth >= max_depth) {
            total.value += fine;
            total.err_est += err;
        } else {
            const double mid = 0.5 * (s.a + s.b);
            stack.push_back({s.a, mid, s.depth + 1});
            stack.push_back({mid, s.b, s.depth + 1});
        }
    }
    return total;
}

/// Solve the dense complex system by Gaussian elimination with partial
/// pivoting (collocation systems here are tiny).
inline std::vector<std::complex<double>> solve_dense(
    std::vector<std::vector<std::complex<double>>> A, std::vector<std::complex<double>> rhs) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(rhs[col], rhs[piv]);
        const auto diag = A[col][col];
        if (std::abs(diag) == 0.0) throw QuadratureError("levin: singular collocation system", 0.0);
        for (std::size_t r = col + 1; r < n; ++r) {
            const auto factor = A[r][col] / diag;
            if (factor == std::complex<double>(0.0)) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    std::vector<std::complex<double>> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        auto acc = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= A[ri][c] * x[c];
        x[ri] = acc / A[ri][ri];
    }
    return x;
}

/// One Levin panel for the oscillatory integral of exp(i phi) on [a, b]:
/// solve F' + i phi' F = 1 by Chebyshev collocation, then the integral is
/// the boundary bracket F(b) e^{i phi(b)} - F(a) e^{i phi(a)}. Requires
/// phi' != 0 on the panel; the oscillation itself never has to be
/// resolved, which is what makes the huge-cutoff real-axis evaluation
/// feasible.
inline std::complex<double> levin_panel(const std::function<double(double)>& phi,
                                        const std::function<double(double)>& dphi, double a,
                                        double b, int m = 24) {
    // Chebyshev points (second kind) on [a, b] and the differentiation matrix.
    std::vector<double> xs(m);
    for (int j = 0; j < m; ++j)
        xs[j] = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(std::numbers::pi * j / (m - 1));
    std::vector<std::vector<double>> D(m, std::vector<double>(m, 0.0));
    auto cbar = [m](int j) { return (j == 0 || j == m - 1) ? 2.0 : 1.0; };
    for (int i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D[i][j] = cbar(i) / cbar(j) * sign / (xs[i] - xs[j]);
            row_sum += D[i][j];
        }
        D[i][i] = -row_sum;  // rows of a differentiation matrix sum to zero
    }
    std::vector<std::vector<std::complex<double>>> A(m, std::vector<std::complex<double>>(m));
    std::vector<std::complex<double>> rhs(m, {1.0, 0.0});
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) A[i][j] = D[i][j];
        A[i][i] += std::complex<double>(0.0, dphi(xs[i]));
    }
    const auto F = solve_dense(std::move(A), std::move(rhs));
    const std::complex<double> ea(std::cos(phi(a)), std::sin(phi(a)));
    const std::complex<double> eb(std::cos(phi(b)), std::sin(phi(b)));
    return F[m - 1] * eb - F[0] * ea;
}

}  // namespace quad

}  // namespace dispersa
