#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dispersa/norms.hpp"
#include "dispersa/regions.hpp"

namespace dispersa {

/// Time integration setup for u_t - u_5x = sign * u^m u_x.
///
/// The linear part is infinitely stiff (xi^5) and is never stepped
/// explicitly: the integrating-factor RK4 applies the exact phase
/// exp(i xi^5 dt) and only the advective nonlinearity sees the Runge-Kutta
/// stages. The dt contract below therefore involves the nonlinear
/// frequency scale only.
struct EvolutionConfig {
    int m = 1;             // 1: quadratic, 2: cubic nonlinearity
    int sign = +1;
    double dt = 0.01;
    double t_start = 0.0;
    double t_end = 1.0;
    std::vector<double> snapshot_times;
    double dealias_fraction = 0.0;  // 0 picks the default for m: 2/3 or 1/2
    double nonlinear_scale = 1.0;   // test hook; 0 reduces to the free flow
    double tail_abort = 1e-2;       // relative L2 mass in |x| > L/4 that aborts

    double effective_dealias() const {
        if (dealias_fraction > 0.0) return dealias_fraction;
        return m == 1 ? 2.0 / 3.0 : 0.5;
    }

    void validate(const RealField& u0) const {
        if (m != 1 && m != 2) throw ValidationError("EvolutionConfig: m must be 1 or 2");
        if (sign != 1 && sign != -1) throw ValidationError("EvolutionConfig: sign must be +-1");
        if (!(dt > 0.0)) throw ValidationError("EvolutionConfig: dt must be positive");
        if (!(t_start < t_end)) throw ValidationError("EvolutionConfig: need t_start < t_end");
        if (dealias_fraction < 0.0 || dealias_fraction > 1.0)
            throw ValidationError("EvolutionConfig: dealias_fraction out of (0,1]");
        for (double s : snapshot_times)
            if (s < t_start - 1e-12 || s > t_end + 1e-12)
                throw ValidationError("EvolutionConfig: snapshot time " + std::to_string(s) +
                                      " outside [t_start, t_end]");
        if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
            throw ValidationError("EvolutionConfig: snapshot times must be sorted");
        // dt <= 0.5 / (max|u0|^m * retained frequency): the advective phase
        // per step stays below half a radian
        const double umax = lp_norm(u0, std::numeric_limits<double>::infinity());
        const double xi_r = effective_dealias() * u0.grid.nyquist();
        const double scale = std::abs(nonlinear_scale) * std::pow(umax, m) * xi_r;
        if (scale > 0.0 && dt > 0.5 / scale)
            throw ValidationError("EvolutionConfig: dt " + std::to_string(dt) +
                                  " exceeds the advective stability contract " +
                                  std::to_string(0.5 / scale));
    }
};

/// sign * u^m * u_x, formed pseudospectrally: u is dealiased, the power is
/// taken in physical space, multiplied by the dealiased derivative, and
/// the product is dealiased again.
inline RealField nonlinearity(const RealField& u, int m, int sign, double dealias_fraction = 0.0,
                              double scale = 1.0) {
    EvolutionConfig probe;
    probe.m = m;
    probe.dealias_fraction = dealias_fraction;
    const double frac = probe.effective_dealias();
    const auto ud_hat = dealias(forward_transform(u), frac);
    const auto ud = inverse_transform(ud_hat);
    const auto ux = inverse_transform(derivative(ud_hat, 1));
    RealField prod(u.grid, u.time);
    for (std::size_t j = 0; j < u.grid.size(); ++j) {
        double p = ud.values[j];
        if (m == 2) p *= ud.values[j];
        prod.values[j] = p * ux.values[j];
    }
    auto out_hat = dealias(forward_transform(prod), frac);
    const double c = scale * static_cast<double>(sign);
    for (auto& v : out_hat.coefficients) v *= c;
    return inverse_transform(out_hat);
}

namespace detail {

struct Stepper {
    Grid1D grid;
    int m;
    double sign_scale;  // sign * nonlinear_scale
    double frac;
    double cached_dt = std::numeric_limits<double>::quiet_NaN();
    std::vector<Complex> e_half, e_full;
    std::vector<std::uint8_t> keep;

    Stepper(const Grid1D& g, const EvolutionConfig& cfg)
        : grid(g),
          m(cfg.m),
          sign_scale(static_cast<double>(cfg.sign) * cfg.nonlinear_scale),
          frac(cfg.effective_dealias()),
          e_half(g.size()),
          e_full(g.size()),
          keep(g.size(), 1) {
        const double cutoff = frac * g.nyquist();
        for (std::size_t i = 0; i < g.size(); ++i)
            if (std::abs(g.freq(i)) > cutoff) keep[i] = 0;
    }

    void prepare(double dt) {
        if (dt == cached_dt) return;
        cached_dt = dt;
        const std::size_t n = grid.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = grid.freq(i);
            const double phase = xi * xi * xi * xi * xi * 0.5 * dt;
            // the unpaired Nyquist mode keeps the even part of the symbol
            e_half[i] = (i == n / 2) ? Complex(std::cos(phase), 0.0)
                                     : Complex(std::cos(phase), std::sin(phase));
            e_full[i] = e_half[i] * e_half[i];
        }
    }

    /// sign * u^m u_x in coefficient space, dealiased.
    std::vector<Complex> rhs(const std::vector<Complex>& u_hat, double time) const {
        const std::size_t n = grid.size();
        SpectralField ud_hat(grid, time);
        for (std::size_t i = 0; i < n; ++i)
            ud_hat.coefficients[i] = keep[i] ? u_hat[i] : Complex(0.0);
        const auto ud = inverse_transform(ud_hat);
        const auto ux = inverse_transform(derivative(ud_hat, 1));
        RealField prod(grid, time);
        for (std::size_t j = 0; j < n; ++j) {
            double p = ud.values[j];
            if (m == 2) p *= ud.values[j];
            prod.values[j] = sign_scale * p * ux.values[j];
        }
        auto out = forward_transform(prod);
        std::vector<Complex> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = keep[i] ? out.coefficients[i] : Complex(0.0);
        return r;
    }

    /// One integrating-factor RK4 step of length dt (sign of dt free),
    /// with the nonlinearity supplied by the caller.
    template <class Rhs>
    void step_with(const Rhs& nl, std::vector<Complex>& u_hat, double& time, double dt) {
        prepare(dt);
        const std::size_t n = grid.size();
        const auto k1 = nl(u_hat, time);
        std::vector<Complex> stage(n);

        for (std::size_t i = 0; i < n; ++i)
            stage[i] = e_half[i] * (u_hat[i] + 0.5 * dt * k1[i]);
        const auto k2 = nl(stage, time + 0.5 * dt);

        for (std::size_t i = 0; i < n; ++i)
            stage[i] = e_half[i] * u_hat[i] + 0.5 * dt * k2[i];
        const auto k3 = nl(stage, time + 0.5 * dt);

        for (std::size_t i = 0; i < n; ++i)
            stage[i] = e_full[i] * u_hat[i] + dt * e_half[i] * k3[i];
        const auto k4 = nl(stage, time + dt);

        for (std::size_t i = 0; i < n; ++i)
            u_hat[i] = e_full[i] * u_hat[i] +
                       dt / 6.0 *
                           (e_full[i] * k1[i] + 2.0 * e_half[i] * (k2[i] + k3[i]) + k4[i]);
        time += dt;
    }

    void step(std::vector<Complex>& u_hat, double& time, double dt) {
        step_with([this](const std::vector<Complex>& v, double t) { return rhs(v, t); }, u_hat,
                  time, dt);
    }

    bool finite(const std::vector<Complex>& u_hat) const {
        for (const auto& c : u_hat)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }
};

}  // namespace detail

/// One IFRK4 step of cfg.dt. NaN/Inf raises BlowUpError carrying the last
/// finite time.
inline RealField step(const RealField& u, const EvolutionConfig& cfg) {
    cfg.validate(u);
    detail::Stepper stepper(u.grid, cfg);
    auto u_hat = forward_transform(u).coefficients;
    double time = u.time;
    stepper.step(u_hat, time, cfg.dt);
    if (!stepper.finite(u_hat))
        throw BlowUpError("step: non-finite state after one step", u.time);
    return inverse_transform(SpectralField(u.grid, std::move(u_hat), time));
}

enum class RunStatus { OK, BLOW_UP, TAIL_OVERFLOW };

struct SnapshotDiagnostics {
    double t = 0.0;
    double mass = 0.0;         // Integral of u
    double l2 = 0.0;           // L2 norm
    double hamiltonian = 0.0;  // discrete Hamiltonian
    double tail_mass = 0.0;    // relative L2 mass in |x| > L/4
};

/// Discrete Hamiltonian H = Integral( u_2x^2 / 2 + sign u^{m+2}/((m+1)(m+2)) ).
/// The flow is u_t = d/dx (dH/du), which reproduces the equation.
inline double hamiltonian(const RealField& u, int m, int sign) {
    const auto u2x = derivative(u, 2);
    const double cnl = static_cast<double>(sign) / ((m + 1.0) * (m + 2.0));
    double acc = 0.0;
    for (std::size_t j = 0; j < u.grid.size(); ++j) {
        const double v = u.values[j];
        double pw = v * v * v;  // u^{m+2}
        if (m == 2) pw *= v;
        acc += 0.5 * u2x.values[j] * u2x.values[j] + cnl * pw;
    }
    return acc * u.grid.dx();
}

struct Trajectory {
    EvolutionConfig config;
    std::vector<RealField> snapshots;
    std::vector<SnapshotDiagnostics> diagnostics;
    RunStatus status = RunStatus::OK;
    double abort_time = 0.0;
    std::string abort_reason;

    const RealField& at(std::size_t i) const { return snapshots[i]; }
};

inline SnapshotDiagnostics measure_snapshot(const RealField& u, int m, int sign) {
    SnapshotDiagnostics d;
    d.t = u.time;
    double s = 0.0;
    for (double v : u.values) s += v;
    d.mass = s * u.grid.dx();
    d.l2 = l2_norm(u);
    d.hamiltonian = hamiltonian(u, m, sign);
    d.tail_mass = tail_mass(u);
    return d;
}

/// Integrate from u0 at cfg.t_start, landing exactly on every requested
/// snapshot time (dt subdivided per segment). On blow-up or tail overflow
/// the trajectory keeps everything recorded so far and carries the abort
/// marker; snapshots already stored stay valid.
inline Trajectory evolve(const RealField& u0, const EvolutionConfig& cfg) {
    cfg.validate(u0);
    Trajectory traj;
    traj.config = cfg;

    std::vector<double> times = cfg.snapshot_times;
    if (times.empty() || std::abs(times.front() - cfg.t_start) > 1e-12)
        times.insert(times.begin(), cfg.t_start);

    detail::Stepper stepper(u0.grid, cfg);
    auto u_hat = forward_transform(u0).coefficients;
    double time = cfg.t_start;

    auto record = [&](double stamp) {
        RealField snap = inverse_transform(SpectralField(u0.grid, u_hat, stamp));
        snap.time = stamp;
        traj.diagnostics.push_back(measure_snapshot(snap, cfg.m, cfg.sign));
        traj.snapshots.push_back(std::move(snap));
        const double tail = traj.diagnostics.back().tail_mass;
        if (tail > cfg.tail_abort) {
            traj.status = RunStatus::TAIL_OVERFLOW;
            traj.abort_time = stamp;
            traj.abort_reason = "relative tail mass " + std::to_string(tail) +
                                " exceeded the abort threshold at t = " + std::to_string(stamp);
            return false;
        }
        return true;
    };

    if (!record(time)) return traj;
    for (std::size_t s = 1; s < times.size(); ++s) {
        const double target = times[s];
        const double span = target - time;
        if (span <= 1e-14) continue;
        const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
        const double h = span / static_cast<double>(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            const double last_finite = time;
            stepper.step(u_hat, time, h);
            if (!stepper.finite(u_hat)) {
                traj.status = RunStatus::BLOW_UP;
                traj.abort_time = last_finite;
                traj.abort_reason =
                    "non-finite state; last finite time t = " + std::to_string(last_finite);
                return traj;
            }
        }
        time = target;  // guard accumulated rounding in the stamp
        if (!record(time)) return traj;
    }
    return traj;
}

struct LinearizedTrajectory {
    const Trajectory* background = nullptr;
    std::vector<RealField> snapshots;  // z(t) at the background snapshot times
};

/// Integrate the linearized equation z_t - z_5x = sign u^m z_x along a
/// stored background, with u^m interpolated linearly in time between
/// snapshots. Background spacing must resolve the stepping (<= 10 dt).
inline LinearizedTrajectory linearized_evolve(const RealField& z0, const Trajectory& bg,
                                              int m, double dt = 0.0) {
    if (!(z0.grid == bg.snapshots.front().grid))
        throw ValidationError("linearized_evolve: grid mismatch with background");
    if (bg.snapshots.size() < 2)
        throw ValidationError("linearized_evolve: background needs at least two snapshots");
    const double h = dt > 0.0 ? dt : bg.config.dt;
    for (std::size_t i = 1; i < bg.snapshots.size(); ++i)
        if (bg.snapshots[i].time - bg.snapshots[i - 1].time > 10.0 * h + 1e-12)
            throw ValidationError(
                "linearized_evolve: background snapshots too sparse for dt interpolation");

    const Grid1D& grid = z0.grid;
    const std::size_t n = grid.size();
    EvolutionConfig lin_cfg = bg.config;
    detail::Stepper stepper(grid, lin_cfg);

    // physical-space background interpolation u^m(tau)
    auto coeff_field = [&](double tau) {
        std::size_t i = 1;
        while (i + 1 < bg.snapshots.size() && bg.snapshots[i].time < tau) ++i;
        const auto& a = bg.snapshots[i - 1];
        const auto& b = bg.snapshots[i];
        if (tau < a.time - 1e-9 || tau > b.time + 1e-9)
            throw ValidationError("linearized_evolve: time " + std::to_string(tau) +
                                  " outside background range");
        const double w = (tau - a.time) / (b.time - a.time);
        RealField u(grid, tau);
        for (std::size_t j = 0; j < n; ++j)
            u.values[j] = (1.0 - w) * a.values[j] + w * b.values[j];
        return u;
    };

    // IFRK4 with a frozen-in-time stage coefficient: the nonlinear term is
    // a(tau) z_x with a = sign_scale u^m
    auto rhs = [&](const std::vector<Complex>& z_hat, double tau) {
        SpectralField zd(grid, tau);
        for (std::size_t i = 0; i < n; ++i)
            zd.coefficients[i] = stepper.keep[i] ? z_hat[i] : Complex(0.0);
        const auto zx = inverse_transform(derivative(zd, 1));
        const auto u = coeff_field(tau);
        const auto ud = inverse_transform(dealias(forward_transform(u), stepper.frac));
        RealField prod(grid, tau);
        for (std::size_t j = 0; j < n; ++j) {
            double p = ud.values[j];
            if (m == 2) p *= ud.values[j];
            prod.values[j] = stepper.sign_scale * p * zx.values[j];
        }
        auto out = forward_transform(prod);
        std::vector<Complex> r(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = stepper.keep[i] ? out.coefficients[i] : Complex(0.0);
        return r;
    };

    LinearizedTrajectory lin;
    lin.background = &bg;
    auto z_hat = forward_transform(z0).coefficients;
    double time = bg.snapshots.front().time;
    lin.snapshots.push_back(bg.snapshots.front());
    lin.snapshots.back().values = z0.values;
    lin.snapshots.back().time = time;

    for (std::size_t s = 1; s < bg.snapshots.size(); ++s) {
        const double target = bg.snapshots[s].time;
        const double span = target - time;
        const auto steps = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
        const double hh = span / static_cast<double>(steps);
        for (std::size_t k = 0; k < steps; ++k) stepper.step_with(rhs, z_hat, time, hh);
        time = target;
        if (!stepper.finite(z_hat))
            throw BlowUpError("linearized_evolve: non-finite state", time);
        lin.snapshots.push_back(inverse_transform(SpectralField(grid, z_hat, time)));
    }
    return lin;
}

}  // namespace dispersa
