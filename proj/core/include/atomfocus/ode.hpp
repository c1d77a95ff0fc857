#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace atomfocus::ode {

// Adaptive Dormand-Prince 5(4) with an optional scalar event function.
// Integrates toward t_end from either direction (h carries the sign).
// Events are located on the accepted step by bisection on the cubic Hermite
// interpolant, which is consistent with the step's own accuracy.

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct DriverResult {
    double t = 0.0;
    State<N> y{};
    bool event_hit = false;
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
};

namespace detail {

template <std::size_t N, class RHS>
void dp45_step(RHS&& f, double t, const State<N>& y, double h,
               const State<N>& k1, State<N>& y5, State<N>& err, State<N>& k_last) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State<N> k2, k3, k4, k5, k6, tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + h / 5, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + 3 * h / 10, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + 4 * h / 5, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + 8 * h / 9, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, y5, k_last);  // FSAL
    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                      e7 * k_last[i]);
}

// cubic Hermite interpolation over an accepted step, s in [0,1]
template <std::size_t N>
State<N> hermite(const State<N>& y0, const State<N>& f0, const State<N>& y1,
                 const State<N>& f1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
        y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    return y;
}

} // namespace detail

// Event: callable (t, y) -> double; integration stops where it crosses zero.
// Pass nullptr-like NoEvent{} to run to t_end.
struct NoEvent {
    template <std::size_t N>
    double operator()(double, const State<N>&) const { return 1.0; }
    static constexpr bool enabled = false;
};

template <class E>
inline constexpr bool event_enabled_v = !std::is_same_v<std::decay_t<E>, NoEvent>;

// Observer: callable (t, y), invoked at t0 and after every accepted step
// (including the bisected event state).
struct NoObserver {
    template <std::size_t N>
    void operator()(double, const State<N>&) const {}
};

template <class O>
inline constexpr bool observer_enabled_v = !std::is_same_v<std::decay_t<O>, NoObserver>;

template <std::size_t N, class RHS, class Event = NoEvent, class Observer = NoObserver>
DriverResult<N> integrate(RHS&& f, double t0, State<N> y0, double t_end, double rtol,
                          double atol, Event&& event = {}, double h_init = 0.0,
                          std::size_t max_steps = 100000000, Observer&& observer = {}) {
    const double dir = (t_end >= t0) ? 1.0 : -1.0;
    double h = h_init != 0.0 ? h_init : dir * std::max(1e-6 * std::abs(t_end - t0), 1e-12);
    DriverResult<N> res;
    res.t = t0;
    res.y = y0;

    State<N> k1, y5, errv, k_last;
    f(t0, y0, k1);
    double g_prev = 0.0;
    if constexpr (event_enabled_v<Event>) g_prev = event(t0, y0);
    if constexpr (observer_enabled_v<Observer>) observer(t0, y0);

    for (std::size_t step = 0; step < max_steps; ++step) {
        // a clamped final step can land one ulp short of t_end; treat that as done
        const double done_eps = 4.0 * std::numeric_limits<double>::epsilon() *
                                std::max(std::abs(res.t), std::abs(t_end));
        if (dir * (res.t - t_end) >= -done_eps) return res;
        if (dir * (res.t + h - t_end) > 0.0) h = t_end - res.t;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(res.t)))
            throw std::runtime_error("stiff trajectory: step-size underflow");

        detail::dp45_step(f, res.t, res.y, h, k1, y5, errv, k_last);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::max(std::abs(res.y[i]), std::abs(y5[i]));
            const double e = sc > 0.0 ? errv[i] / sc : 0.0;
            err += e * e;
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            if constexpr (event_enabled_v<Event>) {
                const double g_new = event(res.t + h, y5);
                if (g_prev == 0.0) {  // started exactly on the event
                    res.event_hit = true;
                    return res;
                }
                if (g_new == 0.0 || (g_prev > 0.0) != (g_new > 0.0)) {
                    double lo = 0.0, hi = 1.0;
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        auto ym = detail::hermite(res.y, k1, y5, k_last, h, mid);
                        const double gm = event(res.t + mid * h, ym);
                        if (gm == 0.0) { lo = hi = mid; break; }
                        if ((gm > 0.0) == (g_prev > 0.0)) lo = mid;
                        else hi = mid;
                    }
                    const double s = 0.5 * (lo + hi);
                    res.y = detail::hermite(res.y, k1, y5, k_last, h, s);
                    res.t += s * h;
                    res.event_hit = true;
                    ++res.n_steps;
                    if constexpr (observer_enabled_v<Observer>) observer(res.t, res.y);
                    return res;
                }
                g_prev = g_new;
            }
            res.t += h;
            res.y = y5;
            k1 = k_last;
            ++res.n_steps;
            if constexpr (observer_enabled_v<Observer>) observer(res.t, res.y);
            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            ++res.n_rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
    throw std::runtime_error("ode::integrate: step budget exhausted");
}

} // namespace atomfocus::ode
