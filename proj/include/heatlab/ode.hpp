/// @file ode.hpp
/// @brief Adaptive Dormand-Prince 5(4) integration for small complex systems.
///
/// Plain embedded RK with PI-free step control; state dimension is a template
/// parameter (the radial equations here are first-order systems of size 2).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

template <int N>
using OdeState = std::array<std::complex<double>, N>;

/// Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0) in place.
/// rhs signature: void(double t, const OdeState<N>&, OdeState<N>& dydt).
template <int N, class RHS>
void ode_integrate(RHS&& rhs, double t0, double t1, OdeState<N>& y, double rtol = 1e-11,
                   double atol = 1e-12, const char* what = "ode_integrate") {
    static constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double kA[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                                      -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double kB4[7] = {5179.0 / 57600,    0.0,         7571.0 / 16695, 393.0 / 640,
                                      -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    if (!(t1 > t0)) {
        if (t1 == t0) return;
        throw std::invalid_argument(std::string(what) + ": integration must move forward");
    }
    double t = t0;
    double h = std::min((t1 - t0) / 16.0, 0.1);
    std::array<OdeState<N>, 7> k;
    OdeState<N> ytmp, y5, y4;
    long steps = 0;
    while (t < t1) {
        if (++steps > 2'000'000)
            throw std::runtime_error(std::string(what) + ": step limit exceeded");
        h = std::min(h, t1 - t);
        for (int s = 0; s < 7; ++s) {
            for (int i = 0; i < N; ++i) {
                std::complex<double> acc = y[i];
                for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
                ytmp[i] = acc;
            }
            rhs(t + kC[s] * h, ytmp, k[s]);
        }
        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            std::complex<double> acc5 = y[i], acc4 = y[i];
            for (int s = 0; s < 7; ++s) {
                acc5 += h * kB5[s] * k[s][i];
                acc4 += h * kB4[s] * k[s][i];
            }
            y5[i] = acc5;
            y4[i] = acc4;
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(acc5));
            err = std::max(err, std::abs(acc5 - acc4) / scale);
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error(std::string(what) + ": step size underflow");
    }
}

/// Integrate through an ascending list of checkpoints, invoking
/// on_point(t, y) at each. Checkpoints must satisfy stops.front() >= t0.
template <int N, class RHS, class CB>
void ode_integrate_path(RHS&& rhs, double t0, const std::vector<double>& stops, OdeState<N>& y,
                        CB&& on_point, double rtol = 1e-11, double atol = 1e-12,
                        const char* what = "ode_integrate_path") {
    double t = t0;
    for (double s : stops) {
        if (s < t - 1e-15)
            throw std::invalid_argument(std::string(what) + ": checkpoints must be ascending");
        if (s > t) {
            ode_integrate<N>(rhs, t, s, y, rtol, atol, what);
            t = s;
        }
        on_point(s, y);
    }
}

}  // namespace heatlab
