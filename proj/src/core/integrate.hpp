#pragma once

#include <algorithm>
#include <cmath>

#include "core/types.hpp"

namespace qcb {

struct StepControl {
    double tol = 1e-10;     // local error tolerance (absolute and relative)
    double h_init = 1e-3;
    long max_steps = 50'000'000;
};

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

// Adaptive Dormand-Prince 5(4) for dy/dt = f(t, y), y complex. f writes the
// derivative into its third argument. Deterministic: fixed controller, no
// randomized pivoting anywhere.
template <typename Rhs>
void dopri5(Rhs&& f, Vec& y, double t0, double t1, const StepControl& ctl,
            IntegrationStats* stats = nullptr) {
    if (t1 < t0) fail_invalid("dopri5: t1 < t0");
    if (t1 == t0) return;

    // Dormand & Prince (1980) coefficients, FSAL form.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // y5 - y4 error weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const auto n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    double t = t0;
    double h = std::min(ctl.h_init, t1 - t0);
    long evals = 0;

    f(t, y, k1);
    ++evals;

    long steps = 0;
    while (t < t1) {
        if (++steps > ctl.max_steps) fail_numerical("dopri5: step budget exhausted");
        if (h < (t1 - t0) * 1e-14)
            fail_numerical("dopri5: step size underflow (stiffness) at t=" + std::to_string(t));
        if (t + h > t1) h = t1 - t;

        ytmp = y + h * (a21 * k1);
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);
        evals += 6;

        // scaled max-norm of the embedded 4th/5th order difference
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const cxd ei = h * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) + e5 * k5(i) + e6 * k6(i) +
                                e7 * k7(i));
            const double sc = ctl.tol + ctl.tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            err = std::max(err, std::abs(ei) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7); // FSAL
            if (stats) ++stats->accepted;
        } else if (stats) {
            ++stats->rejected;
        }

        const double factor = (err == 0.0) ? 5.0
                                           : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
    if (stats) stats->rhs_evals += evals;
}

} // namespace qcb
