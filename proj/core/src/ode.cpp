#include "hypiso/ode.hpp"

#include <cmath>

namespace hypiso {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
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

} // namespace

Vec OdeSolution::at(double t) const {
    if (nodes.empty()) throw numeric_error("OdeSolution::at: empty solution");
    if (t <= nodes.front().t) return nodes.front().y;
    if (t >= nodes.back().t) return nodes.back().y;
    size_t lo = 0, hi = nodes.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (nodes[mid].t <= t ? lo : hi) = mid;
    }
    const OdeNode& a = nodes[lo];
    const OdeNode& b = nodes[hi];
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * a.y + h10 * h * a.dy + h01 * b.y + h11 * h * b.dy;
}

OdeSolution integrate_ode(const OdeRhs& f, double t0, Vec y0, double t_max,
                          const std::function<bool(double, const Vec&)>& stop,
                          const OdeOptions& opts) {
    OdeSolution sol;
    double t = t0;
    Vec y = std::move(y0);
    Vec k1 = f(t, y);
    sol.nodes.push_back({t, y, k1});
    double h = opts.initial_step;

    while (t < t_max && sol.steps < opts.max_steps) {
        ++sol.steps;
        h = std::min(h, t_max - t);
        const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
        const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 =
            f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = f(t + h, ynew);
        const Vec errv =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < y.size(); ++i) {
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            err = std::max(err, std::abs(errv(i)) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            sol.nodes.push_back({t, y, k1});
            if (stop && stop(t, y)) {
                sol.stopped_by_event = true;
                break;
            }
        }
        const double factor =
            (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
        if (!(h > 1e-300)) throw numeric_error("integrate_ode: step size underflow");
    }
    if (sol.steps >= opts.max_steps)
        throw numeric_error("integrate_ode: step budget exhausted");
    return sol;
}

} // namespace hypiso
