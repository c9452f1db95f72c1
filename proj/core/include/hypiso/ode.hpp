#pragma once

#include <functional>
#include <vector>

#include "hypiso/ball.hpp"

namespace hypiso {

// y' = f(t, y)
using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-3;
    long max_steps = 1000000;
};

struct OdeNode {
    double t;
    Vec y;
    Vec dy;
};

struct OdeSolution {
    std::vector<OdeNode> nodes; // accepted steps, ascending t
    bool stopped_by_event = false;
    long steps = 0;

    // Cubic Hermite interpolation between accepted nodes.
    Vec at(double t) const;
};

// Dormand-Prince 5(4) with step control. Integration runs forward from
// t0 until `stop` returns true at an accepted node (the event time is then
// refined by bisection on the Hermite interpolant) or t reaches t_max.
OdeSolution integrate_ode(const OdeRhs& f, double t0, Vec y0, double t_max,
                          const std::function<bool(double, const Vec&)>& stop,
                          const OdeOptions& opts = {});

} // namespace hypiso
