#pragma once

#include <functional>

#include "hypiso/chart.hpp"

namespace hypiso {

struct QuadOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-10;
    int max_depth = 40;
    long max_cells = 400000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

// Integrand over a chart; receives the ambient point and the n x pdim
// Jacobian at the quadrature node.
using ChartIntegrand = std::function<double(const Vec& x, const Mat& J)>;

// Adaptive tensor Gauss-Kronrod 7/15 over the chart's parameter box.
QuadResult integrate_chart(const Chart& chart, const ChartIntegrand& f,
                           const QuadOptions& opts = {});

// Same, restricted to the region {|x(u)| < clip_radius}. Cells straddling
// the clip sphere are bisected, then resolved by per-line root finding
// (inner-axis roots of |x|^2 - r^2 located with Brent, inside segments
// integrated with mapped Gauss-Kronrod rules).
QuadResult integrate_chart_clipped(const Chart& chart, double clip_radius,
                                   const ChartIntegrand& f,
                                   const QuadOptions& opts = {});

// Adaptive scalar Gauss-Kronrod 7/15 on [a, b].
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12, double abs_tol = 1e-14);

// Root of a continuous scalar function on a bracketing interval.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-15);

} // namespace hypiso
