#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hypiso/ball.hpp"

namespace hypiso {

using ChartMap = std::function<Vec(const Vec&)>;
using ChartJacobian = std::function<Mat(const Vec&)>;

// Smooth parametrized patch: an axis-aligned box in parameter space
// mapped into B^n (interior charts) or S^{n-1} (ideal charts).
// Zero-parameter charts are allowed and denote single points carrying
// counting measure.
struct Chart {
    Vec lo;
    Vec hi;
    ChartMap map;
    ChartJacobian jacobian;

    int pdim() const { return static_cast<int>(lo.size()); }
    Vec center() const { return 0.5 * (lo + hi); }
    double box_measure() const;
};

// Central-difference fallback for charts without a closed-form Jacobian.
ChartJacobian finite_difference_jacobian(ChartMap map, int pdim, double h = 1e-6);

struct Submanifold {
    int k = 0;
    int n = 0;
    std::vector<Chart> interior_charts;
    std::vector<Chart> ideal_charts;
    bool contains_origin = false;
    bool totally_geodesic = false;
    std::vector<Vec> candidate_density_points;
};

// Construction-time sanity probes: dimensions consistent, ideal charts
// on the sphere to 1e-10, positive Gram determinants on a 10^k grid,
// contains_origin witnessed by a chart point with |x| < 1e-8.
// Throws std::domain_error on violation.
void validate_submanifold(const Submanifold& sigma);

// Minimum of |x(u) - target| over the chart box (coarse grid plus
// Gauss-Newton polish). Returns (param, distance).
std::pair<Vec, double> nearest_param(const Chart& chart, const Vec& target);

// Chart composed with a ball isometry; the Jacobian is chained through
// the closed-form differential of the map.
Chart transform_chart(const Chart& chart, const MobiusMap& g);

// Min/max of |x(u)| over the chart box; used to seed clipped quadrature.
std::pair<double, double> radial_range(const Chart& chart);

// Parameter points realizing local extrema of |x(u)| strictly inside the
// box, found from grid seeds; clipped quadrature uses them as hot spots.
std::vector<Vec> radial_extremum_params(const Chart& chart);

} // namespace hypiso
