#pragma once

#include <vector>

#include "hypiso/chart.hpp"
#include "hypiso/quadrature.hpp"

namespace hypiso {

// omega_k = pi^{k/2} / Gamma(k/2 + 1)
double unit_ball_volume(int k);

struct MeasureOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-10;
    double cross_check_tol = 1e-9; // Euclidean vs hyperbolic-route agreement
};

struct VolumeReport {
    double vol_euclidean = 0.0;
    double vol_ideal_boundary = 0.0;
    double truncation_radius = 0.0;
    double tail_estimate = 0.0;
    double quadrature_error = 0.0;
};

// Euclidean k-volume: adaptive quadrature of sqrt(det J^T J) clipped to
// {|x| < truncation_radius}, cross-checked against the hyperbolic-measure
// route (1 + cosh rho)^{-k} dV_H, with the collar beyond the truncation
// recovered by Richardson extrapolation in (1 - r).
VolumeReport euclidean_volume(const Submanifold& sigma,
                              double truncation_radius = 1.0 - 1e-6,
                              const MeasureOptions& opts = {});

// (k-1)-volume of the ideal boundary charts.
double ideal_boundary_volume(const Submanifold& sigma, const MeasureOptions& opts = {});

// Vol_R(Sigma intersect B_r)
double truncated_volume(const Submanifold& sigma, double r,
                        const MeasureOptions& opts = {});

struct MonotonicityCurve {
    std::vector<double> radii;
    std::vector<double> ratios; // Vol_R(Sigma cap B_r) / r^k
};

// Ratios at Chebyshev-spaced radii in [1e-3, 1 - 1e-6].
MonotonicityCurve monotonicity_curve(const Submanifold& sigma, int grid_size,
                                     const MeasureOptions& opts = {});

struct DensityEstimate {
    Vec point;
    double value = 0.0;
    std::vector<double> radii_used;
    double extrapolation_error = 0.0;
};

// Density at p: recenter by the translation carrying p to the origin,
// then extrapolate m(r)/omega_k over r in {1e-2, 5e-3, 2.5e-3} linearly
// in r^2.
DensityEstimate density(const Submanifold& sigma, const Vec& p,
                        const MeasureOptions& opts = {});

// |projection of the unit radial direction onto the tangent plane|^2;
// this equals |grad_Sigma rho|^2 in the hyperbolic metric.
double tangential_radial_gradient_sq(const Vec& x, const Mat& J);

// --- identity suites -----------------------------------------------------

// Max over uniform cells of the relative gap between the direct Euclidean
// cell integral and the (1+cosh rho)^{-k} dV_H route.
double conversion_identity_max_residual(const Submanifold& sigma,
                                        int cells_per_axis = 4);

// Max relative gap, over sampled points of the clip sphere {|x| = r},
// between the hyperbolic boundary (k-1)-form and (sinh rho / r)^{k-1}
// times the Euclidean one.
double boundary_form_identity_max_residual(const Submanifold& sigma, double r);

// Relative gap between d/d rho of int_{Sigma cap B_rho} w |grad rho|^2 dV_H
// (finite differences) and the boundary integral of w |grad rho| d sigma_H
// for w = (1 + cosh rho)^{-k}. Surfaces only (k = 2).
double coarea_identity_residual(const Submanifold& sigma, double rho0,
                                const MeasureOptions& opts = {});

} // namespace hypiso
