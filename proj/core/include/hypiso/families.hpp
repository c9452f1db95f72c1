#pragma once

#include <utility>

#include "hypiso/chart.hpp"

namespace hypiso {

// Unit k-disk through the origin spanned by the orthonormal columns of
// `frame` (n x k). Totally geodesic; the equality case of every
// inequality in the verify module.
Submanifold flat_disk(int k, int n, const Mat& frame);
Submanifold flat_disk(int k, int n); // coordinate plane

// Totally geodesic cap: the k-sphere of Euclidean center sec(theta)*axis
// and radius tan(theta) meeting the unit sphere orthogonally, restricted
// to the (k+1)-plane spanned by axis and a deterministic complement
// frame. theta = pi/2 degenerates to the flat disk orthogonal to axis.
Submanifold geodesic_cap(int k, int n, double theta, const Vec& axis);

// k omega_k sin^{k-1}(theta)
double cap_ideal_volume_closed_form(int k, double theta);
// k omega_k tan^k(theta) * int_0^{pi/2-theta} sin^{k-1}; closed form for
// k = 2, adaptive quadrature otherwise.
double cap_volume_closed_form(int k, double theta);

// Charts composed with g, flags recomputed.
Submanifold mobius_image(const Submanifold& sigma, const MobiusMap& g);

// Concatenated charts of equal (k, n); candidate density points collect
// transverse pairwise intersections located by damped Gauss-Newton.
Submanifold union_of(const std::vector<Submanifold>& parts, unsigned seed = 12345);

struct CatenoidProfile {
    double neck = 0.0;                              // sigma_0
    std::vector<std::pair<double, double>> samples; // (t, sigma(t)) along the shot
    double residual = 0.0;                          // max first-integral drift
};

struct CatenoidOptions {
    double eps_boundary = 1e-6; // stop once |x| > 1 - eps_boundary
    double rel_tol = 1e-10;
    long max_steps = 1000000;
};

// Spherical catenoid in B^3: minimal surface of revolution about the
// e3 diameter with neck distance sigma_0 from the axis. The profile is
// shot from (sigma_0, 0) through the Euler-Lagrange equation of
// L = sinh(sigma) sqrt(cosh^2(sigma) + sigma'^2); the Beltrami integral
// sinh(sigma) cosh^2(sigma) / sqrt(cosh^2(sigma) + sigma'^2) monitors the
// integration. The chart itself runs over w = +-sqrt(sigma - sigma_0),
// which keeps the Euclidean integrand smooth out to the collar.
std::pair<Submanifold, CatenoidProfile> catenoid_with_profile(
    double neck, const CatenoidOptions& opts = {});
Submanifold catenoid(double neck, const CatenoidOptions& opts = {});

// Euclidean sphere cap inside the closed ball: carrier sphere of center
// center_dist * e_n and given radius, generally NOT orthogonal to the
// unit sphere, cut along their intersection circle. Not minimal; serves
// as the negative control for the inequality checks.
Submanifold euclidean_sphere_cap(int n, double center_dist, double radius);

} // namespace hypiso
