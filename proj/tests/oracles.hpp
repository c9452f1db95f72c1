#pragma once

// Test-only reference computations, kept independent of the library's
// adaptive quadrature and optimizer paths.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Composite Simpson on [a, b] with n panels (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 2048) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Tensor Simpson over a rectangle.
inline double simpson2(const std::function<double(double, double)>& f, double a1,
                       double b1, double a2, double b2, int n = 256) {
    return simpson(
        [&](double u) {
            return simpson([&](double v) { return f(u, v); }, a2, b2, n);
        },
        a1, b1, n);
}

// Least-squares sphere through points: |x - c|^2 = R^2 linearized as
// 2 c . x - (|c|^2 - R^2) = |x|^2. Returns (center, radius).
inline std::pair<Eigen::VectorXd, double> fit_sphere(
    const std::vector<Eigen::VectorXd>& pts) {
    const int n = static_cast<int>(pts.front().size());
    Eigen::MatrixXd a(pts.size(), n + 1);
    Eigen::VectorXd b(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        a.row(i).head(n) = 2.0 * pts[i].transpose();
        a(i, n) = -1.0;
        b(i) = pts[i].squaredNorm();
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd c = sol.head(n);
    const double r2 = c.squaredNorm() - sol(n);
    return {c, std::sqrt(std::max(0.0, r2))};
}

// Two-point Richardson extrapolation of g(delta) = g0 + c delta + ...
// toward delta -> 0.
inline double richardson_linear(double g1, double d1, double g2, double d2) {
    return g2 + (g2 - g1) * d2 / (d1 - d2);
}

} // namespace oracle
