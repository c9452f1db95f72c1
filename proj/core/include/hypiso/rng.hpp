#pragma once

#include <random>

#include "hypiso/ball.hpp"

namespace hypiso {

using Rng = std::mt19937_64;

inline Vec random_gaussian(Rng& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

inline Vec random_unit_vector(Rng& rng, int n) {
    Vec v = random_gaussian(rng, n);
    while (v.norm() < 1e-12) v = random_gaussian(rng, n);
    return v / v.norm();
}

// Uniform direction, radius up to rmax (biased toward the center; fine
// for test sampling).
inline Vec random_ball_vec(Rng& rng, int n, double rmax = 0.9) {
    std::uniform_real_distribution<double> u(0.0, rmax);
    return u(rng) * random_unit_vector(rng, n);
}

// Orthogonal matrix from the QR factorization of a Gaussian matrix,
// signs fixed by the R diagonal.
inline Mat random_orthogonal(Rng& rng, int n) {
    Mat a(n, n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

} // namespace hypiso
