#include "hypiso/ball.hpp"

#include <cmath>

namespace hypiso {

double one_minus_sq(const Vec& x) {
    const double r = x.norm();
    return (1.0 - r) * (1.0 + r);
}

double radius_to_rho(double r) {
    if (!(r >= 0.0 && r < 1.0))
        throw std::domain_error("radius_to_rho: r must lie in [0,1)");
    return std::log1p(r) - std::log1p(-r);
}

double rho_to_radius(double rho) {
    if (!(rho >= 0.0))
        throw std::domain_error("rho_to_radius: rho must be nonnegative");
    return std::tanh(0.5 * rho);
}

BallPoint::BallPoint(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2)
        throw std::domain_error("BallPoint: ambient dimension must be >= 2");
    if (!(coords_.norm() < 1.0))
        throw std::domain_error("BallPoint: |coords| must be < 1");
}

IdealPoint::IdealPoint(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2)
        throw std::domain_error("IdealPoint: ambient dimension must be >= 2");
    if (std::abs(coords_.norm() - 1.0) > 1e-12)
        throw std::domain_error("IdealPoint: |coords| must equal 1 to 1e-12");
}

double conformal_factor_at(const Vec& x) {
    return 2.0 / one_minus_sq(x);
}

double conformal_factor(const BallPoint& x) {
    return conformal_factor_at(x.coords());
}

double hyperbolic_distance(const Vec& x, const Vec& y) {
    const double d2 = (x - y).squaredNorm();
    if (d2 == 0.0) return 0.0;
    const double arg = 1.0 + 2.0 * d2 / (one_minus_sq(x) * one_minus_sq(y));
    return std::acosh(std::max(1.0, arg));
}

double hyperbolic_distance(const BallPoint& x, const BallPoint& y) {
    return hyperbolic_distance(x.coords(), y.coords());
}

Vec mobius_add(const Vec& a, const Vec& x) {
    const double ax = a.dot(x);
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const double denom = 1.0 + 2.0 * ax + a2 * x2;
    return ((1.0 + 2.0 * ax + x2) * a + (1.0 - a2) * x) / denom;
}

Mat mobius_add_dx(const Vec& a, const Vec& x) {
    const int n = static_cast<int>(a.size());
    const double ax = a.dot(x);
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const double num_s = 1.0 + 2.0 * ax + x2;
    const double den = 1.0 + 2.0 * ax + a2 * x2;
    const Vec num = num_s * a + (1.0 - a2) * x;
    Mat dnum = a * (2.0 * a + 2.0 * x).transpose();
    dnum += (1.0 - a2) * Mat::Identity(n, n);
    const Vec dden = 2.0 * a + 2.0 * a2 * x;
    return (dnum * den - num * dden.transpose()) / (den * den);
}

Mat mobius_add_da(const Vec& a, const Vec& x) {
    const int n = static_cast<int>(a.size());
    const double ax = a.dot(x);
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const double num_s = 1.0 + 2.0 * ax + x2;
    const double den = 1.0 + 2.0 * ax + a2 * x2;
    const Vec num = num_s * a + (1.0 - a2) * x;
    Mat dnum = num_s * Mat::Identity(n, n);
    dnum += 2.0 * a * x.transpose() - 2.0 * x * a.transpose();
    const Vec dden = 2.0 * x + 2.0 * x2 * a;
    return (dnum * den - num * dden.transpose()) / (den * den);
}

MobiusMap MobiusMap::identity(int n) {
    return MobiusMap{Mat::Identity(n, n), Vec::Zero(n)};
}

MobiusMap mobius_translate(const Vec& a) {
    if (!(a.norm() < 1.0))
        throw std::domain_error("mobius_translate: |a| must be < 1");
    const int n = static_cast<int>(a.size());
    return MobiusMap{Mat::Identity(n, n), a};
}

MobiusMap mobius_rotate(const Mat& q) {
    if (orthogonality_defect(q) > 1e-12)
        throw std::domain_error("mobius_rotate: matrix is not orthogonal to 1e-12");
    return MobiusMap{q, Vec::Zero(q.rows())};
}

Vec apply(const MobiusMap& g, const Vec& x) {
    return g.rotation * mobius_add(g.translation, x);
}

BallPoint apply(const MobiusMap& g, const BallPoint& x) {
    Vec y = apply(g, x.coords());
    if (y.norm() >= 1.0)
        throw numeric_error("apply: interior point mapped onto or outside the sphere");
    return BallPoint(std::move(y));
}

IdealPoint apply(const MobiusMap& g, const IdealPoint& x) {
    return IdealPoint(apply(g, x.coords()));
}

Mat differential(const MobiusMap& g, const Vec& x) {
    return g.rotation * mobius_add_dx(g.translation, x);
}

MobiusMap inverse(const MobiusMap& g) {
    // (Q tau_a)^{-1} = Q^T tau_{-Q a}
    return MobiusMap{g.rotation.transpose(), -(g.rotation * g.translation)};
}

double orthogonality_defect(const Mat& q) {
    const int n = static_cast<int>(q.rows());
    return (q.transpose() * q - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

Mat orthonormalize(const Mat& q) {
    Eigen::JacobiSVD<Mat> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

MobiusMap compose(const MobiusMap& g, const MobiusMap& h) {
    const int n = g.dim();
    if (n != h.dim())
        throw std::domain_error("compose: dimension mismatch");
    // Composite action c = g o h sends -a to 0, where a is the canonical
    // translation part; recover a through the closed-form inverses.
    const Vec w = apply(inverse(h), Vec(-g.translation)); // = c^{-1}(0)
    const Vec a = -w;
    if (!(a.norm() < 1.0 - 1e-14))
        throw numeric_error("compose: translation parameter reached the boundary");
    // c o tau_{-a} is the linear rotation part; read its columns off
    // the action at e_i / 2.
    Mat q(n, n);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 0.5;
        q.col(i) = 2.0 * apply(g, apply(h, mobius_add(-a, e)));
    }
    if (orthogonality_defect(q) > 1e-10) {
        q = orthonormalize(q);
        if (orthogonality_defect(q) > 1e-10)
            throw numeric_error("compose: canonicalization failed to produce a rotation");
    }
    return MobiusMap{q, a};
}

} // namespace hypiso
