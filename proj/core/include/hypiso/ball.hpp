#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace hypiso {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a computation loses too much precision to be trusted
/// (points pushed onto or outside the unit sphere, degenerate
/// canonicalization, exhausted iteration budgets).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// 1 - |x|^2 evaluated as (1 - |x|)(1 + |x|); keeps precision for |x| -> 1.
double one_minus_sq(const Vec& x);

// rho = ln((1+r)/(1-r)) for r in [0,1).
double radius_to_rho(double r);
// r = tanh(rho/2) for rho >= 0.
double rho_to_radius(double rho);

// Point of the open unit ball B^n, n >= 2.
struct BallPoint {
    explicit BallPoint(Vec coords);
    const Vec& coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    double radius() const { return coords_.norm(); }
    double rho() const { return radius_to_rho(radius()); }

private:
    Vec coords_;
};

// Point of the sphere at infinity S^{n-1}.
struct IdealPoint {
    explicit IdealPoint(Vec coords);
    const Vec& coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }

private:
    Vec coords_;
};

// Hyperbolic length scaling 2/(1-r^2) at x.
double conformal_factor_at(const Vec& x);
double conformal_factor(const BallPoint& x);

// Ball-model distance arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))).
double hyperbolic_distance(const Vec& x, const Vec& y);
double hyperbolic_distance(const BallPoint& x, const BallPoint& y);

// Mobius addition a (+) x, i.e. the translation tau_a evaluated at x.
// Valid on the closed ball; |x| = 1 maps to |result| = 1.
Vec mobius_add(const Vec& a, const Vec& x);
// d tau_a / dx at x (n x n).
Mat mobius_add_dx(const Vec& a, const Vec& x);
// d tau_a(x) / da at fixed x (n x n).
Mat mobius_add_da(const Vec& a, const Vec& x);

// Isometry of the ball model stored canonically as x -> Q * tau_a(x),
// with Q orthogonal and |a| < 1.
struct MobiusMap {
    Mat rotation;
    Vec translation;

    int dim() const { return static_cast<int>(translation.size()); }
    static MobiusMap identity(int n);
};

// tau_a as a MobiusMap (identity rotation part). Requires |a| < 1.
MobiusMap mobius_translate(const Vec& a);
// Pure rotation. q must be orthogonal to 1e-12.
MobiusMap mobius_rotate(const Mat& q);

// Action on a point of the closed ball.
Vec apply(const MobiusMap& g, const Vec& x);
BallPoint apply(const MobiusMap& g, const BallPoint& x);
IdealPoint apply(const MobiusMap& g, const IdealPoint& x);

// Differential of the action at x (n x n matrix).
Mat differential(const MobiusMap& g, const Vec& x);

MobiusMap inverse(const MobiusMap& g);
// g after h, re-canonicalized into (rotation, translation) form.
MobiusMap compose(const MobiusMap& g, const MobiusMap& h);

// Max-norm deviation of q^T q from the identity.
double orthogonality_defect(const Mat& q);
// Nearest orthogonal matrix (polar factor).
Mat orthonormalize(const Mat& q);

} // namespace hypiso
