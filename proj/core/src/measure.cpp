#include "hypiso/measure.hpp"

#include <cmath>
#include <numbers>

namespace hypiso {

namespace {

constexpr double kPi = std::numbers::pi;

double gram_sqrt(const Mat& j) {
    if (j.cols() == 0) return 1.0;
    const double det = (j.transpose() * j).determinant();
    if (!std::isfinite(det))
        throw numeric_error("measure: non-finite Gram determinant");
    return std::sqrt(std::max(0.0, det));
}

// Direct Euclidean volume element.
double euclidean_integrand(const Vec&, const Mat& j) { return gram_sqrt(j); }

// The same element reached through the hyperbolic measure and the
// conversion factor (1 + cosh rho)^{-k}, with rho recomputed through the
// distance formula so the two routes share no intermediate expressions.
double hyperbolic_route_integrand(const Vec& x, const Mat& j, int k, const Vec& origin) {
    const double rho = hyperbolic_distance(origin, x);
    const double factor = std::pow(1.0 + std::cosh(rho), -k);
    const Mat jh = conformal_factor_at(x) * j;
    return factor * gram_sqrt(jh);
}

QuadResult clipped_sum(const std::vector<Chart>& charts, double r,
                       const ChartIntegrand& f, const QuadOptions& qo) {
    QuadResult total;
    for (const Chart& c : charts) {
        const QuadResult q = integrate_chart_clipped(c, r, f, qo);
        total.value += q.value;
        total.error += q.error;
        total.evals += q.evals;
        total.converged = total.converged && q.converged;
    }
    return total;
}

QuadOptions to_quad(const MeasureOptions& opts) {
    QuadOptions qo;
    qo.rel_tol = opts.rel_tol;
    qo.abs_tol = opts.abs_tol;
    return qo;
}

} // namespace

double unit_ball_volume(int k) {
    if (k < 1) throw std::domain_error("unit_ball_volume: k must be >= 1");
    return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double tangential_radial_gradient_sq(const Vec& x, const Mat& J) {
    const double r = x.norm();
    if (r < 1e-300) throw std::domain_error("tangential_radial_gradient_sq: x = 0");
    const Vec xhat = x / r;
    const Vec b = J.transpose() * xhat;
    const Vec y = (J.transpose() * J).ldlt().solve(b);
    return b.dot(y);
}

VolumeReport euclidean_volume(const Submanifold& sigma, double truncation_radius,
                              const MeasureOptions& opts) {
    if (!(truncation_radius > 0.0 && truncation_radius <= 1.0))
        throw std::domain_error("euclidean_volume: truncation_radius must lie in (0, 1]");
    double r2 = truncation_radius;
    if (r2 >= 1.0) r2 = 1.0 - 1e-6;
    const double delta2 = 1.0 - r2;
    const double r1 = 1.0 - 10.0 * delta2;

    const QuadOptions qo = to_quad(opts);
    const int k = sigma.k;
    const Vec origin = Vec::Zero(sigma.n);

    const QuadResult va2 = clipped_sum(sigma.interior_charts, r2, euclidean_integrand, qo);
    const QuadResult va1 = clipped_sum(sigma.interior_charts, r1, euclidean_integrand, qo);
    const QuadResult vb2 = clipped_sum(
        sigma.interior_charts, r2,
        [&](const Vec& x, const Mat& j) {
            return hyperbolic_route_integrand(x, j, k, origin);
        },
        qo);

    const double gap = std::abs(va2.value - vb2.value);
    if (gap > std::max(opts.cross_check_tol * std::max(1.0, std::abs(va2.value)),
                       10.0 * (va2.error + vb2.error)))
        throw numeric_error("euclidean_volume: Euclidean and hyperbolic routes disagree");

    // Linear Richardson in (1 - r): the collar area grows like the ideal
    // boundary volume times (1 - r).
    const double slope = (va2.value - va1.value) / (r2 - r1);
    const double tail = slope * delta2;

    VolumeReport rep;
    rep.truncation_radius = r2;
    rep.tail_estimate = std::max(0.0, tail);
    rep.vol_euclidean = va2.value + rep.tail_estimate;
    rep.quadrature_error = va2.error + va1.error + gap;
    rep.vol_ideal_boundary =
        sigma.ideal_charts.empty() ? 0.0 : ideal_boundary_volume(sigma, opts);
    if (rep.tail_estimate > 0.01 * rep.vol_euclidean)
        throw numeric_error("euclidean_volume: tail estimate exceeds 1% of the total");
    return rep;
}

double ideal_boundary_volume(const Submanifold& sigma, const MeasureOptions& opts) {
    if (sigma.ideal_charts.empty())
        throw std::domain_error("ideal_boundary_volume: no ideal charts");
    const QuadOptions qo = to_quad(opts);
    double total = 0.0;
    for (const Chart& c : sigma.ideal_charts)
        total += integrate_chart(c, euclidean_integrand, qo).value;
    return total;
}

double truncated_volume(const Submanifold& sigma, double r, const MeasureOptions& opts) {
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("truncated_volume: r must lie in (0, 1)");
    return clipped_sum(sigma.interior_charts, r, euclidean_integrand, to_quad(opts)).value;
}

MonotonicityCurve monotonicity_curve(const Submanifold& sigma, int grid_size,
                                     const MeasureOptions& opts) {
    if (grid_size < 10)
        throw std::domain_error("monotonicity_curve: grid_size must be >= 10");
    const double a = 1e-3, b = 1.0 - 1e-6;
    MonotonicityCurve curve;
    for (int i = 0; i < grid_size; ++i) {
        const double s = 0.5 * (1.0 - std::cos(kPi * i / (grid_size - 1)));
        const double r = a + (b - a) * s;
        curve.radii.push_back(r);
        curve.ratios.push_back(truncated_volume(sigma, r, opts) / std::pow(r, sigma.k));
    }
    return curve;
}

DensityEstimate density(const Submanifold& sigma, const Vec& p,
                        const MeasureOptions& opts) {
    if (p.size() != sigma.n)
        throw std::domain_error("density: point has wrong dimension");
    double dist = std::numeric_limits<double>::infinity();
    for (const Chart& c : sigma.interior_charts)
        dist = std::min(dist, nearest_param(c, p).second);
    if (dist > 1e-8)
        throw std::domain_error("density: point does not lie on the submanifold");

    const MobiusMap recenter = mobius_translate(Vec(-p));
    std::vector<Chart> charts;
    for (const Chart& c : sigma.interior_charts)
        charts.push_back(transform_chart(c, recenter));

    const double wk = unit_ball_volume(sigma.k);
    DensityEstimate est;
    est.point = p;
    est.radii_used = {1e-2, 5e-3, 2.5e-3};

    Eigen::MatrixXd a(3, 2);
    Eigen::VectorXd y(3);
    for (int i = 0; i < 3; ++i) {
        const double r = est.radii_used[i];
        QuadOptions qo = to_quad(opts);
        qo.abs_tol = 1e-12 * wk * std::pow(r, sigma.k);
        const QuadResult q = clipped_sum(charts, r, euclidean_integrand, qo);
        y(i) = q.value / (wk * std::pow(r, sigma.k));
        a(i, 0) = 1.0;
        a(i, 1) = r * r;
    }
    const Eigen::Vector2d fit = a.colPivHouseholderQr().solve(y);
    est.value = fit(0);
    est.extrapolation_error = (a * fit - y).cwiseAbs().maxCoeff() + 1e-12;
    return est;
}

double conversion_identity_max_residual(const Submanifold& sigma, int cells_per_axis) {
    const int k = sigma.k;
    const Vec origin = Vec::Zero(sigma.n);
    QuadOptions qo;
    qo.max_depth = 0; // single fixed rule per cell: a cell-wise comparison
    double worst = 0.0;
    for (const Chart& c : sigma.interior_charts) {
        std::vector<int> idx(c.pdim(), 0);
        while (true) {
            Chart cell = c;
            for (int i = 0; i < c.pdim(); ++i) {
                const double h = (c.hi(i) - c.lo(i)) / cells_per_axis;
                cell.lo(i) = c.lo(i) + idx[i] * h;
                cell.hi(i) = cell.lo(i) + h;
            }
            const double ia = integrate_chart(cell, euclidean_integrand, qo).value;
            const double ib =
                integrate_chart(cell,
                                [&](const Vec& x, const Mat& j) {
                                    return hyperbolic_route_integrand(x, j, k, origin);
                                },
                                qo)
                    .value;
            worst = std::max(worst, std::abs(ia - ib) / std::max(1e-300, std::abs(ia)));
            int i = 0;
            for (; i < c.pdim(); ++i) {
                if (++idx[i] < cells_per_axis) break;
                idx[i] = 0;
            }
            if (i == c.pdim()) break;
        }
    }
    return worst;
}

namespace {

// Points of the level set {|x(u)| = r} inside a chart, found by scanning
// lines along the steepest parameter of |x|^2.
struct LevelPoint {
    Vec u;
    int root_axis;
};

std::vector<LevelPoint> level_points(const Chart& c, double r, int lines) {
    std::vector<LevelPoint> pts;
    const int d = c.pdim();
    if (d == 0) return pts;
    // Pick the root axis from the strongest variation of |x|^2 at the center.
    const Vec uc = c.center();
    const Mat jc = c.jacobian(uc);
    const Vec gc = 2.0 * (jc.transpose() * c.map(uc));
    int root_axis = 0;
    Vec score(d);
    for (int axis = 0; axis < d; ++axis)
        score(axis) = std::abs(gc(axis)) * (c.hi(axis) - c.lo(axis));
    score.maxCoeff(&root_axis);

    std::vector<int> other;
    for (int i = 0; i < d; ++i)
        if (i != root_axis) other.push_back(i);
    std::vector<int> idx(other.size(), 0);
    while (true) {
        Vec base = Vec::Zero(d);
        for (size_t i = 0; i < other.size(); ++i) {
            const int ax = other[i];
            base(ax) = c.lo(ax) + (c.hi(ax) - c.lo(ax)) * (idx[i] + 0.5) / lines;
        }
        auto radial = [&](double v) {
            Vec w = base;
            w(root_axis) = v;
            return c.map(w).squaredNorm() - r * r;
        };
        constexpr int kScan = 32;
        double prev_v = c.lo(root_axis);
        double prev_f = radial(prev_v);
        for (int sIdx = 1; sIdx <= kScan; ++sIdx) {
            const double v =
                c.lo(root_axis) + (c.hi(root_axis) - c.lo(root_axis)) * sIdx / kScan;
            const double f = radial(v);
            if ((prev_f < 0.0) != (f < 0.0)) {
                Vec w = base;
                w(root_axis) = brent_root(radial, prev_v, v);
                pts.push_back({w, root_axis});
            }
            prev_v = v;
            prev_f = f;
        }
        if (other.empty()) break;
        size_t i = 0;
        for (; i < other.size(); ++i) {
            if (++idx[i] < lines) break;
            idx[i] = 0;
        }
        if (i == other.size()) break;
    }
    return pts;
}

} // namespace

double boundary_form_identity_max_residual(const Submanifold& sigma, double r) {
    const int k = sigma.k;
    const Vec origin = Vec::Zero(sigma.n);
    double worst = 0.0;
    bool any = false;
    for (const Chart& c : sigma.interior_charts) {
        for (const LevelPoint& lp : level_points(c, r, 6)) {
            const Vec x = c.map(lp.u);
            const Mat j = c.jacobian(lp.u);
            // Tangent directions of the level set in parameter space:
            // null space of the gradient of |x|^2.
            const Eigen::RowVectorXd g = 2.0 * (j.transpose() * x).transpose();
            Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullV);
            const Mat tang_params = svd.matrixV().rightCols(k - 1);
            const Mat t = j * tang_params; // n x (k-1) embedded tangents
            const double side_r = gram_sqrt(t);
            const double side_h = gram_sqrt(Mat(conformal_factor_at(x) * t));
            const double rho = hyperbolic_distance(origin, x);
            const double factor = std::pow(std::sinh(rho) / x.norm(), k - 1);
            const double lhs = side_h;
            const double rhs = factor * side_r;
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, rhs));
            any = true;
        }
    }
    if (!any)
        throw std::domain_error("boundary_form_identity: clip sphere misses the charts");
    return worst;
}

namespace {

// int over {|x| = r} within one chart of f(x, J) d sigma_H, for 2-charts.
double level_curve_integral_h(const Chart& c, double r,
                              const std::function<double(const Vec&, const Mat&)>& f) {
    if (c.pdim() != 2)
        throw std::domain_error("level_curve_integral: chart must have 2 parameters");
    // Root axis as in level_points.
    Vec u0 = c.center();
    const Mat j0 = c.jacobian(u0);
    const Vec g0 = 2.0 * (j0.transpose() * c.map(u0));
    int root_axis = 0;
    Vec score(2);
    for (int axis = 0; axis < 2; ++axis)
        score(axis) = std::abs(g0(axis)) * (c.hi(axis) - c.lo(axis));
    score.maxCoeff(&root_axis);
    const int scan_axis = 1 - root_axis;

    auto line_value = [&](double v) {
        auto radial = [&](double w) {
            Vec u(2);
            u(scan_axis) = v;
            u(root_axis) = w;
            return c.map(u).squaredNorm() - r * r;
        };
        constexpr int kScan = 48;
        double total = 0.0;
        double prev_w = c.lo(root_axis);
        double prev_f = radial(prev_w);
        for (int sIdx = 1; sIdx <= kScan; ++sIdx) {
            const double w =
                c.lo(root_axis) + (c.hi(root_axis) - c.lo(root_axis)) * sIdx / kScan;
            const double fw = radial(w);
            if ((prev_f < 0.0) != (fw < 0.0)) {
                const double wr = brent_root(radial, prev_w, w);
                Vec u(2);
                u(scan_axis) = v;
                u(root_axis) = wr;
                const Vec x = c.map(u);
                const Mat j = c.jacobian(u);
                const Vec grad = 2.0 * (j.transpose() * x);
                const double slope = -grad(scan_axis) / grad(root_axis);
                const Vec tangent = j.col(scan_axis) + slope * j.col(root_axis);
                const double dsh = conformal_factor_at(x) * tangent.norm();
                total += f(x, j) * dsh;
            }
            prev_w = w;
            prev_f = fw;
        }
        return total;
    };
    return integrate_1d(line_value, c.lo(scan_axis), c.hi(scan_axis), 1e-10, 1e-12).value;
}

} // namespace

double coarea_identity_residual(const Submanifold& sigma, double rho0,
                                const MeasureOptions& opts) {
    if (sigma.k != 2)
        throw std::domain_error("coarea_identity_residual: surfaces (k = 2) only");
    const int k = sigma.k;
    const Vec origin = Vec::Zero(sigma.n);
    auto weight = [&](const Vec& x) {
        const double rho = hyperbolic_distance(origin, x);
        return std::pow(1.0 + std::cosh(rho), -k);
    };
    auto bulk = [&](double rho) {
        const double r = rho_to_radius(rho);
        QuadOptions qo = to_quad(opts);
        double total = 0.0;
        for (const Chart& c : sigma.interior_charts) {
            total += integrate_chart_clipped(
                         c, r,
                         [&](const Vec& x, const Mat& j) {
                             const double w = weight(x);
                             const double grad2 = tangential_radial_gradient_sq(x, j);
                             return grad2 * w * gram_sqrt(Mat(conformal_factor_at(x) * j));
                         },
                         qo)
                         .value;
        }
        return total;
    };
    // Fourth-order central difference in rho.
    const double h = 1e-2;
    const double dbulk = (bulk(rho0 - 2 * h) - 8.0 * bulk(rho0 - h) +
                          8.0 * bulk(rho0 + h) - bulk(rho0 + 2 * h)) /
                         (12.0 * h);
    const double r0 = rho_to_radius(rho0);
    double boundary = 0.0;
    for (const Chart& c : sigma.interior_charts) {
        boundary += level_curve_integral_h(c, r0, [&](const Vec& x, const Mat& j) {
            return std::sqrt(std::max(0.0, tangential_radial_gradient_sq(x, j))) *
                   weight(x);
        });
    }
    return std::abs(dbulk - boundary) / std::max(1.0, std::abs(boundary));
}

} // namespace hypiso
