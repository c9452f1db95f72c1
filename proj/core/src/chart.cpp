#include "hypiso/chart.hpp"

#include <cmath>

namespace hypiso {

double Chart::box_measure() const {
    double m = 1.0;
    for (int i = 0; i < pdim(); ++i) m *= hi(i) - lo(i);
    return m;
}

ChartJacobian finite_difference_jacobian(ChartMap map, int pdim, double h) {
    return [map = std::move(map), pdim, h](const Vec& u) {
        Mat j;
        for (int i = 0; i < pdim; ++i) {
            Vec up = u, um = u;
            up(i) += h;
            um(i) -= h;
            Vec d = (map(up) - map(um)) / (2.0 * h);
            if (j.size() == 0) j.resize(d.size(), pdim);
            j.col(i) = d;
        }
        return j;
    };
}

namespace {

// Iterate over the tensor grid with m points per axis, cell-centered.
template <typename F>
void for_grid(const Chart& c, int m, F&& f) {
    const int d = c.pdim();
    if (d == 0) {
        f(Vec(0));
        return;
    }
    std::vector<int> idx(d, 0);
    Vec u(d);
    while (true) {
        for (int i = 0; i < d; ++i)
            u(i) = c.lo(i) + (c.hi(i) - c.lo(i)) * (idx[i] + 0.5) / m;
        f(u);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < m) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
}

double gram_det(const Mat& j) {
    if (j.cols() == 0) return 1.0;
    return (j.transpose() * j).determinant();
}

// Gauss-Newton descent of |x(u) - target|^2 projected into the box.
Vec polish_nearest(const Chart& c, Vec u, const Vec& target) {
    const int d = c.pdim();
    for (int it = 0; it < 60; ++it) {
        const Vec x = c.map(u);
        const Vec r = x - target;
        if (r.norm() < 1e-14) break;
        const Mat j = c.jacobian(u);
        Mat jtj = j.transpose() * j;
        jtj.diagonal().array() += 1e-14;
        Vec step = jtj.ldlt().solve(j.transpose() * r);
        double t = 1.0;
        double best = r.squaredNorm();
        Vec unew = u;
        for (int ls = 0; ls < 20; ++ls) {
            Vec cand = u - t * step;
            for (int i = 0; i < d; ++i)
                cand(i) = std::clamp(cand(i), c.lo(i), c.hi(i));
            const double v = (c.map(cand) - target).squaredNorm();
            if (v < best) {
                best = v;
                unew = cand;
                break;
            }
            t *= 0.5;
        }
        if ((unew - u).norm() < 1e-15) break;
        u = unew;
    }
    return u;
}

} // namespace

std::pair<Vec, double> nearest_param(const Chart& chart, const Vec& target) {
    Vec best_u = chart.center();
    double best = (chart.map(best_u) - target).norm();
    for_grid(chart, 7, [&](const Vec& u) {
        const double d = (chart.map(u) - target).norm();
        if (d < best) {
            best = d;
            best_u = u;
        }
    });
    best_u = polish_nearest(chart, best_u, target);
    return {best_u, (chart.map(best_u) - target).norm()};
}

std::pair<double, double> radial_range(const Chart& chart) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for_grid(chart, 9, [&](const Vec& u) {
        const double r = chart.map(u).norm();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    });
    for (const Vec& u : radial_extremum_params(chart)) {
        const double r = chart.map(u).norm();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

std::vector<Vec> radial_extremum_params(const Chart& chart) {
    std::vector<Vec> out;
    const int d = chart.pdim();
    if (d == 0) return out;
    const Vec origin = Vec::Zero(chart.map(chart.center()).size());
    // Minima of |x| from a handful of seeds.
    std::vector<Vec> seeds;
    for_grid(chart, 3, [&](const Vec& u) { seeds.push_back(u); });
    Vec best_u = seeds.front();
    double best = chart.map(best_u).norm();
    for (const Vec& s : seeds) {
        const double r = chart.map(s).norm();
        if (r < best) {
            best = r;
            best_u = s;
        }
    }
    out.push_back(polish_nearest(chart, best_u, origin));
    return out;
}

Chart transform_chart(const Chart& chart, const MobiusMap& g) {
    Chart out;
    out.lo = chart.lo;
    out.hi = chart.hi;
    out.map = [map = chart.map, g](const Vec& u) { return apply(g, map(u)); };
    out.jacobian = [map = chart.map, jac = chart.jacobian, g](const Vec& u) {
        const Vec x = map(u);
        return Mat(differential(g, x) * jac(u));
    };
    return out;
}

void validate_submanifold(const Submanifold& sigma) {
    if (sigma.k < 1 || sigma.k > sigma.n)
        throw std::domain_error("submanifold: need 1 <= k <= n");
    if (sigma.interior_charts.empty())
        throw std::domain_error("submanifold: no interior charts");
    double min_r = 1.0;
    for (const Chart& c : sigma.interior_charts) {
        if (c.pdim() != sigma.k)
            throw std::domain_error("submanifold: interior chart has wrong parameter dimension");
        for_grid(c, 10, [&](const Vec& u) {
            const Vec x = c.map(u);
            if (static_cast<int>(x.size()) != sigma.n)
                throw std::domain_error("submanifold: chart maps into wrong ambient dimension");
            if (!(x.norm() < 1.0))
                throw std::domain_error("submanifold: interior chart leaves the open ball");
            if (!(gram_det(c.jacobian(u)) > 0.0))
                throw std::domain_error("submanifold: nonpositive Gram determinant on probe grid");
            min_r = std::min(min_r, x.norm());
        });
        // The probe grid is cell-centered; also look at box corners and
        // edge midpoints through the nearest-point search for the origin.
        min_r = std::min(min_r, nearest_param(c, Vec::Zero(sigma.n)).second);
    }
    for (const Chart& c : sigma.ideal_charts) {
        if (c.pdim() != sigma.k - 1)
            throw std::domain_error("submanifold: ideal chart has wrong parameter dimension");
        for_grid(c, 10, [&](const Vec& u) {
            const Vec x = c.map(u);
            if (std::abs(x.norm() - 1.0) > 1e-10)
                throw std::domain_error("submanifold: ideal chart off the unit sphere");
        });
    }
    if (sigma.contains_origin && min_r > 1e-8)
        throw std::domain_error("submanifold: contains_origin set but no chart point near 0");
}

} // namespace hypiso
