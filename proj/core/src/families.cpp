#include "hypiso/families.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "hypiso/measure.hpp"
#include "hypiso/ode.hpp"
#include "hypiso/quadrature.hpp"
#include "hypiso/rng.hpp"

namespace hypiso {

namespace {

constexpr double kPi = std::numbers::pi;

// Hyperspherical parametrization of S^{k-1} in R^k with k-1 angles;
// the last angle runs over [0, 2pi], the others over [0, pi].
Vec sphere_omega(int k, const Vec& ang) {
    Vec w(k);
    double prod = 1.0;
    for (int i = 0; i + 1 < k; ++i) {
        w(i) = prod * std::cos(ang(i));
        prod *= std::sin(ang(i));
    }
    w(k - 1) = prod;
    return w;
}

Mat sphere_domega(int k, const Vec& ang) {
    const int m = k - 1;
    Mat d = Mat::Zero(k, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i) {
            if (i < m && j > i) continue;
            double v = 1.0;
            const int upto = (i < m) ? i : m;
            for (int l = 0; l < upto; ++l)
                v *= (l == j) ? std::cos(ang(l)) : std::sin(ang(l));
            if (i < m) v *= (j == i) ? -std::sin(ang(i)) : std::cos(ang(i));
            d(i, j) = v;
        }
    }
    return d;
}

void sphere_box(int k, Vec& lo, Vec& hi) {
    const int m = k - 1;
    lo = Vec::Zero(m);
    hi = Vec::Zero(m);
    for (int j = 0; j < m; ++j) hi(j) = (j == m - 1) ? 2.0 * kPi : kPi;
}

// Orthonormal columns spanning the complement of axis, from the
// Householder factorization of the axis itself (deterministic).
Mat complement_frame(const Vec& axis) {
    const int n = static_cast<int>(axis.size());
    Mat a = axis;
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    return q.rightCols(n - 1);
}

Chart point_chart(const Vec& x) {
    Chart c;
    c.lo = Vec(0);
    c.hi = Vec(0);
    const int n = static_cast<int>(x.size());
    c.map = [x](const Vec&) { return x; };
    c.jacobian = [n](const Vec&) { return Mat(n, 0); };
    return c;
}

Chart sphere_chart(const Mat& frame) {
    const int k = static_cast<int>(frame.cols());
    Chart c;
    sphere_box(k, c.lo, c.hi);
    c.map = [frame, k](const Vec& ang) { return Vec(frame * sphere_omega(k, ang)); };
    c.jacobian = [frame, k](const Vec& ang) { return Mat(frame * sphere_domega(k, ang)); };
    return c;
}

} // namespace

Submanifold flat_disk(int k, int n, const Mat& frame) {
    if (k < 1 || k > n)
        throw std::domain_error("flat_disk: need 1 <= k <= n");
    if (frame.rows() != n || frame.cols() != k ||
        (frame.transpose() * frame - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::domain_error("flat_disk: frame must have k orthonormal columns");

    Submanifold s;
    s.k = k;
    s.n = n;
    s.contains_origin = true;
    s.totally_geodesic = true;

    if (k == 1) {
        Chart c;
        c.lo = Vec::Constant(1, -1.0);
        c.hi = Vec::Constant(1, 1.0);
        const Vec v = frame.col(0);
        c.map = [v](const Vec& u) { return Vec(u(0) * v); };
        c.jacobian = [v](const Vec&) { return Mat(v); };
        s.interior_charts.push_back(std::move(c));
        s.ideal_charts.push_back(point_chart(v));
        s.ideal_charts.push_back(point_chart(-v));
    } else {
        Chart c;
        Vec alo, ahi;
        sphere_box(k, alo, ahi);
        c.lo = Vec(k);
        c.hi = Vec(k);
        c.lo(0) = 0.0;
        c.hi(0) = 1.0;
        c.lo.tail(k - 1) = alo;
        c.hi.tail(k - 1) = ahi;
        c.map = [frame, k](const Vec& u) {
            return Vec(u(0) * (frame * sphere_omega(k, u.tail(k - 1))));
        };
        c.jacobian = [frame, k, n](const Vec& u) {
            Mat j(n, k);
            j.col(0) = frame * sphere_omega(k, u.tail(k - 1));
            j.rightCols(k - 1) = u(0) * (frame * sphere_domega(k, u.tail(k - 1)));
            return j;
        };
        s.interior_charts.push_back(std::move(c));
        s.ideal_charts.push_back(sphere_chart(frame));
    }
    validate_submanifold(s);
    return s;
}

Submanifold flat_disk(int k, int n) {
    Mat frame = Mat::Identity(n, n).leftCols(k);
    return flat_disk(k, n, frame);
}

Submanifold geodesic_cap(int k, int n, double theta, const Vec& axis) {
    if (k < 2 || k > n)
        throw std::domain_error("geodesic_cap: need 2 <= k <= n");
    if (!(theta > 0.0 && theta <= kPi / 2))
        throw std::domain_error("geodesic_cap: theta must lie in (0, pi/2]");
    if (axis.size() != n || std::abs(axis.norm() - 1.0) > 1e-8)
        throw std::domain_error("geodesic_cap: axis must be a unit n-vector");
    const Vec u_axis = axis / axis.norm();
    const Mat frame = complement_frame(u_axis).leftCols(k);

    // sec(theta) blows up at the flat limit; a separate disk chart avoids
    // the cancellation entirely.
    if (std::abs(theta - kPi / 2) < 1e-12) return flat_disk(k, n, frame);

    const double sec = 1.0 / std::cos(theta);
    const double tn = std::tan(theta);

    Submanifold s;
    s.k = k;
    s.n = n;
    s.totally_geodesic = true;

    Chart c;
    Vec alo, ahi;
    sphere_box(k, alo, ahi);
    c.lo = Vec(k);
    c.hi = Vec(k);
    c.lo(0) = 0.0;
    c.hi(0) = kPi / 2 - theta;
    c.lo.tail(k - 1) = alo;
    c.hi.tail(k - 1) = ahi;
    c.map = [u_axis, frame, k, sec, tn](const Vec& u) {
        const double alpha = u(0);
        const Vec nu = frame * sphere_omega(k, u.tail(k - 1));
        return Vec((sec - tn * std::cos(alpha)) * u_axis + tn * std::sin(alpha) * nu);
    };
    c.jacobian = [u_axis, frame, k, n, tn](const Vec& u) {
        const double alpha = u(0);
        const Vec nu = frame * sphere_omega(k, u.tail(k - 1));
        Mat j(n, k);
        j.col(0) = tn * (std::sin(alpha) * u_axis + std::cos(alpha) * nu);
        j.rightCols(k - 1) =
            (tn * std::sin(alpha)) * (frame * sphere_domega(k, u.tail(k - 1)));
        return j;
    };
    s.interior_charts.push_back(std::move(c));

    Chart b;
    b.lo = alo;
    b.hi = ahi;
    const double ct = std::cos(theta), st = std::sin(theta);
    b.map = [u_axis, frame, k, ct, st](const Vec& ang) {
        return Vec(ct * u_axis + st * (frame * sphere_omega(k, ang)));
    };
    b.jacobian = [frame, k, st](const Vec& ang) {
        return Mat(st * (frame * sphere_domega(k, ang)));
    };
    s.ideal_charts.push_back(std::move(b));

    validate_submanifold(s);
    return s;
}

double cap_ideal_volume_closed_form(int k, double theta) {
    if (k < 1 || !(theta > 0.0 && theta <= kPi / 2))
        throw std::domain_error("cap_ideal_volume_closed_form: bad arguments");
    return k * unit_ball_volume(k) * std::pow(std::sin(theta), k - 1);
}

double cap_volume_closed_form(int k, double theta) {
    if (k < 1 || !(theta > 0.0 && theta <= kPi / 2))
        throw std::domain_error("cap_volume_closed_form: bad arguments");
    if (std::abs(theta - kPi / 2) < 1e-12) return unit_ball_volume(k);
    if (k == 2) {
        const double st = std::sin(theta);
        return 2.0 * kPi * st * st / (1.0 + st);
    }
    const QuadResult q = integrate_1d(
        [k](double phi) { return std::pow(std::sin(phi), k - 1); }, 0.0,
        kPi / 2 - theta, 1e-13, 1e-15);
    return k * unit_ball_volume(k) * std::pow(std::tan(theta), k) * q.value;
}

Submanifold mobius_image(const Submanifold& sigma, const MobiusMap& g) {
    Submanifold out;
    out.k = sigma.k;
    out.n = sigma.n;
    out.totally_geodesic = sigma.totally_geodesic;
    for (const Chart& c : sigma.interior_charts)
        out.interior_charts.push_back(transform_chart(c, g));
    for (const Chart& c : sigma.ideal_charts)
        out.ideal_charts.push_back(transform_chart(c, g));
    for (const Vec& p : sigma.candidate_density_points)
        out.candidate_density_points.push_back(apply(g, p));

    double min_r = 1.0;
    for (const Chart& c : out.interior_charts)
        min_r = std::min(min_r, nearest_param(c, Vec::Zero(out.n)).second);
    out.contains_origin = min_r < 1e-8;

    validate_submanifold(out);
    return out;
}

namespace {

// Damped Gauss-Newton for x_a(p) = x_b(q); returns the meeting point on
// success.
std::optional<Vec> chart_intersection(const Chart& ca, const Chart& cb, Vec p, Vec q) {
    const int da = ca.pdim(), db = cb.pdim();
    double lambda = 1e-8;
    Vec r = ca.map(p) - cb.map(q);
    for (int it = 0; it < 80 && r.norm() > 1e-13; ++it) {
        Mat j(r.size(), da + db);
        j.leftCols(da) = ca.jacobian(p);
        j.rightCols(db) = -cb.jacobian(q);
        Mat h = j.transpose() * j;
        h.diagonal().array() += lambda;
        const Vec step = h.ldlt().solve(j.transpose() * r);
        Vec pn = p - step.head(da);
        Vec qn = q - step.tail(db);
        for (int i = 0; i < da; ++i) pn(i) = std::clamp(pn(i), ca.lo(i), ca.hi(i));
        for (int i = 0; i < db; ++i) qn(i) = std::clamp(qn(i), cb.lo(i), cb.hi(i));
        const Vec rn = ca.map(pn) - cb.map(qn);
        if (rn.norm() < r.norm()) {
            p = pn;
            q = qn;
            r = rn;
            lambda = std::max(lambda / 3.0, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e8) break;
        }
    }
    if (r.norm() > 1e-10) return std::nullopt;
    // Transverse meeting: joint tangents must span more than k directions.
    Mat t(r.size(), da + db);
    t.leftCols(da) = ca.jacobian(p);
    t.rightCols(db) = cb.jacobian(q);
    Eigen::JacobiSVD<Mat> svd(t);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
    if (rank <= da) return std::nullopt;
    return Vec(0.5 * (ca.map(p) + cb.map(q)));
}

} // namespace

Submanifold union_of(const std::vector<Submanifold>& parts, unsigned seed) {
    if (parts.empty()) throw std::domain_error("union_of: empty part list");
    Submanifold s;
    s.k = parts.front().k;
    s.n = parts.front().n;
    s.totally_geodesic = parts.size() == 1 && parts.front().totally_geodesic;
    for (const Submanifold& p : parts) {
        if (p.k != s.k || p.n != s.n)
            throw std::domain_error("union_of: mismatched (k, n) among parts");
        s.contains_origin = s.contains_origin || p.contains_origin;
        s.interior_charts.insert(s.interior_charts.end(), p.interior_charts.begin(),
                                 p.interior_charts.end());
        s.ideal_charts.insert(s.ideal_charts.end(), p.ideal_charts.begin(),
                              p.ideal_charts.end());
        s.candidate_density_points.insert(s.candidate_density_points.end(),
                                          p.candidate_density_points.begin(),
                                          p.candidate_density_points.end());
    }

    auto push_candidate = [&s](const Vec& x) {
        for (const Vec& y : s.candidate_density_points)
            if ((x - y).norm() < 1e-6) return;
        s.candidate_density_points.push_back(x);
    };

    int shared_origin = 0;
    for (const Submanifold& p : parts)
        if (p.contains_origin) ++shared_origin;
    if (shared_origin >= 2) push_candidate(Vec::Zero(s.n));

    Rng rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (size_t a = 0; a < parts.size(); ++a) {
        for (size_t b = a + 1; b < parts.size(); ++b) {
            for (const Chart& ca : parts[a].interior_charts) {
                for (const Chart& cb : parts[b].interior_charts) {
                    for (int trial = 0; trial < 50; ++trial) {
                        Vec p(ca.pdim()), q(cb.pdim());
                        for (int i = 0; i < ca.pdim(); ++i)
                            p(i) = ca.lo(i) + uni(rng) * (ca.hi(i) - ca.lo(i));
                        for (int i = 0; i < cb.pdim(); ++i)
                            q(i) = cb.lo(i) + uni(rng) * (cb.hi(i) - cb.lo(i));
                        if (auto hit = chart_intersection(ca, cb, p, q))
                            push_candidate(*hit);
                    }
                }
            }
        }
    }
    validate_submanifold(s);
    return s;
}

namespace {

double beltrami_integral(double sigma, double dsigma) {
    const double ch = std::cosh(sigma);
    return std::sinh(sigma) * ch * ch / std::hypot(ch, dsigma);
}

// dt/dw for the neck-regular profile parameter w = sqrt(sigma - sigma0);
// derived from the Beltrami integral, with (P^2 - c^2)/w^2 expanded as
// cosh(sigma + sigma0) (P + c) sinh(w^2)/w^2 to dodge the cancellation
// at the neck.
double catenoid_dt_dw(double neck, double c, double w) {
    const double aw = std::abs(w);
    const double sigma = neck + aw * aw;
    const double p = std::sinh(sigma) * std::cosh(sigma);
    const double w2 = aw * aw;
    const double sfac = (w2 < 1e-8) ? 1.0 + w2 * w2 / 6.0 : std::sinh(w2) / w2;
    const double g = std::cosh(sigma + neck) * (p + c) * sfac;
    return 2.0 * c / (std::cosh(sigma) * std::sqrt(g));
}

} // namespace

std::pair<Submanifold, CatenoidProfile> catenoid_with_profile(double neck,
                                                              const CatenoidOptions& opts) {
    if (!(neck > 0.0)) throw std::domain_error("catenoid: neck must be positive");
    const double c = std::sinh(neck) * std::cosh(neck);
    const double r_stop = 1.0 - opts.eps_boundary;
    const double cosh_rho_stop = (1.0 + r_stop * r_stop) / ((1.0 - r_stop) * (1.0 + r_stop));

    // Euler-Lagrange shooting in t from (sigma0, 0); the Beltrami
    // integral drift is the integration-quality monitor.
    OdeRhs el = [](double, const Vec& y) {
        const double sh = std::sinh(y(0)), ch = std::cosh(y(0));
        const double v = y(1);
        Vec dy(2);
        dy(0) = v;
        dy(1) = ch * (ch * ch + sh * sh) / sh +
                ch * (ch * ch + 2.0 * sh * sh) / (sh * ch * ch) * v * v;
        return dy;
    };
    OdeOptions oo;
    oo.rel_tol = opts.rel_tol;
    oo.abs_tol = 1e-12;
    oo.max_steps = opts.max_steps;
    Vec y0(2);
    y0 << neck, 0.0;
    const OdeSolution shot = integrate_ode(
        el, 0.0, y0, 100.0,
        [&](double t, const Vec& y) {
            return std::cosh(t) * std::cosh(y(0)) >= cosh_rho_stop;
        },
        oo);
    if (!shot.stopped_by_event)
        throw numeric_error("catenoid: shooting did not reach the boundary collar");

    CatenoidProfile profile;
    profile.neck = neck;
    for (const OdeNode& nd : shot.nodes) {
        profile.samples.emplace_back(nd.t, nd.y(0));
        profile.residual = std::max(
            profile.residual, std::abs(beltrami_integral(nd.y(0), nd.y(1)) - c) / c);
    }

    // Profile in the even parameter w (sigma = sigma0 + w^2); pure
    // quadrature t' = F(w), integrated with the same stepper.
    OdeOptions wo;
    wo.rel_tol = 1e-12;
    wo.abs_tol = 1e-14;
    auto tw_rhs = [neck, c](double w, const Vec&) {
        return Vec(Vec::Constant(1, catenoid_dt_dw(neck, c, w)));
    };
    auto tw_stop = [&](double w, const Vec& y) {
        return std::cosh(y(0)) * std::cosh(neck + w * w) >= cosh_rho_stop;
    };
    OdeSolution tw = integrate_ode(tw_rhs, 0.0, Vec::Zero(1), 30.0, tw_stop, wo);
    if (!tw.stopped_by_event)
        throw numeric_error("catenoid: profile reparametrization did not terminate");
    const double w_hi = tw.nodes.back().t;
    const double w_lo = tw.nodes[tw.nodes.size() - 2].t;
    auto collar_gap = [&](double w) {
        return std::cosh(tw.at(w)(0)) * std::cosh(neck + w * w) - cosh_rho_stop;
    };
    const double w_end =
        (collar_gap(w_lo) >= 0.0) ? w_lo : brent_root(collar_gap, w_lo, w_hi, 1e-15);
    const double t_end = tw.at(w_end)(0);

    // Asymptotic axis offset of the two ends; F decays like e^{-3 sigma},
    // so a short extension integral converges to machine precision.
    const double t_limit =
        t_end + integrate_1d([&](double w) { return catenoid_dt_dw(neck, c, w); },
                             w_end, w_end + 2.0, 1e-13, 1e-18)
                    .value;
    const double b_limit = std::tanh(0.5 * t_limit);

    auto tw_shared = std::make_shared<OdeSolution>(std::move(tw));
    auto t_of_w = [tw_shared, w_end](double w) {
        const double aw = std::min(std::abs(w), w_end);
        const double t = tw_shared->at(aw)(0);
        return w < 0.0 ? -t : t;
    };

    Submanifold s;
    s.k = 2;
    s.n = 3;

    Chart ch;
    ch.lo = Vec(2);
    ch.hi = Vec(2);
    ch.lo << -w_end, 0.0;
    ch.hi << w_end, 2.0 * kPi;
    ch.map = [t_of_w, neck](const Vec& u) {
        const double w = u(0), phi = u(1);
        const double sigma = neck + w * w;
        Vec a = Vec::Zero(3);
        a(2) = std::tanh(0.5 * t_of_w(w));
        Vec q(3);
        const double rq = std::tanh(0.5 * sigma);
        q << rq * std::cos(phi), rq * std::sin(phi), 0.0;
        return mobius_add(a, q);
    };
    ch.jacobian = [t_of_w, neck, c](const Vec& u) {
        const double w = u(0), phi = u(1);
        const double sigma = neck + w * w;
        const double b = std::tanh(0.5 * t_of_w(w));
        Vec a = Vec::Zero(3);
        a(2) = b;
        const double rq = std::tanh(0.5 * sigma);
        Vec q(3);
        q << rq * std::cos(phi), rq * std::sin(phi), 0.0;
        const double tp = catenoid_dt_dw(neck, c, w); // even in w
        const double bp = 0.5 * (1.0 - b * b) * tp;
        Vec qw(3);
        const double drq = 0.5 * (1.0 - rq * rq) * 2.0 * w;
        qw << drq * std::cos(phi), drq * std::sin(phi), 0.0;
        Vec qphi(3);
        qphi << -rq * std::sin(phi), rq * std::cos(phi), 0.0;
        Vec e3 = Vec::Zero(3);
        e3(2) = 1.0;
        const Mat da = mobius_add_da(a, q);
        const Mat dx = mobius_add_dx(a, q);
        Mat j(3, 2);
        j.col(0) = da * (bp * e3) + dx * qw;
        j.col(1) = dx * qphi;
        return j;
    };
    s.interior_charts.push_back(std::move(ch));

    for (const double sgn : {+1.0, -1.0}) {
        Chart ic;
        ic.lo = Vec::Zero(1);
        ic.hi = Vec::Constant(1, 2.0 * kPi);
        Vec a = Vec::Zero(3);
        a(2) = sgn * b_limit;
        ic.map = [a](const Vec& u) {
            Vec e(3);
            e << std::cos(u(0)), std::sin(u(0)), 0.0;
            return mobius_add(a, e);
        };
        ic.jacobian = [a](const Vec& u) {
            Vec e(3);
            e << std::cos(u(0)), std::sin(u(0)), 0.0;
            Vec de(3);
            de << -std::sin(u(0)), std::cos(u(0)), 0.0;
            return Mat(mobius_add_dx(a, e) * de);
        };
        s.ideal_charts.push_back(std::move(ic));
    }

    validate_submanifold(s);
    return {std::move(s), std::move(profile)};
}

Submanifold catenoid(double neck, const CatenoidOptions& opts) {
    return catenoid_with_profile(neck, opts).first;
}

Submanifold euclidean_sphere_cap(int n, double center_dist, double radius) {
    if (n != 3)
        throw std::domain_error("euclidean_sphere_cap: implemented for n = 3");
    const double d = center_dist, r = radius;
    if (!(d > 0.0 && r > 0.0))
        throw std::domain_error("euclidean_sphere_cap: need positive center_dist and radius");
    const double m = (1.0 - d * d - r * r) / (2.0 * d * r);
    if (!(m > -1.0 && m < 1.0))
        throw std::domain_error("euclidean_sphere_cap: carrier misses the unit sphere");
    if (!(std::abs(d - r) < 1.0))
        throw std::domain_error("euclidean_sphere_cap: bottom pole outside the ball");

    Submanifold s;
    s.k = 2;
    s.n = 3;

    Chart c;
    c.lo = Vec(2);
    c.hi = Vec(2);
    c.lo << std::acos(m), 0.0;
    c.hi << kPi, 2.0 * kPi;
    c.map = [d, r](const Vec& u) {
        const double beta = u(0), phi = u(1);
        Vec x(3);
        x << r * std::sin(beta) * std::cos(phi), r * std::sin(beta) * std::sin(phi),
            d + r * std::cos(beta);
        return x;
    };
    c.jacobian = [r](const Vec& u) {
        const double beta = u(0), phi = u(1);
        Mat j(3, 2);
        j.col(0) << r * std::cos(beta) * std::cos(phi), r * std::cos(beta) * std::sin(phi),
            -r * std::sin(beta);
        j.col(1) << -r * std::sin(beta) * std::sin(phi), r * std::sin(beta) * std::cos(phi),
            0.0;
        return j;
    };
    s.interior_charts.push_back(std::move(c));

    const double z = (1.0 + d * d - r * r) / (2.0 * d);
    const double rc = std::sqrt(std::max(0.0, 1.0 - z * z));
    Chart b;
    b.lo = Vec::Zero(1);
    b.hi = Vec::Constant(1, 2.0 * kPi);
    b.map = [rc, z](const Vec& u) {
        Vec x(3);
        x << rc * std::cos(u(0)), rc * std::sin(u(0)), z;
        return x;
    };
    b.jacobian = [rc](const Vec& u) {
        Mat j(3, 1);
        j << -rc * std::sin(u(0)), rc * std::cos(u(0)), 0.0;
        return j;
    };
    s.ideal_charts.push_back(std::move(b));

    validate_submanifold(s);
    return s;
}

} // namespace hypiso
