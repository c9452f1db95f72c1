#include "hypiso/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace hypiso {

namespace {

// QUADPACK G7/K15 constants on [-1, 1], half arrays by symmetry.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
    std::array<double, 15> node;    // ascending on [-1, 1]
    std::array<double, 15> wk;      // Kronrod weights
    std::array<double, 15> wg;      // Gauss weights (0 off the G7 subset)
};

const Rule15& rule15() {
    static const Rule15 r = [] {
        Rule15 out{};
        for (int i = 0; i < 7; ++i) {
            out.node[i] = -kXgk[i];
            out.node[14 - i] = kXgk[i];
            out.wk[i] = out.wk[14 - i] = kWgk[i];
            out.wg[i] = out.wg[14 - i] = (i % 2 == 1) ? kWg[i / 2] : 0.0;
        }
        out.node[7] = 0.0;
        out.wk[7] = kWgk[7];
        out.wg[7] = kWg[3];
        return out;
    }();
    return r;
}

struct Cell {
    Vec lo;
    Vec hi;
    int depth = 0;
};

double cell_measure(const Cell& c) {
    double m = 1.0;
    for (int i = 0; i < c.lo.size(); ++i) m *= c.hi(i) - c.lo(i);
    return m;
}

int widest_axis(const Cell& c) {
    int best = 0;
    for (int i = 1; i < c.lo.size(); ++i)
        if (c.hi(i) - c.lo(i) > c.hi(best) - c.lo(best)) best = i;
    return best;
}

// Tensor iteration over 15^d Kronrod nodes; yields (u, wK, wG).
template <typename F>
void for_rule_nodes(const Cell& c, F&& f) {
    const Rule15& r = rule15();
    const int d = static_cast<int>(c.lo.size());
    if (d == 0) {
        f(Vec(0), 1.0, 1.0);
        return;
    }
    std::vector<int> idx(d, 0);
    Vec u(d);
    while (true) {
        double wk = 1.0, wg = 1.0;
        for (int i = 0; i < d; ++i) {
            const double half = 0.5 * (c.hi(i) - c.lo(i));
            const double mid = 0.5 * (c.hi(i) + c.lo(i));
            u(i) = mid + half * r.node[idx[i]];
            wk *= half * r.wk[idx[i]];
            wg *= half * r.wg[idx[i]];
        }
        f(u, wk, wg);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < 15) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
}

struct CellEstimate {
    double value_k = 0.0;
    double value_g = 0.0;
    long evals = 0;
};

CellEstimate gk_cell(const Chart& chart, const ChartIntegrand& f, const Cell& c) {
    CellEstimate e;
    for_rule_nodes(c, [&](const Vec& u, double wk, double wg) {
        const Vec x = chart.map(u);
        const double fx = f(x, chart.jacobian(u));
        e.value_k += wk * fx;
        e.value_g += wg * fx;
        ++e.evals;
    });
    return e;
}

class KahanSum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double get() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---- clipping machinery ------------------------------------------------

enum class CellClass { Inside, Outside, Straddle };

// Probe the cell with the {0, 1/2, 1}^d lattice plus supplied hot points.
CellClass classify_cell(const Chart& chart, const Cell& c, double r,
                        const std::vector<Vec>& hot, long& evals) {
    const int d = static_cast<int>(c.lo.size());
    bool any_in = false, any_out = false;
    auto look = [&](const Vec& u) {
        const double rr = chart.map(u).norm();
        ++evals;
        (rr < r ? any_in : any_out) = true;
    };
    std::vector<int> idx(d, 0);
    Vec u(d);
    while (true) {
        for (int i = 0; i < d; ++i)
            u(i) = c.lo(i) + 0.5 * idx[i] * (c.hi(i) - c.lo(i));
        look(u);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < 3) break;
            idx[i] = 0;
        }
        if (i == d || d == 0) break;
    }
    for (const Vec& h : hot) {
        bool in_cell = true;
        for (int i = 0; i < d; ++i)
            if (h(i) < c.lo(i) - 1e-15 || h(i) > c.hi(i) + 1e-15) in_cell = false;
        if (in_cell) look(h);
    }
    if (any_in && any_out) return CellClass::Straddle;
    return any_in ? CellClass::Inside : CellClass::Outside;
}

// 1-dim clipped Gauss-Kronrod along the inner axis: integrates f over the
// {|x| < r} segments of the line u(inner) in [a, b].
struct LineResult {
    double value_k = 0.0;
    double inner_err = 0.0;
    long evals = 0;
};

LineResult clipped_line(const Chart& chart, const ChartIntegrand& f, Vec u,
                        int inner, double a, double b, double r) {
    LineResult out;
    auto radial = [&](double v) {
        u(inner) = v;
        ++out.evals;
        return chart.map(u).squaredNorm() - r * r;
    };
    // Locate sign changes on a uniform scan, then polish with Brent.
    constexpr int kScan = 16;
    std::array<double, kScan + 1> val{};
    for (int i = 0; i <= kScan; ++i)
        val[i] = radial(a + (b - a) * i / kScan);
    std::vector<double> cuts{a};
    for (int i = 0; i < kScan; ++i) {
        const double va = val[i], vb = val[i + 1];
        if ((va < 0.0) != (vb < 0.0)) {
            const double xa = a + (b - a) * i / kScan;
            const double xb = a + (b - a) * (i + 1) / kScan;
            cuts.push_back(brent_root(radial, xa, xb, 1e-15 * (b - a)));
        }
    }
    cuts.push_back(b);
    const Rule15& rule = rule15();
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double sa = cuts[s], sb = cuts[s + 1];
        if (sb - sa < 1e-300) continue;
        if (radial(0.5 * (sa + sb)) >= 0.0) continue; // outside segment
        const double half = 0.5 * (sb - sa), mid = 0.5 * (sa + sb);
        double vk = 0.0, vg = 0.0;
        for (int i = 0; i < 15; ++i) {
            u(inner) = mid + half * rule.node[i];
            const Vec x = chart.map(u);
            const double fx = f(x, chart.jacobian(u));
            ++out.evals;
            vk += half * rule.wk[i] * fx;
            vg += half * rule.wg[i] * fx;
        }
        out.value_k += vk;
        out.inner_err += std::abs(vk - vg);
    }
    return out;
}

// Straddling cell resolved by outer-tensor x inner-clipped iteration.
struct ClipEstimate {
    double value_k = 0.0;
    double value_g = 0.0;
    double inner_err = 0.0;
    long evals = 0;
    bool usable = true;
};

ClipEstimate iterated_clip_cell(const Chart& chart, const ChartIntegrand& f,
                                const Cell& c, double r) {
    ClipEstimate est;
    const int d = static_cast<int>(c.lo.size());
    // Inner axis: strongest variation of |x|^2, widths factored in.
    Vec mid = 0.5 * (c.lo + c.hi);
    const Vec xc = chart.map(mid);
    const Mat jc = chart.jacobian(mid);
    Vec grad = 2.0 * (jc.transpose() * xc);
    int inner = 0;
    double best = -1.0;
    for (int i = 0; i < d; ++i) {
        const double score = std::abs(grad(i)) * (c.hi(i) - c.lo(i));
        if (score > best) {
            best = score;
            inner = i;
        }
    }
    if (!(best > 0.0)) {
        est.usable = false; // tangential cell; caller bisects instead
        return est;
    }
    const Rule15& rule = rule15();
    // Tensor over the outer axes.
    std::vector<int> outer;
    for (int i = 0; i < d; ++i)
        if (i != inner) outer.push_back(i);
    std::vector<int> idx(outer.size(), 0);
    Vec u(d);
    while (true) {
        double wk = 1.0, wg = 1.0;
        for (size_t i = 0; i < outer.size(); ++i) {
            const int ax = outer[i];
            const double half = 0.5 * (c.hi(ax) - c.lo(ax));
            const double m = 0.5 * (c.hi(ax) + c.lo(ax));
            u(ax) = m + half * rule.node[idx[i]];
            wk *= half * rule.wk[idx[i]];
            wg *= half * rule.wg[idx[i]];
        }
        const LineResult line =
            clipped_line(chart, f, u, inner, c.lo(inner), c.hi(inner), r);
        est.value_k += wk * line.value_k;
        est.value_g += wg * line.value_k;
        est.inner_err += std::abs(wk) * line.inner_err;
        est.evals += line.evals;
        if (outer.empty()) break;
        size_t i = 0;
        for (; i < outer.size(); ++i) {
            if (++idx[i] < 15) break;
            idx[i] = 0;
        }
        if (i == outer.size()) break;
    }
    return est;
}

QuadResult run_adaptive(const Chart& chart, const ChartIntegrand& f,
                        const QuadOptions& opts, bool clipped, double clip_r) {
    QuadResult res;
    if (chart.pdim() == 0) {
        const Vec x = chart.map(Vec(0));
        if (clipped && x.norm() >= clip_r) return res;
        res.value = f(x, chart.jacobian(Vec(0)));
        res.evals = 1;
        return res;
    }
    const double box_measure = chart.box_measure();
    std::vector<Vec> hot;
    if (clipped) hot = radial_extremum_params(chart);

    KahanSum total, total_err;
    long cells = 0;
    std::vector<Cell> stack{Cell{chart.lo, chart.hi, 0}};
    while (!stack.empty()) {
        Cell c = std::move(stack.back());
        stack.pop_back();
        if (++cells > opts.max_cells) {
            res.converged = false;
            break;
        }
        const double frac = cell_measure(c) / box_measure;
        const double tol = std::max(opts.abs_tol * frac, 1e-300);

        CellClass cls = CellClass::Inside;
        if (clipped) {
            cls = classify_cell(chart, c, clip_r, hot, res.evals);
            if (cls == CellClass::Outside) continue;
        }

        auto split = [&]() {
            const int ax = widest_axis(c);
            const double m = 0.5 * (c.lo(ax) + c.hi(ax));
            Cell a{c.lo, c.hi, c.depth + 1};
            a.hi(ax) = m;
            Cell b{c.lo, c.hi, c.depth + 1};
            b.lo(ax) = m;
            stack.push_back(std::move(b));
            stack.push_back(std::move(a));
        };

        if (cls == CellClass::Inside) {
            const CellEstimate e = gk_cell(chart, f, c);
            res.evals += e.evals;
            const double err = std::abs(e.value_k - e.value_g);
            if (err <= std::max(tol, opts.rel_tol * std::abs(e.value_k)) ||
                c.depth >= opts.max_depth) {
                total.add(e.value_k);
                total_err.add(err);
                if (c.depth >= opts.max_depth && err > tol) res.converged = false;
            } else {
                split();
            }
            continue;
        }

        // Straddling cell: a couple of bisections to localize the clip
        // sphere, then the iterated root-finding rule.
        if (c.depth < 4) {
            split();
            continue;
        }
        const ClipEstimate e = iterated_clip_cell(chart, f, c, clip_r);
        res.evals += e.evals;
        if (!e.usable) {
            if (c.depth >= opts.max_depth) {
                // Tangency at the depth limit: indicator integration.
                CellEstimate plain;
                for_rule_nodes(c, [&](const Vec& u, double wk, double wg) {
                    const Vec x = chart.map(u);
                    if (x.norm() >= clip_r) return;
                    const double fx = f(x, chart.jacobian(u));
                    plain.value_k += wk * fx;
                    plain.value_g += wg * fx;
                    ++plain.evals;
                });
                res.evals += plain.evals;
                total.add(plain.value_k);
                total_err.add(std::abs(plain.value_k - plain.value_g) +
                              0.5 * std::abs(plain.value_k));
                res.converged = false;
            } else {
                split();
            }
            continue;
        }
        const double err = std::abs(e.value_k - e.value_g) + e.inner_err;
        if (err <= std::max(tol, opts.rel_tol * std::abs(e.value_k)) ||
            c.depth >= opts.max_depth) {
            total.add(e.value_k);
            total_err.add(err);
            if (c.depth >= opts.max_depth && err > tol) res.converged = false;
        } else {
            split();
        }
    }
    res.value = total.get();
    res.error = total_err.get();
    return res;
}

} // namespace

QuadResult integrate_chart(const Chart& chart, const ChartIntegrand& f,
                           const QuadOptions& opts) {
    return run_adaptive(chart, f, opts, false, 0.0);
}

QuadResult integrate_chart_clipped(const Chart& chart, double clip_radius,
                                   const ChartIntegrand& f,
                                   const QuadOptions& opts) {
    return run_adaptive(chart, f, opts, true, clip_radius);
}

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol) {
    Chart line;
    line.lo = Vec::Constant(1, a);
    line.hi = Vec::Constant(1, b);
    line.map = [](const Vec& u) { return u; };
    line.jacobian = [](const Vec&) { return Mat::Identity(1, 1); };
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;
    return integrate_chart(line, [&](const Vec& x, const Mat&) { return f(x(0)); },
                           opts);
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw std::invalid_argument("brent_root: endpoints do not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb < 0.0) == (fc < 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

} // namespace hypiso
