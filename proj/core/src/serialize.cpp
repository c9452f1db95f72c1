#include "hypiso/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace hypiso {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.data_ = std::make_shared<Object>();
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.data_ = std::make_shared<Array>();
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    auto obj = std::get<std::shared_ptr<Object>>(data_);
    obj->emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    auto arr = std::get<std::shared_ptr<Array>>(data_);
    arr->push_back(std::move(v));
    return *this;
}

namespace {

void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}

} // namespace

void JsonValue::dump_to(std::string& out, int indent, int level) const {
    const std::string pad(static_cast<size_t>(indent) * (level + 1), ' ');
    const std::string pad_close(static_cast<size_t>(indent) * level, ' ');
    if (std::holds_alternative<std::nullptr_t>(data_)) {
        out += "null";
    } else if (auto* b = std::get_if<bool>(&data_)) {
        out += *b ? "true" : "false";
    } else if (auto* i = std::get_if<std::int64_t>(&data_)) {
        out += std::to_string(*i);
    } else if (auto* d = std::get_if<double>(&data_)) {
        out += std::isfinite(*d) ? format_g17(*d) : "null";
    } else if (auto* s = std::get_if<std::string>(&data_)) {
        escape_to(out, *s);
    } else if (auto* obj = std::get_if<std::shared_ptr<Object>>(&data_)) {
        if ((*obj)->empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (size_t i = 0; i < (*obj)->size(); ++i) {
            out += pad;
            escape_to(out, (**obj)[i].first);
            out += ": ";
            (**obj)[i].second.dump_to(out, indent, level + 1);
            if (i + 1 < (*obj)->size()) out += ',';
            out += '\n';
        }
        out += pad_close + "}";
    } else if (auto* arr = std::get_if<std::shared_ptr<Array>>(&data_)) {
        if ((*arr)->empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (size_t i = 0; i < (*arr)->size(); ++i) {
            out += pad;
            (**arr)[i].dump_to(out, indent, level + 1);
            if (i + 1 < (*arr)->size()) out += ',';
            out += '\n';
        }
        out += pad_close + "]";
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += '\n';
    return out;
}

JsonValue to_json(const VolumeReport& rep) {
    JsonValue v = JsonValue::object();
    v.set("vol_euclidean", rep.vol_euclidean)
        .set("vol_ideal_boundary", rep.vol_ideal_boundary)
        .set("truncation_radius", rep.truncation_radius)
        .set("tail_estimate", rep.tail_estimate)
        .set("quadrature_error", rep.quadrature_error);
    return v;
}

JsonValue to_json(const MonotonicityCurve& curve) {
    JsonValue radii = JsonValue::array();
    JsonValue ratios = JsonValue::array();
    for (double r : curve.radii) radii.push(r);
    for (double m : curve.ratios) ratios.push(m);
    JsonValue v = JsonValue::object();
    v.set("radii", std::move(radii)).set("ratios", std::move(ratios));
    return v;
}

JsonValue to_json(const DensityEstimate& est) {
    JsonValue point = JsonValue::array();
    for (int i = 0; i < est.point.size(); ++i) point.push(est.point(i));
    JsonValue radii = JsonValue::array();
    for (double r : est.radii_used) radii.push(r);
    JsonValue v = JsonValue::object();
    v.set("point", std::move(point))
        .set("value", est.value)
        .set("radii_used", std::move(radii))
        .set("extrapolation_error", est.extrapolation_error);
    return v;
}

JsonValue to_json(const InequalityVerdict& verdict) {
    JsonValue v = JsonValue::object();
    v.set("theorem_id", theorem_name(verdict.id))
        .set("lhs", verdict.lhs)
        .set("rhs", verdict.rhs)
        .set("slack", verdict.slack)
        .set("pass", verdict.pass)
        .set("tolerance", verdict.tolerance)
        .set("not_applicable", verdict.not_applicable)
        .set("notes", verdict.notes);
    return v;
}

JsonValue to_json(const MobiusVolumeResult& res) {
    JsonValue hist = JsonValue::array();
    for (const auto& [a, vol] : res.history) {
        JsonValue entry = JsonValue::object();
        JsonValue av = JsonValue::array();
        for (int i = 0; i < a.size(); ++i) av.push(a(i));
        entry.set("translation", std::move(av)).set("volume", vol);
        hist.push(std::move(entry));
    }
    JsonValue trans = JsonValue::array();
    for (int i = 0; i < res.maximizer.translation.size(); ++i)
        trans.push(res.maximizer.translation(i));
    JsonValue v = JsonValue::object();
    v.set("value", res.value)
        .set("maximizer_translation", std::move(trans))
        .set("evaluations", res.evaluations)
        .set("restarts_used", res.restarts_used)
        .set("converged", res.converged)
        .set("history", std::move(hist));
    return v;
}

std::string curve_to_csv(const MonotonicityCurve& curve) {
    std::string out = "r,ratio\n";
    for (size_t i = 0; i < curve.radii.size(); ++i) {
        out += format_g17(curve.radii[i]);
        out += ',';
        out += format_g17(curve.ratios[i]);
        out += '\n';
    }
    return out;
}

JsonValue submanifold_to_json(const Submanifold& sigma, int grid) {
    auto chart_json = [grid](const Chart& c) {
        JsonValue jc = JsonValue::object();
        JsonValue lo = JsonValue::array(), hi = JsonValue::array();
        for (int i = 0; i < c.pdim(); ++i) {
            lo.push(c.lo(i));
            hi.push(c.hi(i));
        }
        jc.set("box_lo", std::move(lo)).set("box_hi", std::move(hi));
        JsonValue pts = JsonValue::array();
        const int d = c.pdim();
        std::vector<int> idx(d, 0);
        while (true) {
            Vec u(d);
            for (int i = 0; i < d; ++i)
                u(i) = c.lo(i) + (c.hi(i) - c.lo(i)) * idx[i] / std::max(1, grid - 1);
            const Vec x = c.map(u);
            JsonValue p = JsonValue::array();
            for (int i = 0; i < x.size(); ++i) p.push(x(i));
            pts.push(std::move(p));
            if (d == 0) break;
            int i = 0;
            for (; i < d; ++i) {
                if (++idx[i] < grid) break;
                idx[i] = 0;
            }
            if (i == d) break;
        }
        jc.set("points", std::move(pts));
        return jc;
    };

    JsonValue interior = JsonValue::array();
    for (const Chart& c : sigma.interior_charts) interior.push(chart_json(c));
    JsonValue ideal = JsonValue::array();
    for (const Chart& c : sigma.ideal_charts) ideal.push(chart_json(c));
    JsonValue candidates = JsonValue::array();
    for (const Vec& p : sigma.candidate_density_points) {
        JsonValue pv = JsonValue::array();
        for (int i = 0; i < p.size(); ++i) pv.push(p(i));
        candidates.push(std::move(pv));
    }

    JsonValue v = JsonValue::object();
    v.set("schema", "hypiso-submanifold-v1")
        .set("k", sigma.k)
        .set("n", sigma.n)
        .set("contains_origin", sigma.contains_origin)
        .set("totally_geodesic", sigma.totally_geodesic)
        .set("interior_charts", std::move(interior))
        .set("ideal_charts", std::move(ideal))
        .set("candidate_density_points", std::move(candidates));
    return v;
}

} // namespace hypiso
