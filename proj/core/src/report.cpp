#include "hypiso/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

namespace hypiso {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::domain_error("config: bad number for " + key + ": " + v);
    }
    if (trim(v.substr(pos)) != "")
        throw std::domain_error("config: trailing junk for " + key + ": " + v);
    return d;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw std::domain_error("config: expected [..] list for " + key);
    std::vector<double> out;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::domain_error("config: expected true/false for " + key);
}

std::vector<std::string> parse_names(const std::string& v) {
    std::vector<std::string> out;
    std::string body = v;
    if (!body.empty() && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty() && item != "all") out.push_back(item);
    }
    return out;
}

int worker_count() {
    if (const char* env = std::getenv("HYPISO_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

JsonValue echo_json(const RunConfig& cfg) {
    JsonValue v = JsonValue::object();
    for (const auto& [k, val] : cfg.echo) v.set(k, val);
    return v;
}

bool verdict_selected(const RunConfig& cfg, TheoremId id) {
    if (cfg.verdicts.empty()) return true;
    const std::string name = theorem_name(id);
    return std::find(cfg.verdicts.begin(), cfg.verdicts.end(), name) != cfg.verdicts.end();
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("config: expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        cfg.echo.emplace_back(key, val);

        if (key == "family.kind") cfg.kind = val;
        else if (key == "family.k") cfg.k = static_cast<int>(parse_double(key, val));
        else if (key == "family.n") cfg.n = static_cast<int>(parse_double(key, val));
        else if (key == "family.theta") cfg.theta = parse_double(key, val);
        else if (key == "family.axis") {
            const auto lst = parse_list(key, val);
            cfg.axis = Eigen::Map<const Vec>(lst.data(), lst.size());
        } else if (key == "family.translation") {
            const auto lst = parse_list(key, val);
            cfg.translation = Eigen::Map<const Vec>(lst.data(), lst.size());
        } else if (key == "family.neck") cfg.neck = parse_double(key, val);
        else if (key == "family.tilt") cfg.tilt = parse_double(key, val);
        else if (key == "measurement.truncation_radius")
            cfg.truncation_radius = parse_double(key, val);
        else if (key == "measurement.grid_size")
            cfg.grid_size = static_cast<int>(parse_double(key, val));
        else if (key == "sweep.theta_grid") cfg.theta_grid = parse_list(key, val);
        else if (key == "verdicts") cfg.verdicts = parse_names(val);
        else if (key == "optimizer.restarts")
            cfg.mobius.restarts = static_cast<int>(parse_double(key, val));
        else if (key == "optimizer.max_evals")
            cfg.mobius.max_evals = static_cast<int>(parse_double(key, val));
        else if (key == "optimizer.tolerance") cfg.mobius.tolerance = parse_double(key, val);
        else if (key == "mobius.history_csv") cfg.mobius_history_csv = parse_bool(key, val);
        else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_double(key, val));
        else if (key == "output.dir") cfg.out_dir = val;
        else if (key == "debug.corrupt_curve") cfg.corrupt_curve = parse_bool(key, val);
        else if (key == "report.timings") cfg.include_timings = parse_bool(key, val);
        else throw std::domain_error("config: unknown key " + key);
    }
    // Validate against module preconditions before any computation.
    if (cfg.k < 1 || cfg.k > cfg.n)
        throw std::domain_error("config: need 1 <= family.k <= family.n");
    if (!(cfg.theta > 0.0 && cfg.theta <= kPi / 2))
        throw std::domain_error("config: family.theta must lie in (0, pi/2]");
    if (!(cfg.truncation_radius > 0.0 && cfg.truncation_radius <= 1.0))
        throw std::domain_error("config: truncation_radius must lie in (0, 1]");
    if (cfg.grid_size < 10)
        throw std::domain_error("config: measurement.grid_size must be >= 10");
    if (!(cfg.neck > 0.0))
        throw std::domain_error("config: family.neck must be positive");
    if (cfg.mobius.restarts < 1 || cfg.mobius.max_evals < 8)
        throw std::domain_error("config: optimizer budget too small");
    for (double th : cfg.theta_grid)
        if (!(th > 0.0 && th <= kPi / 2))
            throw std::domain_error("config: sweep.theta_grid values must lie in (0, pi/2]");
    cfg.mobius.seed = cfg.seed + 7;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Submanifold build_family(const RunConfig& cfg) {
    Vec axis = cfg.axis.value_or([&] {
        Vec a = Vec::Zero(cfg.n);
        a(cfg.n - 1) = 1.0;
        return a;
    }());
    if (axis.size() != cfg.n)
        throw std::domain_error("config: family.axis has wrong dimension");

    if (cfg.kind == "disk") return flat_disk(cfg.k, cfg.n);
    if (cfg.kind == "cap") return geodesic_cap(cfg.k, cfg.n, cfg.theta, axis);
    if (cfg.kind == "mobius-image") {
        Vec a = cfg.translation.value_or(Vec::Zero(cfg.n));
        if (a.size() != cfg.n)
            throw std::domain_error("config: family.translation has wrong dimension");
        const Submanifold base =
            cfg.echo.end() !=
                    std::find_if(cfg.echo.begin(), cfg.echo.end(),
                                 [](const auto& kv) { return kv.first == "family.theta"; })
                ? geodesic_cap(cfg.k, cfg.n, cfg.theta, axis)
                : flat_disk(cfg.k, cfg.n);
        return mobius_image(base, mobius_translate(a));
    }
    if (cfg.kind == "union") {
        const Submanifold first = flat_disk(cfg.k, cfg.n);
        // Second disk: the coordinate plane tilted about e1 by cfg.tilt.
        Mat frame = Mat::Identity(cfg.n, cfg.n).leftCols(cfg.k);
        if (cfg.k >= 2 && cfg.n >= 3) {
            Vec v = Vec::Zero(cfg.n);
            v(1) = std::cos(cfg.tilt);
            v(2) = std::sin(cfg.tilt);
            frame.col(1) = v;
        }
        const Submanifold second = flat_disk(cfg.k, cfg.n, frame);
        return union_of({first, second}, cfg.seed + 1);
    }
    if (cfg.kind == "catenoid") {
        if (cfg.k != 2 || cfg.n != 3)
            throw std::domain_error("config: catenoid requires k = 2, n = 3");
        return catenoid(cfg.neck);
    }
    throw std::domain_error("config: unknown family.kind " + cfg.kind);
}

namespace {

struct SweepRow {
    double theta = 0.0;
    double vol_sigma = 0.0;
    double vol_boundary = 0.0;
    double linear_slack = 0.0;
    std::string classical_status;
    double reverse_slack = 0.0;
    bool pass = true;
};

SweepRow sweep_point(const RunConfig& cfg, double theta) {
    Vec axis = cfg.axis.value_or([&] {
        Vec a = Vec::Zero(cfg.n);
        a(cfg.n - 1) = 1.0;
        return a;
    }());
    const Submanifold cap = geodesic_cap(cfg.k, cfg.n, theta, axis);
    const VolumeReport rep = euclidean_volume(cap, cfg.truncation_radius);
    const InequalityVerdict lin = check_linear_isoperimetric(cap);
    const InequalityVerdict cls = check_classical_isoperimetric(cap);
    const InequalityVerdict rev = check_reverse_totally_geodesic(cap);
    SweepRow row;
    row.theta = theta;
    row.vol_sigma = rep.vol_euclidean;
    row.vol_boundary = rep.vol_ideal_boundary;
    row.linear_slack = lin.slack;
    row.classical_status =
        cls.not_applicable ? "not_applicable" : (cls.pass ? "pass" : "fail");
    row.reverse_slack = rev.slack;
    row.pass = lin.pass && rev.pass && (cls.not_applicable || cls.pass);
    return row;
}

} // namespace

CommandResult cmd_sweep_theta(const RunConfig& cfg) {
    std::vector<double> grid = cfg.theta_grid;
    if (grid.empty()) grid = {cfg.theta};
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<SweepRow> rows(grid.size());
    const int workers = worker_count();
    for (size_t base = 0; base < grid.size(); base += workers) {
        std::vector<std::future<SweepRow>> batch;
        const size_t end = std::min(grid.size(), base + workers);
        for (size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async,
                                       [&cfg, th = grid[i]] { return sweep_point(cfg, th); }));
        for (size_t i = base; i < end; ++i) rows[i] = batch[i - base].get();
    }

    std::string csv = "theta,vol_sigma,vol_boundary,linear_slack,classical_status,reverse_slack\n";
    JsonValue jrows = JsonValue::array();
    bool all_pass = true;
    for (const SweepRow& r : rows) {
        csv += format_g17(r.theta) + "," + format_g17(r.vol_sigma) + "," +
               format_g17(r.vol_boundary) + "," + format_g17(r.linear_slack) + "," +
               r.classical_status + "," + format_g17(r.reverse_slack) + "\n";
        JsonValue jr = JsonValue::object();
        jr.set("theta", r.theta)
            .set("vol_sigma", r.vol_sigma)
            .set("vol_boundary", r.vol_boundary)
            .set("linear_slack", r.linear_slack)
            .set("classical_status", r.classical_status)
            .set("reverse_slack", r.reverse_slack);
        jrows.push(std::move(jr));
        all_pass = all_pass && r.pass;
    }
    write_file(std::filesystem::path(cfg.out_dir) / "sweep_theta.csv", csv);
    JsonValue doc = JsonValue::object();
    doc.set("schema", "hypiso-report-v1")
        .set("command", "sweep-theta")
        .set("config", echo_json(cfg))
        .set("rows", std::move(jrows))
        .set("all_pass", all_pass);
    write_file(std::filesystem::path(cfg.out_dir) / "report.json", doc.dump());

    CommandResult res;
    res.exit_code = all_pass ? 0 : 1;
    res.summary = "sweep-theta: " + std::to_string(rows.size()) + " points, " +
                  (all_pass ? "all applicable verdicts pass" : "verdict failure");
    return res;
}

CommandResult cmd_monotonicity(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const Submanifold sigma = build_family(cfg);
    MonotonicityCurve curve = monotonicity_curve(sigma, cfg.grid_size);
    if (cfg.corrupt_curve && curve.ratios.size() > 2)
        curve.ratios[curve.ratios.size() / 2] -= 1e-3;
    const InequalityVerdict verdict = check_monotonicity(curve);

    write_file(std::filesystem::path(cfg.out_dir) / "monotonicity.csv", curve_to_csv(curve));
    JsonValue doc = JsonValue::object();
    doc.set("schema", "hypiso-report-v1")
        .set("command", "monotonicity")
        .set("config", echo_json(cfg))
        .set("curve", to_json(curve))
        .set("verdicts", JsonValue::array().push(to_json(verdict)));
    write_file(std::filesystem::path(cfg.out_dir) / "report.json", doc.dump());

    CommandResult res;
    res.exit_code = verdict.pass ? 0 : 1;
    res.summary = std::string("monotonicity: ") + (verdict.pass ? "pass" : "FAIL");
    return res;
}

CommandResult cmd_mobius(const RunConfig& cfg, const std::string& target) {
    std::filesystem::create_directories(cfg.out_dir);
    if (target != "submanifold" && target != "boundary")
        throw std::domain_error("mobius: target must be submanifold or boundary");
    const Submanifold sigma = build_family(cfg);
    const MobiusVolumeResult mv = mobius_volume(
        sigma,
        target == "boundary" ? MobiusTarget::IdealBoundary : MobiusTarget::Submanifold,
        cfg.mobius);

    JsonValue doc = JsonValue::object();
    doc.set("schema", "hypiso-report-v1")
        .set("command", "mobius")
        .set("target", target)
        .set("config", echo_json(cfg))
        .set("mobius_volume", to_json(mv));
    write_file(std::filesystem::path(cfg.out_dir) / "mobius.json", doc.dump());
    if (cfg.mobius_history_csv) {
        std::string csv = "evaluation,volume\n";
        for (size_t i = 0; i < mv.history.size(); ++i)
            csv += std::to_string(i) + "," + format_g17(mv.history[i].second) + "\n";
        write_file(std::filesystem::path(cfg.out_dir) / "mobius_history.csv", csv);
    }

    CommandResult res;
    res.exit_code = mv.converged ? 0 : 1;
    res.summary = "mobius " + target + ": value " + format_g17(mv.value) +
                  (mv.converged ? "" : " (non-converged)");
    return res;
}

CommandResult cmd_verify_all(const RunConfig& cfg) {
    using Clock = std::chrono::steady_clock;
    std::filesystem::create_directories(cfg.out_dir);
    const auto t0 = Clock::now();
    const Submanifold sigma = build_family(cfg);

    std::vector<InequalityVerdict> verdicts;
    JsonValue timings = JsonValue::object();
    auto timed = [&](const char* name, auto&& fn) {
        const auto a = Clock::now();
        fn();
        const auto b = Clock::now();
        timings.set(name,
                    std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count());
    };

    VolumeReport rep;
    timed("measure", [&] { rep = euclidean_volume(sigma, cfg.truncation_radius); });

    if (verdict_selected(cfg, TheoremId::LinearIsop))
        timed("linear", [&] { verdicts.push_back(check_linear_isoperimetric(sigma)); });
    if (verdict_selected(cfg, TheoremId::ClassicalIsop))
        timed("classical",
              [&] { verdicts.push_back(check_classical_isoperimetric(sigma)); });
    if (sigma.totally_geodesic && verdict_selected(cfg, TheoremId::ReverseTG))
        timed("reverse",
              [&] { verdicts.push_back(check_reverse_totally_geodesic(sigma)); });

    MonotonicityCurve curve;
    if (verdict_selected(cfg, TheoremId::Monotonicity)) {
        timed("monotonicity", [&] {
            curve = monotonicity_curve(sigma, cfg.grid_size);
            if (cfg.corrupt_curve && curve.ratios.size() > 2)
                curve.ratios[curve.ratios.size() / 2] -= 1e-3;
            verdicts.push_back(check_monotonicity(curve));
        });
    }
    if (verdict_selected(cfg, TheoremId::VolumeLowerBound))
        timed("lower_bound",
              [&] { verdicts.push_back(check_volume_lower_bound(sigma)); });
    if (verdict_selected(cfg, TheoremId::LaplacianLemma))
        timed("laplacian", [&] {
            verdicts.push_back(check_laplacian_lemma(sigma, 100, cfg.seed + 11));
        });

    std::optional<MobiusVolumeResult> mb, ms;
    const bool want_mb = verdict_selected(cfg, TheoremId::MobiusBoundary) ||
                         verdict_selected(cfg, TheoremId::MobiusDensity) ||
                         verdict_selected(cfg, TheoremId::MobiusIsop);
    if (want_mb)
        timed("mobius_boundary_volume",
              [&] { mb = mobius_volume(sigma, MobiusTarget::IdealBoundary, cfg.mobius); });
    if (verdict_selected(cfg, TheoremId::MobiusIsop))
        timed("mobius_sigma_volume",
              [&] { ms = mobius_volume(sigma, MobiusTarget::Submanifold, cfg.mobius); });

    if (verdict_selected(cfg, TheoremId::MobiusBoundary))
        timed("mobius_boundary", [&] {
            verdicts.push_back(check_mobius_boundary_bound(sigma, cfg.mobius, mb));
        });
    if (verdict_selected(cfg, TheoremId::MobiusDensity))
        timed("mobius_density", [&] {
            verdicts.push_back(check_mobius_density_bound(sigma, cfg.mobius, mb));
        });
    if (verdict_selected(cfg, TheoremId::MobiusIsop))
        timed("mobius_isop", [&] {
            verdicts.push_back(check_mobius_isoperimetric(sigma, cfg.mobius, ms, mb));
        });

    timings.set("total_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                Clock::now() - t0)
                                .count());

    bool all_pass = true;
    JsonValue jv = JsonValue::array();
    for (const InequalityVerdict& v : verdicts) {
        jv.push(to_json(v));
        if (!v.not_applicable && !v.pass) all_pass = false;
    }

    JsonValue doc = JsonValue::object();
    doc.set("schema", "hypiso-report-v1")
        .set("command", "verify-all")
        .set("config", echo_json(cfg))
        .set("volume_report", to_json(rep))
        .set("curve", to_json(curve))
        .set("verdicts", std::move(jv));
    if (ms) doc.set("mobius_volume_sigma", to_json(*ms));
    if (mb) doc.set("mobius_volume_boundary", to_json(*mb));
    if (cfg.include_timings) doc.set("timings", std::move(timings));
    write_file(std::filesystem::path(cfg.out_dir) / "report.json", doc.dump());
    write_file(std::filesystem::path(cfg.out_dir) / "submanifold.json",
               submanifold_to_json(sigma).dump());

    CommandResult res;
    res.exit_code = all_pass ? 0 : 1;
    std::ostringstream os;
    os << "verify-all: " << verdicts.size() << " verdicts, "
       << (all_pass ? "all applicable pass" : "FAILURES present");
    res.summary = os.str();
    return res;
}

} // namespace hypiso
