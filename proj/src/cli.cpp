#include "pidstab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pidstab/certificates.hpp"
#include "pidstab/errors.hpp"
#include "pidstab/falsifier.hpp"
#include "pidstab/io.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"

namespace pidstab::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config." + path + ": " + what);
}

std::string join(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "." + b;
}

const json* find(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const std::string& path, const std::string& key) {
    const json* f = find(j, key);
    if (!f) fail(join(path, key), "missing required field");
    return *f;
}

double as_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::string as_str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double num_field(const json& j, const std::string& path, const std::string& key) {
    return as_num(need(j, path, key), join(path, key));
}

double num_or(const json& j, const std::string& path, const std::string& key, double dflt) {
    const json* f = find(j, key);
    return f ? as_num(*f, join(path, key)) : dflt;
}

long long int_or(const json& j, const std::string& path, const std::string& key, long long dflt) {
    const json* f = find(j, key);
    return f ? as_int(*f, join(path, key)) : dflt;
}

Vector as_vec(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vector v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(as_num(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

Matrix as_mat(const json& j, const std::string& path, std::size_t n) {
    if (!j.is_array() || j.size() != n)
        fail(path, "expected " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const Vector row = as_vec(j[r], path + "[" + std::to_string(r) + "]");
        if (row.size() != n)
            fail(path + "[" + std::to_string(r) + "]",
                 "expected " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
    }
    return m;
}

ClassBounds load_bounds(const json& cfg) {
    const json& b = need(cfg, "", "bounds");
    const ClassBounds out{num_field(b, "bounds", "L1"), num_field(b, "bounds", "L2")};
    out.validate();
    return out;
}

GainTriple load_gains(const json& cfg) {
    const json& g = need(cfg, "", "gains");
    const GainTriple t{num_field(g, "gains", "kp"), num_field(g, "gains", "ki"),
                       num_field(g, "gains", "kd"), num_field(g, "gains", "b_lower")};
    t.validate();
    return t;
}

Plant plant_from_spec(const json& spec, const std::string& path,
                      const std::optional<ClassBounds>& fallback) {
    if (!spec.is_object()) fail(path, "expected an object");
    const std::string kind = as_str(need(spec, path, "kind"), join(path, "kind"));
    const long long n_ll = as_int(need(spec, path, "n"), join(path, "n"));
    if (n_ll < 1) fail(join(path, "n"), "expected a positive integer");
    const auto n = static_cast<std::size_t>(n_ll);

    std::optional<ClassBounds> claimed;
    if (const json* cb = find(spec, "claimed")) {
        const std::string cpath = join(path, "claimed");
        claimed = ClassBounds{num_field(*cb, cpath, "L1"), num_field(*cb, cpath, "L2")};
    }
    Vector c(n, 0.0);
    if (const json* cj = find(spec, "c")) {
        c = as_vec(*cj, join(path, "c"));
        if (c.size() != n) fail(join(path, "c"), "expected " + std::to_string(n) + " entries");
    }

    if (kind == "linear") {
        const Matrix A = as_mat(need(spec, path, "A"), join(path, "A"), n);
        const Matrix B = as_mat(need(spec, path, "B"), join(path, "B"), n);
        return make_linear_plant(A, B, c, claimed);
    }
    if (kind == "sinusoidal") {
        const double a = num_field(spec, path, "a");
        const Matrix B = as_mat(need(spec, path, "B"), join(path, "B"), n);
        return make_sinusoidal_plant(n, a, B, claimed);
    }
    if (kind == "worst_case") {
        if (!claimed && !fallback)
            fail(join(path, "claimed"),
                 "worst_case needs claimed bounds or a top-level bounds block");
        return make_worst_case_plant(n, claimed ? *claimed : *fallback, c);
    }
    if (kind == "gradient")
        fail(join(path, "kind"),
             "gradient plants take function objects; build them through the library API");
    fail(join(path, "kind"), "unknown plant kind '" + kind + "'");
}

Plant load_plant(const json& cfg, const std::optional<ClassBounds>& fallback) {
    return plant_from_spec(need(cfg, "", "plant"), "plant", fallback);
}

SimConfig load_sim(const json& cfg, SimConfig s = {}) {
    const json* b = find(cfg, "sim");
    if (!b) return s;
    if (!b->is_object()) fail("sim", "expected an object");
    if (const json* f = find(*b, "integrator")) {
        const std::string v = as_str(*f, "sim.integrator");
        if (v == "rk45_adaptive")
            s.integrator = Integrator::rk45_adaptive;
        else if (v == "rk4_fixed")
            s.integrator = Integrator::rk4_fixed;
        else
            fail("sim.integrator", "expected \"rk45_adaptive\" or \"rk4_fixed\"");
    }
    s.fixed_step = num_or(*b, "sim", "fixed_step", s.fixed_step);
    s.abs_tol = num_or(*b, "sim", "abs_tol", s.abs_tol);
    s.rel_tol = num_or(*b, "sim", "rel_tol", s.rel_tol);
    s.max_step = num_or(*b, "sim", "max_step", s.max_step);
    s.horizon = num_or(*b, "sim", "horizon", s.horizon);
    s.divergence_threshold = num_or(*b, "sim", "divergence_threshold", s.divergence_threshold);
    s.convergence_tol = num_or(*b, "sim", "convergence_tol", s.convergence_tol);
    s.dwell = num_or(*b, "sim", "dwell", s.dwell);
    if (const json* f = find(*b, "max_steps")) {
        const long long v = as_int(*f, "sim.max_steps");
        if (v < 1) fail("sim.max_steps", "expected a positive integer");
        s.max_steps = static_cast<std::size_t>(v);
    }
    if (const json* f = find(*b, "checkpoints")) s.checkpoints = as_vec(*f, "sim.checkpoints");
    s.validate();
    return s;
}

Vector vec_or(const json& cfg, const std::string& key, std::size_t n, Vector dflt) {
    const json* f = find(cfg, key);
    if (!f) return dflt;
    Vector v = as_vec(*f, key);
    if (v.size() != n) fail(key, "expected " + std::to_string(n) + " entries");
    return v;
}

Vector required_vec(const json& cfg, const std::string& key, std::size_t n) {
    Vector v = as_vec(need(cfg, "", key), key);
    if (v.size() != n) fail(key, "expected " + std::to_string(n) + " entries");
    return v;
}

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    std::optional<std::uint64_t> seed_override;
};

std::uint64_t need_seed(const json& cfg, const Common& c) {
    if (c.seed_override) return *c.seed_override;
    const json* s = find(cfg, "seed");
    if (!s) throw ConfigError("config.seed: required for sampled procedures (or pass --seed)");
    if (!s->is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    return s->get<std::uint64_t>();
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    const json* schema = find(cfg, "schema");
    if (!schema || !schema->is_string() || schema->get<std::string>() != "pidstab/v1")
        throw ConfigError("config.schema: expected \"pidstab/v1\"");
    return cfg;
}

fs::path write_artifact(const Common& c, const std::string& name, const CsvTable& t) {
    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path p = dir / name;
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write artifact '" + p.string() + "'");
    write_csv(out, t);
    out.flush();
    if (!out) throw ConfigError("failed while writing artifact '" + p.string() + "'");
    return p;
}

struct SliceSpec {
    FixedGain fixed = FixedGain::ki;
    double fixed_value = 0.0;
    std::array<double, 2> range1{};
    std::array<double, 2> range2{};
    std::array<int, 2> resolution{};
    double b_lower = 1.0;
};

SliceSpec load_slice_spec(const json& block, const std::string& path) {
    SliceSpec s;
    const std::string f = as_str(need(block, path, "fixed"), join(path, "fixed"));
    if (f == "kp")
        s.fixed = FixedGain::kp;
    else if (f == "ki")
        s.fixed = FixedGain::ki;
    else if (f == "kd")
        s.fixed = FixedGain::kd;
    else
        fail(join(path, "fixed"), "expected \"kp\", \"ki\" or \"kd\"");
    s.fixed_value = num_field(block, path, "fixed_value");
    const auto load_range = [&](const char* key) {
        const Vector r = as_vec(need(block, path, key), join(path, key));
        if (r.size() != 2) fail(join(path, key), "expected [lo, hi]");
        return std::array<double, 2>{r[0], r[1]};
    };
    s.range1 = load_range("range1");
    s.range2 = load_range("range2");
    const json& res = need(block, path, "resolution");
    if (!res.is_array() || res.size() != 2) fail(join(path, "resolution"), "expected [n1, n2]");
    s.resolution = {static_cast<int>(as_int(res[0], join(path, "resolution") + "[0]")),
                    static_cast<int>(as_int(res[1], join(path, "resolution") + "[1]"))};
    s.b_lower = num_or(block, path, "b_lower", 1.0);
    return s;
}

GainTriple cell_gains(const SliceSpec& sp, double a1, double a2) {
    GainTriple t{0.0, 0.0, 0.0, sp.b_lower};
    switch (sp.fixed) {
        case FixedGain::kp:
            t.kp = sp.fixed_value;
            t.ki = a1;
            t.kd = a2;
            break;
        case FixedGain::ki:
            t.ki = sp.fixed_value;
            t.kp = a1;
            t.kd = a2;
            break;
        case FixedGain::kd:
            t.kd = sp.fixed_value;
            t.kp = a1;
            t.ki = a2;
            break;
    }
    return t;
}

int cmd_region_check(const json& cfg, const Common&, std::ostream& out) {
    const ClassBounds b = load_bounds(cfg);
    const GainTriple g = load_gains(cfg);
    const ScaledGains s = scale_gains(g, g.b_lower);
    out << region_report(s, b);
    return in_omega1(s, b).in_region ? 0 : 2;
}

int cmd_region_slice(const json& cfg, const Common& c, std::ostream& out) {
    const ClassBounds b = load_bounds(cfg);
    const SliceSpec sp = load_slice_spec(need(cfg, "", "slice"), "slice");
    const GainSlice gs = slice_grid(b, sp.b_lower, sp.fixed, sp.fixed_value, sp.range1,
                                    sp.range2, sp.resolution);
    const fs::path p = write_artifact(c, "slice.csv", slice_table(gs));
    out << "wrote " << p.string() << " (" << sp.resolution[0] << "x" << sp.resolution[1]
        << " cells)\n";
    return 0;
}

int cmd_certify(const json& cfg, const Common& c, std::ostream& out) {
    const ClassBounds bounds = load_bounds(cfg);
    const GainTriple g = load_gains(cfg);
    const Plant plant = load_plant(cfg, bounds);
    const Vector ystar = required_vec(cfg, "ystar", plant.n);

    CertMode mode = CertMode::theorem1;
    int samples = 200;
    double box = 2.0;
    if (const json* cj = find(cfg, "certify")) {
        const std::string m = find(*cj, "mode") ? as_str(*find(*cj, "mode"), "certify.mode")
                                                : std::string("theorem1");
        if (m == "theorem1")
            mode = CertMode::theorem1;
        else if (m == "proposition1")
            mode = CertMode::proposition1;
        else
            fail("certify.mode", "expected \"theorem1\" or \"proposition1\"");
        samples = static_cast<int>(int_or(*cj, "certify", "samples", samples));
        if (samples < 0) fail("certify.samples", "expected a nonnegative integer");
        box = num_or(*cj, "certify", "box", box);
        if (!(box > 0.0)) fail("certify.box", "expected a positive number");
    }

    const ScaledGains s = scale_gains(g, g.b_lower);
    const Certificate cert = build_certificate(s, bounds, plant, ystar, mode);
    const CertificateCheck chk = check_P(cert);

    CertifySamples cs;
    cs.sample_box = box;
    if (mode == CertMode::theorem1 && samples > 0) {
        std::mt19937_64 prng(need_seed(cfg, c));
        std::uniform_real_distribution<double> u(-box, box);
        double qmin = std::numeric_limits<double>::infinity();
        Vector y(plant.n), z(plant.n);
        for (int i = 0; i < samples; ++i) {
            for (auto& v : y) v = u(prng);
            for (auto& v : z) v = u(prng);
            qmin = std::min(qmin, q_min_eig(cert, y, z));
        }
        cs.q_states = samples;
        cs.q_min = qmin;
    }

    const SimConfig sim = load_sim(cfg);
    const double b_actual = num_or(cfg, "", "b_actual", g.b_lower);
    Vector x0_default = ystar;
    for (auto& v : x0_default) v += 1.0;
    const Vector x0 = vec_or(cfg, "x0", plant.n, std::move(x0_default));
    const Vector v0 = vec_or(cfg, "v0", plant.n, Vector(plant.n, 0.0));
    const Trajectory traj = simulate(plant, g, b_actual, ystar, x0, v0, sim);
    if (traj.size() >= 3) {
        const VdotSeries vd = vdot_along(cert, traj);
        cs.vdot_samples = vd.value.size();
        cs.vdot_max = vd.max_value;
    }
    out << certificate_report(cert, chk, cs);
    return 0;
}

int cmd_simulate(const json& cfg, const Common& c, std::ostream& out) {
    const GainTriple g = load_gains(cfg);
    std::optional<ClassBounds> bounds;
    if (find(cfg, "bounds")) bounds = load_bounds(cfg);
    const Plant plant = load_plant(cfg, bounds);
    const Vector ystar = required_vec(cfg, "ystar", plant.n);
    const Vector x0 = vec_or(cfg, "x0", plant.n, Vector(plant.n, 0.0));
    const Vector v0 = vec_or(cfg, "v0", plant.n, Vector(plant.n, 0.0));
    const SimConfig sim = load_sim(cfg);
    const double b_actual = num_or(cfg, "", "b_actual", g.b_lower);

    const Trajectory traj = simulate(plant, g, b_actual, ystar, x0, v0, sim);

    // A certify block attaches a V column, evaluated for the actual loop gain.
    std::vector<double> v;
    const std::vector<double>* vp = nullptr;
    if (const json* cj = find(cfg, "certify")) {
        if (!bounds) fail("bounds", "required when a certificate is attached");
        const std::string m = find(*cj, "mode") ? as_str(*find(*cj, "mode"), "certify.mode")
                                                : std::string("theorem1");
        CertMode mode;
        if (m == "theorem1")
            mode = CertMode::theorem1;
        else if (m == "proposition1")
            mode = CertMode::proposition1;
        else
            fail("certify.mode", "expected \"theorem1\" or \"proposition1\"");
        const Certificate cert =
            build_certificate(scale_gains(g, b_actual), *bounds, plant, ystar, mode);
        v = v_series(cert, traj);
        vp = &v;
    }

    const fs::path p = write_artifact(c, "trajectory.csv", trajectory_table(traj, vp));
    out << "verdict: " << to_string(traj.verdict)
        << " (decided at t=" << format_sci(traj.decided_at) << ")\n";
    out << "final err_norm: " << format_sci(traj.err_norm.back()) << '\n';
    if (!traj.warning.empty()) out << "warning: " << traj.warning << '\n';
    out << "wrote " << p.string() << " (" << traj.size() << " samples)\n";
    return traj.verdict == Verdict::converged ? 0 : 2;
}

int cmd_sweep(const json& cfg, const Common& c, std::ostream& out) {
    const json& sw = need(cfg, "", "sweep");
    const SliceSpec sp = load_slice_spec(sw, "sweep");
    const json& pl = need(sw, "sweep", "plants");
    if (!pl.is_array() || pl.empty()) fail("sweep.plants", "expected a non-empty array");
    std::optional<ClassBounds> bounds;
    if (find(cfg, "bounds")) bounds = load_bounds(cfg);

    std::vector<Plant> plants;
    for (std::size_t i = 0; i < pl.size(); ++i)
        plants.push_back(
            plant_from_spec(pl[i], "sweep.plants[" + std::to_string(i) + "]", bounds));
    const std::size_t n = plants.front().n;
    for (std::size_t i = 1; i < plants.size(); ++i)
        if (plants[i].n != n) fail("sweep.plants", "all plants must share one dimension");

    const Vector ystar = required_vec(cfg, "ystar", n);
    const Vector x0 = vec_or(cfg, "x0", n, Vector(n, 0.0));
    const Vector v0 = vec_or(cfg, "v0", n, Vector(n, 0.0));
    const SimConfig sim = load_sim(cfg);
    const double b_actual = num_or(cfg, "", "b_actual", sp.b_lower);

    const auto linspace = [](std::array<double, 2> r, int k) {
        Vector v(k);
        for (int i = 0; i < k; ++i) v[i] = r[0] + (r[1] - r[0]) * i / (k - 1);
        return v;
    };
    if (sp.resolution[0] < 2 || sp.resolution[1] < 2)
        fail("sweep.resolution", "expected at least 2 per axis");
    const Vector ax1 = linspace(sp.range1, sp.resolution[0]);
    const Vector ax2 = linspace(sp.range2, sp.resolution[1]);

    const std::size_t per_cell = plants.size();
    const std::size_t total = ax1.size() * ax2.size() * per_cell;
    std::vector<std::array<double, 6>> rows(total);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    const auto run_one = [&](std::size_t k) {
        const std::size_t i1 = k / (ax2.size() * per_cell);
        const std::size_t i2 = (k / per_cell) % ax2.size();
        const std::size_t pi = k % per_cell;
        const GainTriple g = cell_gains(sp, ax1[i1], ax2[i2]);
        double code, decided, ferr;
        try {
            const Trajectory tr = simulate(plants[pi], g, b_actual, ystar, x0, v0, sim);
            code = tr.verdict == Verdict::converged ? 0.0
                   : tr.verdict == Verdict::diverged ? 1.0
                                                     : 2.0;
            decided = tr.decided_at;
            ferr = tr.err_norm.back();
        } catch (const std::exception&) {
            // Integrator gave up on this cell (stiffness, step budget); the
            // map records it rather than aborting the whole sweep.
            code = 3.0;
            decided = nan;
            ferr = nan;
        }
        rows[k] = {ax1[i1], ax2[i2], static_cast<double>(pi), code, decided, ferr};
    };

    const int jobs = std::max(1, c.jobs);
    if (jobs == 1 || total < 2) {
        for (std::size_t k = 0; k < total; ++k) run_one(k);
    } else {
        const std::size_t workers = std::min<std::size_t>(jobs, total);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < total; k += workers) run_one(k);
            });
        for (auto& th : pool) th.join();
    }

    CsvTable t;
    t.header = {sp.fixed == FixedGain::kp ? "ki" : "kp",
                sp.fixed == FixedGain::kd ? "ki" : "kd",
                "plant",
                "verdict_code",
                "decided_at",
                "final_err_norm"};
    t.rows.reserve(total);
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& r : rows) {
        t.rows.emplace_back(r.begin(), r.end());
        ++counts[static_cast<int>(r[3])];
    }
    const fs::path p = write_artifact(c, "sweep.csv", t);
    out << "wrote " << p.string() << " (" << total << " runs: " << counts[0] << " converged, "
        << counts[1] << " diverged, " << counts[2] << " undecided, " << counts[3]
        << " failed)\n";
    return 0;
}

int cmd_falsify(const json& cfg, const Common& c, std::ostream& out) {
    const ClassBounds bounds = load_bounds(cfg);
    const GainTriple g = load_gains(cfg);
    long long dim = 1;
    if (const json* fj = find(cfg, "falsify")) {
        dim = int_or(*fj, "falsify", "dim", 1);
        if (dim < 1) fail("falsify.dim", "expected a positive integer");
    }
    const SimConfig sim = load_sim(cfg, falsifier_config());
    const Counterexample cx =
        find_counterexample(g, bounds, static_cast<std::size_t>(dim), sim);
    const fs::path p = write_artifact(c, "counterexample.csv", trajectory_table(cx.trajectory));
    out << counterexample_report(cx, g, bounds, p.string());
    return 0;
}

int cmd_class_check(const json& cfg, const Common& c, std::ostream& out) {
    const ClassBounds bounds = load_bounds(cfg);
    const Plant plant = load_plant(cfg, bounds);
    int samples = 2000;
    double halfwidth = 2.0;
    Vector lo, hi;
    if (const json* cc = find(cfg, "class_check")) {
        samples = static_cast<int>(int_or(*cc, "class_check", "samples", samples));
        if (samples < 1) fail("class_check.samples", "expected a positive integer");
        halfwidth = num_or(*cc, "class_check", "box", halfwidth);
        if (const json* l = find(*cc, "lo")) lo = as_vec(*l, "class_check.lo");
        if (const json* h = find(*cc, "hi")) hi = as_vec(*h, "class_check.hi");
    }
    Box domain;
    if (!lo.empty() || !hi.empty()) {
        if (lo.size() != 2 * plant.n || hi.size() != 2 * plant.n)
            fail("class_check.lo", "lo/hi must both have 2n entries");
        domain = Box{std::move(lo), std::move(hi)};
    } else {
        domain = Box{Vector(2 * plant.n, -halfwidth), Vector(2 * plant.n, halfwidth)};
    }
    const std::uint64_t seed = need_seed(cfg, c);
    const MembershipReport rep =
        check_membership(plant, bounds, domain, samples, seed);
    out << membership_report_text(rep, bounds);
    const bool ok = plant.tag == ClassTag::claims_structured ? rep.in_structured_class()
                                                             : rep.in_bounded_class();
    return ok ? 0 : 2;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PID gain regions, Lyapunov certificates, simulation and falsification"};
    app.name("pidstab");
    app.require_subcommand(1);
    Common common;

    const auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "path to a pidstab/v1 JSON config")
            ->required();
        cmd->add_option("--out", common.out_dir, "directory for CSV artifacts (default .)");
        cmd->add_option("--jobs", common.jobs, "worker threads for sweep (default 1)");
        cmd->add_option("--seed", common.seed_override, "override the config seed");
    };

    CLI::App* region = app.add_subcommand("region", "gain-region predicates");
    region->require_subcommand(1);
    CLI::App* region_check =
        region->add_subcommand("check", "verdicts and margins for both regions");
    CLI::App* region_slice =
        region->add_subcommand("slice", "raster both regions over two gain axes to CSV");
    CLI::App* certify = app.add_subcommand("certify", "build and validate a stability certificate");
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "integrate the closed loop and export the trajectory");
    CLI::App* sweep = app.add_subcommand("sweep", "convergence map over a gain grid x plant list");
    CLI::App* falsify =
        app.add_subcommand("falsify", "construct a destabilizing worst-case instance");
    CLI::App* klass = app.add_subcommand("class", "plant class membership");
    klass->require_subcommand(1);
    CLI::App* class_check = klass->add_subcommand("check", "sample-scale membership report");
    for (CLI::App* leaf :
         {region_check, region_slice, certify, simulate_cmd, sweep, falsify, class_check})
        add_common(leaf);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const json cfg = load_config(common.config_path);
        if (region_check->parsed()) return cmd_region_check(cfg, common, out);
        if (region_slice->parsed()) return cmd_region_slice(cfg, common, out);
        if (certify->parsed()) return cmd_certify(cfg, common, out);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg, common, out);
        if (sweep->parsed()) return cmd_sweep(cfg, common, out);
        if (falsify->parsed()) return cmd_falsify(cfg, common, out);
        if (class_check->parsed()) return cmd_class_check(cfg, common, out);
        err << "error: no command selected\n";
        return 1;
    } catch (const RegionError& e) {
        err << "region error: " << e.what() << '\n';
        return 2;
    } catch (const CertificateError& e) {
        err << "certificate error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace pidstab::cli
