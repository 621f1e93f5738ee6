#include "pidstab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "pidstab/errors.hpp"

namespace pidstab {

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

double parse_double(const std::string& token) {
    if (token.empty()) throw ConfigError("empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size())
        throw ConfigError("malformed number: '" + token + "'");
    return v;
}

void write_csv(std::ostream& out, const CsvTable& t) {
    if (t.header.empty()) throw DomainError("csv table must have a header");
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i].empty() || t.header[i].find_first_of(",\n\r") != std::string::npos)
            throw DomainError("csv header field '" + t.header[i] + "' is not writable");
        out << (i ? "," : "") << t.header[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size())
            throw DomainError("csv row width " + std::to_string(row.size()) +
                              " does not match the header width " +
                              std::to_string(t.header.size()));
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_sci(row[i]);
        out << '\n';
    }
}

std::string csv_string(const CsvTable& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

namespace {

std::vector<std::string> split_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv input is empty");
    CsvTable t;
    t.header = split_line(std::move(line));
    for (const auto& name : t.header)
        if (name.empty()) throw ConfigError("csv header has an empty field");

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::vector<std::string> cells = split_line(std::move(line));
        if (cells.size() != t.header.size())
            throw ConfigError("csv line " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " fields, expected " +
                              std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable slice_table(const GainSlice& s) {
    CsvTable t;
    t.header = {s.axis1, s.axis2, "in_omega1", "in_omega2", "gap1", "gap2"};
    t.rows.reserve(s.cells.size());
    std::size_t k = 0;
    for (double a1 : s.axis1_values)
        for (double a2 : s.axis2_values) {
            const SliceCell& c = s.cells[k++];
            t.rows.push_back({a1, a2, c.omega1.in_region ? 1.0 : 0.0,
                              c.omega2.in_region ? 1.0 : 0.0, c.omega1.margin_product,
                              c.omega2.margin_product});
        }
    return t;
}

CsvTable trajectory_table(const Trajectory& tr, const std::vector<double>* v) {
    if (tr.size() == 0) throw DomainError("cannot export an empty trajectory");
    const std::size_t n = tr.x1.front().size();
    if (v && v->size() != tr.size())
        throw DimensionError("V series length does not match the trajectory");

    CsvTable t;
    t.header.push_back("t");
    for (std::size_t i = 1; i <= n; ++i) t.header.push_back("x1_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) t.header.push_back("x2_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) t.header.push_back("u_" + std::to_string(i));
    t.header.push_back("err_norm");
    if (v) t.header.push_back("V");

    for (std::size_t k = 0; k < tr.size(); ++k) {
        std::vector<double> row;
        row.reserve(t.header.size());
        row.push_back(tr.t[k]);
        row.insert(row.end(), tr.x1[k].begin(), tr.x1[k].end());
        row.insert(row.end(), tr.x2[k].begin(), tr.x2[k].end());
        row.insert(row.end(), tr.u[k].begin(), tr.u[k].end());
        row.push_back(tr.err_norm[k]);
        if (v) row.push_back((*v)[k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

std::size_t count_prefixed(const std::vector<std::string>& header, std::size_t from,
                           const std::string& prefix) {
    std::size_t n = 0;
    while (from + n < header.size() &&
           header[from + n] == prefix + std::to_string(n + 1))
        ++n;
    return n;
}

}  // namespace

TrajectoryExport trajectory_from_table(const CsvTable& t) {
    if (t.header.empty() || t.header[0] != "t")
        throw ConfigError("trajectory table must start with a 't' column");
    const std::size_t n = count_prefixed(t.header, 1, "x1_");
    if (n == 0) throw ConfigError("trajectory table has no x1_* columns");
    if (count_prefixed(t.header, 1 + n, "x2_") != n ||
        count_prefixed(t.header, 1 + 2 * n, "u_") != n)
        throw ConfigError("trajectory table must carry x2_* and u_* blocks of the x1_* width");
    const std::size_t err_col = 1 + 3 * n;
    if (err_col >= t.header.size() || t.header[err_col] != "err_norm")
        throw ConfigError("trajectory table is missing the err_norm column");
    const bool has_v = t.header.size() == err_col + 2 && t.header[err_col + 1] == "V";
    if (!has_v && t.header.size() != err_col + 1)
        throw ConfigError("trajectory table has unexpected trailing columns");

    TrajectoryExport ex;
    for (const auto& row : t.rows) {
        ex.t.push_back(row[0]);
        ex.x1.emplace_back(row.begin() + 1, row.begin() + 1 + n);
        ex.x2.emplace_back(row.begin() + 1 + n, row.begin() + 1 + 2 * n);
        ex.u.emplace_back(row.begin() + 1 + 2 * n, row.begin() + 1 + 3 * n);
        ex.err_norm.push_back(row[err_col]);
        if (has_v) ex.v.push_back(row[err_col + 1]);
    }
    return ex;
}

namespace {

void print_verdict(std::ostringstream& os, const char* label, const RegionVerdict& v) {
    os << label << ": in_region=" << (v.in_region ? "yes" : "no")
       << " margins: k1-L1=" << format_sci(v.margin_k1) << " k2-L2=" << format_sci(v.margin_k2)
       << " k0=" << format_sci(v.margin_k0) << " product=" << format_sci(v.margin_product)
       << '\n';
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string region_report(const ScaledGains& s, const ClassBounds& b) {
    std::ostringstream os;
    os << "region check (pidstab/v1)\n";
    os << "bounds: L1=" << format_sci(b.L1) << " L2=" << format_sci(b.L2) << '\n';
    os << "scaled gains: k1=" << format_sci(s.k1()) << " k0=" << format_sci(s.k0())
       << " k2=" << format_sci(s.k2()) << '\n';
    print_verdict(os, "omega1 (sufficient)", in_omega1(s, b));
    print_verdict(os, "omega2 (necessary)", in_omega2(s, b));
    return os.str();
}

const char* to_string(PlantKind k) {
    switch (k) {
        case PlantKind::linear: return "linear";
        case PlantKind::worst_case: return "worst_case";
        case PlantKind::sinusoidal: return "sinusoidal";
        case PlantKind::gradient: return "gradient";
    }
    return "unknown";
}

std::string certificate_report(const Certificate& c, const CertificateCheck& chk,
                               const CertifySamples& samples) {
    std::ostringstream os;
    os << "certificate (pidstab/v1)\n";
    os << "mode: " << to_string(c.mode) << '\n';
    os << "plant: kind=" << to_string(c.plant.kind) << " n=" << c.n() << '\n';
    os << "scaled gains: k1=" << format_sci(c.gains.k1()) << " k0=" << format_sci(c.gains.k0())
       << " k2=" << format_sci(c.gains.k2()) << '\n';
    os << "bounds: L1=" << format_sci(c.bounds.L1) << " L2=" << format_sci(c.bounds.L2) << '\n';
    os << "constants: phi0=" << format_sci(c.phi0) << " psi0=" << format_sci(c.psi0)
       << " psi1=" << format_sci(c.psi1) << " psi=" << format_sci(c.psi)
       << " mu=" << format_sci(c.mu) << '\n';
    os << "inequality margins:\n";
    for (const auto& m : chk.inequalities)
        os << "  " << m.name << ": " << format_sci(m.margin) << '\n';
    os << "P minimum eigenvalue: " << format_sci(chk.p_min_eig) << '\n';
    if (samples.q_states > 0) {
        os << "sampled min of smallest Q eigenvalue (" << samples.q_states << " states in [-"
           << format_sci(samples.sample_box) << ", " << format_sci(samples.sample_box)
           << "]): " << format_sci(samples.q_min) << '\n';
    } else {
        os << "sampled min of smallest Q eigenvalue: not evaluated in " << to_string(c.mode)
           << " mode\n";
    }
    os << "sampled max dV/dt along trajectory (" << samples.vdot_samples
       << " interior samples): " << format_sci(samples.vdot_max) << '\n';
    return os.str();
}

std::string counterexample_report(const Counterexample& cx, const GainTriple& g,
                                  const ClassBounds& bounds, const std::string& trajectory_path) {
    std::ostringstream os;
    os << "counterexample (pidstab/v1)\n";
    os << "gains: kp=" << format_sci(g.kp) << " ki=" << format_sci(g.ki)
       << " kd=" << format_sci(g.kd) << " b_lower=" << format_sci(g.b_lower) << '\n';
    os << "bounds: L1=" << format_sci(bounds.L1) << " L2=" << format_sci(bounds.L2) << '\n';
    os << "b: " << format_sci(cx.b) << '\n';
    os << "error polynomial: s^3 + a2 s^2 + a1 s + a0 with a2=" << format_sci(cx.poly.a2)
       << " a1=" << format_sci(cx.poly.a1) << " a0=" << format_sci(cx.poly.a0) << '\n';
    os << "roots:\n";
    for (const auto& r : cx.roots)
        os << "  re=" << format_sci(r.real()) << " im=" << format_sci(r.imag()) << '\n';
    os << "max real part: " << format_sci(cx.max_real_part) << '\n';
    os << "failed inequality: " << cx.failed_inequality
       << " (margin " << format_sci(cx.failed_margin) << ")\n";
    os << "trajectory: " << trajectory_path << " (verdict " << to_string(cx.trajectory.verdict)
       << ", decided at t=" << format_sci(cx.trajectory.decided_at) << ")\n";
    return os.str();
}

std::string membership_report_text(const MembershipReport& r, const ClassBounds& bounds) {
    std::ostringstream os;
    os << "class membership (pidstab/v1)\n";
    os << "bounds: L1=" << format_sci(bounds.L1) << " L2=" << format_sci(bounds.L2) << '\n';
    os << "max stiffness eigenvalue: " << format_sci(r.max_stiffness_eig)
       << " (excess " << format_sci(r.stiffness_excess) << ", within bound "
       << yesno(r.stiffness_bounded) << ")\n";
    os << "max damping norm: " << format_sci(r.max_damping_norm) << " (excess "
       << format_sci(r.damping_excess) << ", within bound " << yesno(r.damping_bounded) << ")\n";
    os << "max force asymmetry: " << format_sci(r.max_force_asymmetry) << " (conservative "
       << yesno(r.force_conservative) << ")\n";
    os << "max velocity curvature: " << format_sci(r.max_velocity_curvature)
       << " (affine in velocity " << yesno(r.velocity_affine) << ")\n";
    os << "max damping asymmetry: " << format_sci(r.max_damping_asymmetry) << '\n';
    os << "max integrability residual: " << format_sci(r.max_integrability_residual)
       << " (damping is a Hessian field " << yesno(r.damping_hessian_field) << ")\n";
    os << "bounded class: " << yesno(r.in_bounded_class()) << '\n';
    os << "structured class: " << yesno(r.in_structured_class()) << '\n';
    return os.str();
}

}  // namespace pidstab
