#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pidstab/certificates.hpp"
#include "pidstab/falsifier.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"

namespace pidstab {

/// Scientific notation with 17 significant digits, enough to round-trip an
/// IEEE double exactly. Every float the tool emits goes through this.
std::string format_sci(double v);

/// Strict parser: the whole token must be a number (inf/nan included).
double parse_double(const std::string& token);

/// Rectangular numeric table. The writers/readers below keep byte-identical
/// output for identical input, which is what makes artifacts diffable.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& t);
std::string csv_string(const CsvTable& t);
CsvTable read_csv(std::istream& in);

/// Columns: axis1, axis2, in_omega1, in_omega2, gap1, gap2. Row-major with
/// axis1 as the slow index; verdicts encoded 0/1; gaps are product margins.
CsvTable slice_table(const GainSlice& s);

/// Columns: t, x1_1..x1_n, x2_1..x2_n, u_1..u_n, err_norm and optionally V.
/// The integral state is internal and not exported.
CsvTable trajectory_table(const Trajectory& tr, const std::vector<double>* v = nullptr);

/// Series recovered from a trajectory table; v is empty when there was no V
/// column.
struct TrajectoryExport {
    std::vector<double> t;
    std::vector<Vector> x1;
    std::vector<Vector> x2;
    std::vector<Vector> u;
    std::vector<double> err_norm;
    std::vector<double> v;
};

TrajectoryExport trajectory_from_table(const CsvTable& t);

std::string region_report(const ScaledGains& s, const ClassBounds& b);

/// Sampled diagnostics accompanying a certificate report. q_states == 0 means
/// the Q sweep was not run (it has no meaning in proposition1 mode).
struct CertifySamples {
    int q_states = 0;
    double q_min = 0.0;
    double sample_box = 0.0;
    std::size_t vdot_samples = 0;
    double vdot_max = 0.0;
};

std::string certificate_report(const Certificate& c, const CertificateCheck& chk,
                               const CertifySamples& samples);

std::string counterexample_report(const Counterexample& cx, const GainTriple& g,
                                  const ClassBounds& bounds, const std::string& trajectory_path);

std::string membership_report_text(const MembershipReport& r, const ClassBounds& bounds);

const char* to_string(PlantKind k);

}  // namespace pidstab
