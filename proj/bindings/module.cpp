#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "pidstab/certificates.hpp"
#include "pidstab/errors.hpp"
#include "pidstab/falsifier.hpp"
#include "pidstab/io.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace pidstab;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows, const char* what) {
    if (rows.empty()) throw DimensionError(std::string(what) + ": matrix must not be empty");
    const std::size_t r = rows.size();
    const std::size_t c = rows.front().size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw DimensionError(std::string(what) + ": rows must have equal length");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rows from_matrix(const Matrix& m) {
    Rows rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

const char* tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::claims_bounded: return "claims_bounded";
        case ClassTag::claims_structured: return "claims_structured";
        default: return "unchecked";
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PID gain regions, Lyapunov certificates, simulation and falsification";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);
    py::register_exception<NotConservativeError>(m, "NotConservativeError", PyExc_RuntimeError);
    py::register_exception<NotHessianFieldError>(m, "NotHessianFieldError", PyExc_RuntimeError);
    py::register_exception<RegionError>(m, "RegionError", PyExc_RuntimeError);
    py::register_exception<CertificateError>(m, "CertificateError", PyExc_RuntimeError);
    py::register_exception<StiffnessError>(m, "StiffnessError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<ClassBounds>(m, "ClassBounds")
        .def(py::init([](double L1, double L2) {
                 const ClassBounds b{L1, L2};
                 b.validate();
                 return b;
             }),
             "L1"_a, "L2"_a)
        .def_readonly("L1", &ClassBounds::L1)
        .def_readonly("L2", &ClassBounds::L2)
        .def("__repr__", [](const ClassBounds& b) {
            return "ClassBounds(L1=" + std::to_string(b.L1) + ", L2=" + std::to_string(b.L2) +
                   ")";
        });

    py::class_<GainTriple>(m, "GainTriple")
        .def(py::init([](double kp, double ki, double kd, double b_lower) {
                 const GainTriple g{kp, ki, kd, b_lower};
                 g.validate();
                 return g;
             }),
             "kp"_a, "ki"_a, "kd"_a, "b_lower"_a)
        .def_readonly("kp", &GainTriple::kp)
        .def_readonly("ki", &GainTriple::ki)
        .def_readonly("kd", &GainTriple::kd)
        .def_readonly("b_lower", &GainTriple::b_lower);

    py::class_<ScaledGains>(m, "ScaledGains")
        .def_property_readonly("k1", &ScaledGains::k1)
        .def_property_readonly("k0", &ScaledGains::k0)
        .def_property_readonly("k2", &ScaledGains::k2);

    m.def("scale_gains", &scale_gains, "gains"_a, "b"_a);
    m.def("scale_at_lower", &scale_at_lower, "gains"_a);

    py::class_<RegionVerdict>(m, "RegionVerdict")
        .def_readonly("in_region", &RegionVerdict::in_region)
        .def_readonly("margin_k1", &RegionVerdict::margin_k1)
        .def_readonly("margin_k2", &RegionVerdict::margin_k2)
        .def_readonly("margin_k0", &RegionVerdict::margin_k0)
        .def_readonly("margin_product", &RegionVerdict::margin_product)
        .def("min_margin", &RegionVerdict::min_margin);

    m.def("in_omega1", &in_omega1, "scaled"_a, "bounds"_a);
    m.def("in_omega2", &in_omega2, "scaled"_a, "bounds"_a);
    m.def("kbar", &kbar, "ki"_a, "kd"_a, "L2"_a);
    m.def("zeta", &zeta, "alpha"_a, "scaled"_a, "bounds"_a);

    py::class_<RayMonotonicityReport>(m, "RayMonotonicityReport")
        .def_readonly("alphas", &RayMonotonicityReport::alphas)
        .def_readonly("values", &RayMonotonicityReport::values)
        .def_readonly("min_forward_difference", &RayMonotonicityReport::min_forward_difference)
        .def_readonly("passes", &RayMonotonicityReport::passes);

    m.def("check_ray_monotonicity", &check_ray_monotonicity, "scaled"_a, "bounds"_a,
          "alphas"_a);

    py::class_<Plant>(m, "Plant")
        .def_readonly("n", &Plant::n)
        .def_property_readonly("kind", [](const Plant& p) { return to_string(p.kind); })
        .def_property_readonly("tag", [](const Plant& p) { return tag_name(p.tag); })
        .def_readonly("claimed_bounds", &Plant::claimed_bounds)
        .def("f", [](const Plant& p, const Vector& x1, const Vector& x2) { return p.f(x1, x2); },
             "x1"_a, "x2"_a);

    m.def(
        "make_linear_plant",
        [](const Rows& A, const Rows& B, std::optional<Vector> c,
           std::optional<ClassBounds> claimed) {
            const Matrix a = to_matrix(A, "A");
            return make_linear_plant(a, to_matrix(B, "B"),
                                     c ? *c : Vector(a.rows(), 0.0), claimed);
        },
        "A"_a, "B"_a, "c"_a = py::none(), "claimed"_a = py::none());
    m.def(
        "make_worst_case_plant",
        [](std::size_t n, const ClassBounds& bounds, std::optional<Vector> c) {
            return make_worst_case_plant(n, bounds, c ? *c : Vector{});
        },
        "n"_a, "bounds"_a, "c"_a = py::none());
    m.def(
        "make_sinusoidal_plant",
        [](std::size_t n, double a, const Rows& B, std::optional<ClassBounds> claimed) {
            return make_sinusoidal_plant(n, a, to_matrix(B, "B"), claimed);
        },
        "n"_a, "a"_a, "B"_a, "claimed"_a = py::none());

    m.def(
        "jacobians",
        [](const Plant& p, const Vector& x1, const Vector& x2) {
            const auto [j1, j2] = jacobians(p, x1, x2);
            return py::make_tuple(from_matrix(j1), from_matrix(j2));
        },
        "plant"_a, "x1"_a, "x2"_a);

    py::class_<MembershipReport>(m, "MembershipReport")
        .def_readonly("max_stiffness_eig", &MembershipReport::max_stiffness_eig)
        .def_readonly("max_damping_norm", &MembershipReport::max_damping_norm)
        .def_readonly("stiffness_excess", &MembershipReport::stiffness_excess)
        .def_readonly("damping_excess", &MembershipReport::damping_excess)
        .def_readonly("max_force_asymmetry", &MembershipReport::max_force_asymmetry)
        .def_readonly("max_velocity_curvature", &MembershipReport::max_velocity_curvature)
        .def_readonly("max_damping_asymmetry", &MembershipReport::max_damping_asymmetry)
        .def_readonly("max_integrability_residual",
                      &MembershipReport::max_integrability_residual)
        .def_readonly("stiffness_bounded", &MembershipReport::stiffness_bounded)
        .def_readonly("damping_bounded", &MembershipReport::damping_bounded)
        .def_readonly("force_conservative", &MembershipReport::force_conservative)
        .def_readonly("velocity_affine", &MembershipReport::velocity_affine)
        .def_readonly("damping_hessian_field", &MembershipReport::damping_hessian_field)
        .def("in_bounded_class", &MembershipReport::in_bounded_class)
        .def("in_structured_class", &MembershipReport::in_structured_class);

    m.def(
        "check_membership",
        [](const Plant& p, const ClassBounds& bounds, const Vector& lo, const Vector& hi,
           int samples, std::uint64_t seed) {
            return check_membership(p, bounds, Box{lo, hi}, samples, seed);
        },
        "plant"_a, "bounds"_a, "lo"_a, "hi"_a, "samples"_a, "seed"_a);

    py::enum_<CertMode>(m, "CertMode")
        .value("theorem1", CertMode::theorem1)
        .value("proposition1", CertMode::proposition1);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("mode", &Certificate::mode)
        .def_readonly("phi0", &Certificate::phi0)
        .def_readonly("psi0", &Certificate::psi0)
        .def_readonly("psi1", &Certificate::psi1)
        .def_readonly("psi", &Certificate::psi)
        .def_readonly("mu", &Certificate::mu)
        .def_readonly("ystar", &Certificate::ystar)
        .def_property_readonly("P",
                               [](const Certificate& c) { return from_matrix(c.P.as_matrix()); })
        .def_property_readonly("n", &Certificate::n);

    m.def("build_certificate", &build_certificate, "scaled"_a, "bounds"_a, "plant"_a,
          "ystar"_a, "mode"_a);

    py::class_<InequalityMargin>(m, "InequalityMargin")
        .def_readonly("name", &InequalityMargin::name)
        .def_readonly("margin", &InequalityMargin::margin);

    py::class_<CertificateCheck>(m, "CertificateCheck")
        .def_readonly("inequalities", &CertificateCheck::inequalities)
        .def_readonly("p_min_eig", &CertificateCheck::p_min_eig)
        .def_readonly("positive_definite", &CertificateCheck::positive_definite);

    m.def("check_P", &check_P, "certificate"_a);

    py::class_<Decomposition>(m, "Decomposition")
        .def_property_readonly("B", [](const Decomposition& d) { return from_matrix(d.B); })
        .def_property_readonly("A", [](const Decomposition& d) { return from_matrix(d.A); })
        .def_readonly("residual", &Decomposition::residual);

    m.def("decompose_g", &decompose_g, "plant"_a, "ystar"_a, "y"_a, "z"_a,
          "quad_order"_a = 16);

    m.def("eval_H", &eval_H, "certificate"_a, "y"_a);
    m.def("eval_Hpsi", &eval_Hpsi, "certificate"_a, "y"_a);
    m.def("eval_V", &eval_V, "certificate"_a, "state"_a);
    m.def("q_min_eig", &q_min_eig, "certificate"_a, "y"_a, "z"_a);

    py::enum_<Integrator>(m, "Integrator")
        .value("rk4_fixed", Integrator::rk4_fixed)
        .value("rk45_adaptive", Integrator::rk45_adaptive);

    py::enum_<Verdict>(m, "Verdict")
        .value("converged", Verdict::converged)
        .value("diverged", Verdict::diverged)
        .value("undecided", Verdict::undecided);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("integrator", &SimConfig::integrator)
        .def_readwrite("fixed_step", &SimConfig::fixed_step)
        .def_readwrite("abs_tol", &SimConfig::abs_tol)
        .def_readwrite("rel_tol", &SimConfig::rel_tol)
        .def_readwrite("max_step", &SimConfig::max_step)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("divergence_threshold", &SimConfig::divergence_threshold)
        .def_readwrite("convergence_tol", &SimConfig::convergence_tol)
        .def_readwrite("dwell", &SimConfig::dwell)
        .def_readwrite("checkpoints", &SimConfig::checkpoints)
        .def_readwrite("max_steps", &SimConfig::max_steps)
        .def("validate", &SimConfig::validate);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("t", &Trajectory::t)
        .def_readonly("x_int", &Trajectory::x_int)
        .def_readonly("x1", &Trajectory::x1)
        .def_readonly("x2", &Trajectory::x2)
        .def_readonly("u", &Trajectory::u)
        .def_readonly("err_norm", &Trajectory::err_norm)
        .def_readonly("verdict", &Trajectory::verdict)
        .def_readonly("decided_at", &Trajectory::decided_at)
        .def_readonly("warning", &Trajectory::warning)
        .def("__len__", &Trajectory::size);

    m.def("simulate", &simulate, "plant"_a, "gains"_a, "b_actual"_a, "ystar"_a, "x0"_a,
          "v0"_a, "config"_a = SimConfig{});
    m.def("classify", &classify, "trajectory"_a, "config"_a);

    py::class_<TransformedState>(m, "TransformedState")
        .def_readonly("x", &TransformedState::x)
        .def_readonly("y", &TransformedState::y)
        .def_readonly("z", &TransformedState::z);

    m.def("transform_state", &transform_state, "plant"_a, "scaled"_a, "ystar"_a, "x1"_a,
          "x2"_a, "x_int"_a);
    m.def("v_series", &v_series, "certificate"_a, "trajectory"_a);

    py::class_<VdotSeries>(m, "VdotSeries")
        .def_readonly("t", &VdotSeries::t)
        .def_readonly("value", &VdotSeries::value)
        .def_readonly("max_value", &VdotSeries::max_value);

    m.def("vdot_along", &vdot_along, "certificate"_a, "trajectory"_a);

    py::class_<CubicPoly>(m, "CubicPoly")
        .def(py::init([](double a2, double a1, double a0) {
                 return CubicPoly{a2, a1, a0};
             }),
             "a2"_a, "a1"_a, "a0"_a)
        .def_readonly("a2", &CubicPoly::a2)
        .def_readonly("a1", &CubicPoly::a1)
        .def_readonly("a0", &CubicPoly::a0);

    m.def("worst_case_poly", &worst_case_poly, "gains"_a, "b"_a, "bounds"_a);
    m.def("hurwitz_cubic", &hurwitz_cubic, "poly"_a);
    m.def("cubic_roots", &cubic_roots, "poly"_a);

    py::class_<Counterexample>(m, "Counterexample")
        .def_readonly("plant", &Counterexample::plant)
        .def_readonly("b", &Counterexample::b)
        .def_readonly("ystar", &Counterexample::ystar)
        .def_readonly("x0", &Counterexample::x0)
        .def_readonly("v0", &Counterexample::v0)
        .def_readonly("poly", &Counterexample::poly)
        .def_readonly("roots", &Counterexample::roots)
        .def_readonly("max_real_part", &Counterexample::max_real_part)
        .def_readonly("failed_inequality", &Counterexample::failed_inequality)
        .def_readonly("failed_margin", &Counterexample::failed_margin)
        .def_readonly("trajectory", &Counterexample::trajectory);

    m.def("falsifier_config", &falsifier_config);
    m.def("find_counterexample", &find_counterexample, "gains"_a, "bounds"_a, "dim"_a = 1,
          "config"_a = falsifier_config());
}
