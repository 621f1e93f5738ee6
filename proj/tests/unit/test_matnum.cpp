#include "pidstab/matnum.hpp"

#include <cmath>

#include "doctest.h"
#include "pidstab/errors.hpp"
#include "test_support.hpp"

using namespace pidstab;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

SymMatrix diag(const Vector& d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

double frob_diff(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

}  // namespace

TEST_CASE("sym_part halves the antisymmetric component") {
    const SymMatrix s = sym_part(mat2(0, 2, 0, 0));
    CHECK(s(0, 0) == 0.0);
    CHECK(s(0, 1) == 1.0);
    CHECK(s(1, 0) == 1.0);
    CHECK(s(1, 1) == 0.0);
}

TEST_CASE("sym_part fixes symmetric matrices") {
    const Matrix m = mat2(2, -1, -1, 5);
    const SymMatrix s = sym_part(m);
    CHECK(frob_diff(s.as_matrix(), m) == 0.0);
}

TEST_CASE("sym_part on a generic matrix") {
    const SymMatrix s = sym_part(mat2(1, 4, 2, 3));
    CHECK(s(0, 0) == 1.0);
    CHECK(s(0, 1) == 3.0);
    CHECK(s(1, 0) == 3.0);
    CHECK(s(1, 1) == 3.0);
}

TEST_CASE("sym_part rejects non-square input") {
    CHECK_THROWS_AS(sym_part(Matrix(2, 3)), DimensionError);
}

TEST_CASE("eig_extremes on simple spectra") {
    SUBCASE("identity") {
        const EigExtremes e = eig_extremes(SymMatrix::identity(3));
        CHECK(e.min == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.max == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("diagonal") {
        const EigExtremes e = eig_extremes(diag({-2.0, 5.0}));
        CHECK(e.min == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(e.max == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("coupled 2x2") {
        // [[2,1],[1,2]] has characteristic roots 1 and 3.
        SymMatrix s(2);
        s.set(0, 0, 2.0);
        s.set(1, 1, 2.0);
        s.set(0, 1, 1.0);
        const EigExtremes e = eig_extremes(s);
        CHECK(e.min == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.max == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("eig_sym reconstructs and stays orthogonal") {
    auto g = testutil::rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 10);
        const SymMatrix s = testutil::random_sym(g, n, 5.0);
        const EigSym e = eig_sym(s);

        Matrix vdvt(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    acc += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
                vdvt(i, j) = acc;
            }
        const double scale = s.as_matrix().frobenius_norm() + 1.0;
        CHECK(frob_diff(vdvt, s.as_matrix()) <= 1e-12 * scale);

        const Matrix vtv = e.vectors.transposed() * e.vectors;
        CHECK(frob_diff(vtv, Matrix::identity(n)) <= 1e-12 * n);

        for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] <= e.values[k]);
    }
}

TEST_CASE("rayleigh quotients stay inside the eigenvalue range") {
    auto g = testutil::rng(23);
    int checked = 0;
    while (checked < 1000) {
        const std::size_t n = 2 + static_cast<std::size_t>(checked % 7);
        const SymMatrix s = testutil::random_sym(g, n, 3.0);
        const EigExtremes e = eig_extremes(s);
        for (int i = 0; i < 25 && checked < 1000; ++i, ++checked) {
            const Vector x = testutil::random_unit(g, n);
            const double q = quadratic_form(s, x);
            CHECK(q >= e.min - 1e-10);
            CHECK(q <= e.max + 1e-10);
        }
    }
}

TEST_CASE("spectral_norm on known matrices") {
    CHECK(spectral_norm(Matrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_norm(diag({3.0, -4.0}).as_matrix()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(spectral_norm(mat2(0, 2, 0, 0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm dominates sampled operator values and is attained") {
    auto g = testutil::rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const Matrix m = testutil::random_matrix(g, n, n, -2.0, 2.0);
        const double nrm = spectral_norm(m);

        double sampled = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Vector x = testutil::random_unit(g, n);
            sampled = std::max(sampled, norm2(m * x));
        }
        CHECK(sampled <= nrm + 1e-6);

        // The top eigenvector of M^T M attains the norm.
        const EigSym e = eig_sym(sym_part(m.transposed() * m));
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = e.vectors(i, n - 1);
        CHECK(norm2(m * v) == doctest::Approx(nrm).epsilon(1e-10));
    }
}

TEST_CASE("is_positive_definite on fixed cases") {
    CHECK(is_positive_definite(SymMatrix::identity(3)));
    CHECK_FALSE(is_positive_definite(diag({1.0, -1.0})));

    // Core matrix of a quadratic Lyapunov candidate: leading principal minors
    // 0.9, 5.03, 4.301 are all positive.
    SymMatrix c(3);
    c.set(0, 0, 0.9);
    c.set(0, 1, 1.0);
    c.set(1, 1, 6.7);
    c.set(1, 2, 0.9);
    c.set(2, 2, 1.0);
    CHECK(is_positive_definite(c));
}

TEST_CASE("definiteness reports the failing pivot") {
    const DefinitenessReport r = definiteness(diag({1.0, -1.0}));
    CHECK_FALSE(r.positive_definite);
    CHECK(r.min_pivot == doctest::Approx(-1.0));

    const DefinitenessReport ok = definiteness(SymMatrix::identity(2));
    CHECK(ok.positive_definite);
    CHECK(ok.min_pivot == doctest::Approx(1.0));
}

TEST_CASE("is_positive_definite agrees with the eigenvalue sign") {
    auto g = testutil::rng(53);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
        SymMatrix s = testutil::random_sym(g, n, 2.0);
        // Shift about half the samples toward definiteness so both verdicts
        // are well represented.
        if (trial % 2 == 0) {
            const double shift = testutil::urand(g, 0.5, 3.0);
            for (std::size_t i = 0; i < n; ++i) s.set(i, i, s(i, i) + shift + n);
        }
        const double lmin = eig_extremes(s).min;
        const double band = 1e-12 * (s.as_matrix().frobenius_norm() + 1.0);
        if (std::abs(lmin) <= band) continue;  // verdict unspecified inside the band
        CHECK(is_positive_definite(s) == (lmin > 0.0));
    }
}

TEST_CASE("kron3_with_identity block structure") {
    SUBCASE("identity stays identity") {
        const SymMatrix k = kron3_with_identity(SymMatrix::identity(3), 2);
        CHECK(frob_diff(k.as_matrix(), Matrix::identity(6)) == 0.0);
    }
    SUBCASE("n=1 is the identity of the product") {
        SymMatrix c(3);
        c.set(0, 1, 1.0);
        const SymMatrix k = kron3_with_identity(c, 1);
        CHECK(frob_diff(k.as_matrix(), c.as_matrix()) == 0.0);
    }
    SUBCASE("rejects bad sizes") {
        CHECK_THROWS_AS(kron3_with_identity(SymMatrix::identity(2), 2), DimensionError);
        CHECK_THROWS_AS(kron3_with_identity(SymMatrix::identity(3), 0), DimensionError);
    }
}

TEST_CASE("kron3_with_identity replicates the base spectrum") {
    SymMatrix c(3);
    c.set(0, 0, 2.0);
    c.set(0, 1, 1.0);
    c.set(1, 1, 3.0);
    c.set(1, 2, 1.0);
    c.set(2, 2, 4.0);
    const EigSym base = eig_sym(c);

    const std::size_t n = 3;
    const EigSym big = eig_sym(kron3_with_identity(c, n));
    REQUIRE(big.values.size() == 3 * n);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t r = 0; r < n; ++r)
            CHECK(big.values[i * n + r] == doctest::Approx(base.values[i]).epsilon(1e-12));

    CHECK(eig_extremes(kron3_with_identity(c, 5)).min ==
          doctest::Approx(base.values.front()).epsilon(1e-12));
}

TEST_CASE("vector helpers") {
    const Vector a{1.0, 2.0, 3.0};
    const Vector b{-1.0, 0.5, 2.0};
    CHECK(dot(a, b) == doctest::Approx(6.0));
    CHECK(norm2({3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(norm_inf({-7.0, 2.0}) == 7.0);
    CHECK(all_finite(a));
    CHECK_FALSE(all_finite({1.0, std::nan("")}));

    Vector y = a;
    axpy(2.0, b, y);
    CHECK(y[0] == doctest::Approx(-1.0));
    CHECK(y[2] == doctest::Approx(7.0));
    CHECK_THROWS_AS(dot(a, {1.0}), DimensionError);
}
