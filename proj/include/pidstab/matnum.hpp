#pragma once

#include <cstddef>
#include <vector>

namespace pidstab {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
bool all_finite(const Vector& x);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& x, double a);
/// y += a*x
void axpy(double a, const Vector& x, Vector& y);

/// Dense row-major real matrix. Small orders only; no sparse path.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double a);
    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix lhs, double a) { return lhs *= a; }
    friend Matrix operator*(double a, Matrix rhs) { return rhs *= a; }

    Matrix operator*(const Matrix& rhs) const;
    Vector operator*(const Vector& x) const;

    Matrix transposed() const;
    double frobenius_norm() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix with entries[i][j] == entries[j][i] exactly: every write
/// mirrors, so symmetry holds by construction rather than by check.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n, double fill = 0.0) : m_(n, n, fill) {}

    static SymMatrix identity(std::size_t n);

    std::size_t order() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& as_matrix() const { return m_; }
    Vector operator*(const Vector& x) const { return m_ * x; }

    SymMatrix& operator+=(const SymMatrix& rhs);
    SymMatrix& operator*=(double a);
    friend SymMatrix operator+(SymMatrix lhs, const SymMatrix& rhs) { return lhs += rhs; }
    friend SymMatrix operator*(SymMatrix lhs, double a) { return lhs *= a; }

private:
    Matrix m_;
};

/// (M + M^T)/2. Throws DimensionError for non-square input.
SymMatrix sym_part(const Matrix& M);

double quadratic_form(const SymMatrix& S, const Vector& x);

struct EigExtremes {
    double min;
    double max;
};

struct EigSym {
    Vector values;   // ascending
    Matrix vectors;  // columns, same order as values
};

/// Full symmetric eigensolve by cyclic Jacobi sweeps. Unconditionally
/// convergent for symmetric input; intended for the small orders used here.
EigSym eig_sym(const SymMatrix& S);

EigExtremes eig_extremes(const SymMatrix& S);

/// sqrt(lambda_max(M^T M)); accepts rectangular input.
double spectral_norm(const Matrix& M);

struct DefinitenessReport {
    bool positive_definite;
    double min_pivot;  // smallest accepted pivot, or the pivot that failed
    double scale;      // max |diagonal|, the reference for the tolerance band
};

/// Diagonal-pivoted Cholesky. Pivots must clear 1e-12 * scale, so verdicts
/// inside that band around singularity are unspecified; callers that care use
/// the signed min_pivot.
DefinitenessReport definiteness(const SymMatrix& S);
bool is_positive_definite(const SymMatrix& S);

/// C (x) I_n for a symmetric 3x3 C: the order-3n matrix of blocks C[i][j]*I_n.
SymMatrix kron3_with_identity(const SymMatrix& C, std::size_t n);

}  // namespace pidstab
