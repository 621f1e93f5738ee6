#include "pidstab/matnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pidstab/errors.hpp"

namespace pidstab {

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Vector& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vector add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("add: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("sub: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector scaled(const Vector& x, double a) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

void axpy(double a, const Vector& x, Vector& y) {
    if (x.size() != y.size()) throw DimensionError("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionError("matrix *: inner dimension mismatch");
    Matrix r(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) r(i, j) += aik * rhs(k, j);
        }
    return r;
}

Vector Matrix::operator*(const Vector& x) const {
    if (cols_ != x.size()) throw DimensionError("matvec: dimension mismatch");
    Vector r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Matrix Matrix::transposed() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& rhs) {
    m_ += rhs.m_;
    return *this;
}

SymMatrix& SymMatrix::operator*=(double a) {
    m_ *= a;
    return *this;
}

SymMatrix sym_part(const Matrix& M) {
    if (!M.square()) throw DimensionError("sym_part: matrix must be square");
    const std::size_t n = M.rows();
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.set(i, i, M(i, i));
        for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, 0.5 * (M(i, j) + M(j, i)));
    }
    return s;
}

double quadratic_form(const SymMatrix& S, const Vector& x) {
    if (S.order() != x.size()) throw DimensionError("quadratic_form: dimension mismatch");
    return dot(x, S * x);
}

namespace {

double offdiag_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return s;
}

}  // namespace

EigSym eig_sym(const SymMatrix& S) {
    const std::size_t n = S.order();
    Matrix a = S.as_matrix();
    Matrix v = Matrix::identity(n);
    if (!a.all_finite()) throw DomainError("eig_sym: non-finite entries");

    const double scale = a.frobenius_norm();
    const double stop = scale > 0.0 ? 1e-15 * scale : 0.0;

    const int max_sweeps = 64;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (std::sqrt(2.0 * offdiag_sq(a)) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation zeroing a(p,q); t chosen via the stable root of
                // t^2 + 2t*theta - 1 = 0 so |t| <= 1.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = arp - s * (arq + tau * arp);
                        a(r, q) = arq + s * (arp - tau * arq);
                        a(p, r) = a(r, p);
                        a(q, r) = a(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if (sweep == max_sweeps) throw NumericError("eig_sym: Jacobi sweeps failed to converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigSym out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

EigExtremes eig_extremes(const SymMatrix& S) {
    if (S.order() == 0) throw DimensionError("eig_extremes: empty matrix");
    const EigSym e = eig_sym(S);
    return {e.values.front(), e.values.back()};
}

double spectral_norm(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0.0;
    if (!M.all_finite()) throw DomainError("spectral_norm: non-finite entries");
    const Matrix g = M.transposed() * M;
    const double lmax = eig_extremes(sym_part(g)).max;
    return std::sqrt(std::max(lmax, 0.0));
}

DefinitenessReport definiteness(const SymMatrix& S) {
    const std::size_t n = S.order();
    Matrix a = S.as_matrix();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    const double tol = 1e-12 * scale;

    // Outer-product Cholesky with symmetric diagonal pivoting. The permuted
    // factorization exists iff S is positive definite; the first pivot at or
    // below the tolerance band ends the factorization.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double min_pivot = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    bool positive = true;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (a(perm[i], perm[i]) > a(perm[best], perm[best])) best = i;
        std::swap(perm[k], perm[best]);

        const double pivot = a(perm[k], perm[k]);
        min_pivot = std::min(min_pivot, pivot);
        if (!(pivot > tol)) {
            positive = false;
            break;
        }
        // Rank-1 update of the trailing block on both triangles at once; the
        // expression is symmetric in (i, j) so exact symmetry is preserved.
        for (std::size_t i = k + 1; i < n; ++i) {
            const double lik = a(perm[i], perm[k]) / pivot;
            for (std::size_t j = k + 1; j < n; ++j)
                a(perm[i], perm[j]) -= lik * a(perm[j], perm[k]);
        }
    }
    return {positive, min_pivot, scale};
}

bool is_positive_definite(const SymMatrix& S) { return definiteness(S).positive_definite; }

SymMatrix kron3_with_identity(const SymMatrix& C, std::size_t n) {
    if (C.order() != 3) throw DimensionError("kron3_with_identity: C must be 3x3");
    if (n < 1) throw DimensionError("kron3_with_identity: n must be >= 1");
    SymMatrix out(3 * n);
    for (std::size_t bi = 0; bi < 3; ++bi)
        for (std::size_t bj = bi; bj < 3; ++bj) {
            const double c = C(bi, bj);
            if (c == 0.0) continue;
            for (std::size_t r = 0; r < n; ++r) out.set(bi * n + r, bj * n + r, c);
        }
    return out;
}

}  // namespace pidstab
