#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdnm::linalg {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};
struct NonFiniteData : std::invalid_argument {
    explicit NonFiniteData(const std::string& msg) : std::invalid_argument(msg) {}
};
struct NotSymmetric : std::invalid_argument {
    explicit NotSymmetric(const std::string& msg) : std::invalid_argument(msg) {}
};
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& msg) : std::runtime_error(msg) {}
};
struct Singular : std::runtime_error {
    explicit Singular(const std::string& msg) : std::runtime_error(msg) {}
};
struct CsvFormatError : std::runtime_error {
    explicit CsvFormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dense column vector of doubles.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double fill = 0.0) : e_(dim, fill) {}

    /// Validating factory: rejects NaN/Inf entries.
    static Vector from(std::vector<double> entries);

    std::size_t dim() const { return e_.size(); }
    double& operator[](std::size_t i) { return e_[i]; }
    double operator[](std::size_t i) const { return e_[i]; }
    const std::vector<double>& entries() const { return e_; }

    double dot(const Vector& other) const;
    double norm2() const;
    double norm1() const;
    double norm_inf() const;

    /// this += a * v
    void axpy(double a, const Vector& v);
    void scale(double a);

    Vector& operator+=(const Vector& v);
    Vector& operator-=(const Vector& v);

private:
    std::vector<double> e_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double a, Vector v);
Vector operator-(Vector v);

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

    /// Validating factory: checks length and finiteness.
    static Matrix from(std::size_t rows, std::size_t cols, std::vector<double> entries);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    const double* row_data(std::size_t i) const { return e_.data() + i * cols_; }
    double* row_data(std::size_t i) { return e_.data() + i * cols_; }

    Vector matvec(const Vector& v) const;        // A v
    Vector tmatvec(const Vector& v) const;       // A^T v
    Matrix transposed() const;

    /// Largest absolute entry.
    double max_abs() const;
    /// Largest |A_ij - A_ji|.
    double max_asymmetry() const;

    /// this += a * I (square only)
    void add_scaled_identity(double a);

    Matrix& operator-=(const Matrix& other);
    Matrix& operator+=(const Matrix& other);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> e_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
/// A^T A, exactly symmetric (upper triangle computed, mirrored).
Matrix ata(const Matrix& a);

/// Lower-triangular Cholesky factor L with L L^T = M.
/// Throws NotSymmetric (asymmetry beyond 1e-10 relative) or
/// NotPositiveDefinite (pivot <= 1e-14 * max_abs(M)).
Matrix cholesky(const Matrix& m);

/// Solves L L^T x = r given the lower factor L.
Vector cholesky_solve(const Matrix& l, const Vector& r);

struct LuFactor {
    Matrix lu;                  // packed L (unit diag) and U
    std::vector<int> perm;
    bool near_singular = false; // some pivot <= 1e-14 * max_abs
    Vector solve(const Vector& r) const;
};
LuFactor lu_factor(const Matrix& m);

struct LinearSolve {
    Vector x;
    bool fallback_used = false; // ridge least-squares fallback engaged
};

/// Solves M d = r by LU with partial pivoting plus one step of iterative
/// refinement. On near-singularity falls back to the ridge system
/// (M^T M + delta I) d = M^T r with delta = 1e-12 * max_abs(M)^2 and flags it.
/// Throws Singular only if the fallback residual also exceeds
/// 1e-8 * (1 + ||r||_inf).
LinearSolve solve_linear(const Matrix& m, const Vector& r);

/// Power-iteration upper estimate of lambda_max for symmetric PSD M,
/// inflated by 1.01. Deterministic: starts from the normalized all-ones
/// vector. Returns 0 for the zero matrix.
double spectral_upper_bound(const Matrix& m, int max_iters = 600, double tol = 1e-11);

// CSV I/O: one row per line, comma separated, '.' decimal, no header.
Matrix load_matrix_csv(const std::string& path);
Vector load_vector_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Matrix& m);
void save_vector_csv(const std::string& path, const Vector& v);

} // namespace gdnm::linalg
