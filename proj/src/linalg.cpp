#include "gdnm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gdnm::linalg {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw DimensionMismatch(msg);
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

Vector Vector::from(std::vector<double> entries) {
    if (!all_finite(entries)) throw NonFiniteData("vector entries must be finite");
    Vector v;
    v.e_ = std::move(entries);
    return v;
}

double Vector::dot(const Vector& other) const {
    require(dim() == other.dim(), "dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < e_.size(); ++i) s += e_[i] * other.e_[i];
    return s;
}

double Vector::norm2() const { return std::sqrt(dot(*this)); }

double Vector::norm1() const {
    double s = 0.0;
    for (double x : e_) s += std::fabs(x);
    return s;
}

double Vector::norm_inf() const {
    double s = 0.0;
    for (double x : e_) s = std::max(s, std::fabs(x));
    return s;
}

void Vector::axpy(double a, const Vector& v) {
    require(dim() == v.dim(), "axpy: dimension mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += a * v.e_[i];
}

void Vector::scale(double a) {
    for (double& x : e_) x *= a;
}

Vector& Vector::operator+=(const Vector& v) {
    axpy(1.0, v);
    return *this;
}

Vector& Vector::operator-=(const Vector& v) {
    axpy(-1.0, v);
    return *this;
}

Vector operator+(Vector a, const Vector& b) { a += b; return a; }
Vector operator-(Vector a, const Vector& b) { a -= b; return a; }
Vector operator*(double a, Vector v) { v.scale(a); return v; }
Vector operator-(Vector v) { v.scale(-1.0); return v; }

Matrix Matrix::from(std::size_t rows, std::size_t cols, std::vector<double> entries) {
    if (entries.size() != rows * cols)
        throw DimensionMismatch("matrix entries length must equal rows*cols");
    if (!all_finite(entries)) throw NonFiniteData("matrix entries must be finite");
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.e_ = std::move(entries);
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::matvec(const Vector& v) const {
    require(cols_ == v.dim(), "matvec: dimension mismatch");
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = row_data(i);
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

Vector Matrix::tmatvec(const Vector& v) const {
    require(rows_ == v.dim(), "tmatvec: dimension mismatch");
    Vector out(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = row_data(i);
        const double vi = v[i];
        for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * vi;
    }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (double x : e_) s = std::max(s, std::fabs(x));
    return s;
}

double Matrix::max_asymmetry() const {
    require(square(), "max_asymmetry: square matrix required");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            s = std::max(s, std::fabs((*this)(i, j) - (*this)(j, i)));
    return s;
}

void Matrix::add_scaled_identity(double a) {
    require(square(), "add_scaled_identity: square matrix required");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, i) += a;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix -=: shape mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= other.e_[i];
    return *this;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix +=: shape mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += other.e_[i];
    return *this;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row_data(i);
        double* crow = c.row_data(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row_data(k);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix ata(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix c(n, n);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_data(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = row[j];
            if (aij == 0.0) continue;
            double* crow = c.row_data(j);
            for (std::size_t k = j; k < n; ++k) crow[k] += aij * row[k];
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) c(k, j) = c(j, k);
    return c;
}

Matrix cholesky(const Matrix& m) {
    require(m.square(), "cholesky: square matrix required");
    const std::size_t n = m.rows();
    const double scale = m.max_abs();
    if (m.max_asymmetry() > 1e-10 * (1.0 + scale))
        throw NotSymmetric("cholesky: matrix is not symmetric to tolerance");
    const double pivot_floor = 1e-14 * scale;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        const double* lrow_j = l.row_data(j);
        for (std::size_t k = 0; k < j; ++k) d -= lrow_j[k] * lrow_j[k];
        if (d <= pivot_floor)
            throw NotPositiveDefinite("cholesky: pivot below positive-definiteness floor");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            const double* lrow_i = l.row_data(i);
            for (std::size_t k = 0; k < j; ++k) s -= lrow_i[k] * lrow_j[k];
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Vector cholesky_solve(const Matrix& l, const Vector& r) {
    require(l.square() && l.rows() == r.dim(), "cholesky_solve: dimension mismatch");
    const std::size_t n = r.dim();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[i];
        const double* row = l.row_data(i);
        for (std::size_t k = 0; k < i; ++k) s -= row[k] * y[k];
        y[i] = s / row[i];
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

LuFactor lu_factor(const Matrix& m) {
    require(m.square(), "lu_factor: square matrix required");
    const std::size_t n = m.rows();
    LuFactor f;
    f.lu = m;
    f.perm.resize(n);
    const double pivot_floor = 1e-14 * m.max_abs();
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = static_cast<int>(i);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::fabs(f.lu(i, k));
            if (cand > best) { best = cand; p = i; }
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.perm[k], f.perm[p]);
        }
        const double piv = f.lu(k, k);
        if (std::fabs(piv) <= pivot_floor) {
            f.near_singular = true;
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mult = f.lu(i, k) / piv;
            f.lu(i, k) = mult;
            if (mult == 0.0) continue;
            const double* urow = f.lu.row_data(k);
            double* irow = f.lu.row_data(i);
            for (std::size_t j = k + 1; j < n; ++j) irow[j] -= mult * urow[j];
        }
    }
    return f;
}

Vector LuFactor::solve(const Vector& r) const {
    if (near_singular) throw Singular("lu solve: factorization met a negligible pivot");
    const std::size_t n = r.dim();
    require(lu.rows() == n, "lu solve: dimension mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[static_cast<std::size_t>(perm[i])];
        const double* row = lu.row_data(i);
        for (std::size_t k = 0; k < i; ++k) s -= row[k] * y[k];
        y[i] = s;
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        const double* row = lu.row_data(ii);
        for (std::size_t k = ii + 1; k < n; ++k) s -= row[k] * x[k];
        x[ii] = s / row[ii];
    }
    return x;
}

namespace {

double residual_inf(const Matrix& m, const Vector& x, const Vector& r) {
    Vector res = m.matvec(x);
    res -= r;
    return res.norm_inf();
}

} // namespace

LinearSolve solve_linear(const Matrix& m, const Vector& r) {
    require(m.square(), "solve_linear: square matrix required");
    require(m.rows() == r.dim(), "solve_linear: dimension mismatch");
    const double tol = 1e-8 * (1.0 + r.norm_inf());

    LuFactor f = lu_factor(m);
    if (!f.near_singular) {
        Vector x = f.solve(r);
        // one refinement sweep tightens the residual to rounding level
        Vector res = m.matvec(x);
        res -= r;
        x -= f.solve(res);
        if (residual_inf(m, x, r) <= tol) return {std::move(x), false};
    }

    // ridge least-squares fallback
    const double delta = 1e-12 * m.max_abs() * m.max_abs();
    Matrix normal = ata(m);
    normal.add_scaled_identity(delta);
    Vector rhs = m.tmatvec(r);
    try {
        Matrix l = cholesky(normal);
        Vector x = cholesky_solve(l, rhs);
        if (residual_inf(m, x, r) <= tol) return {std::move(x), true};
    } catch (const NotPositiveDefinite&) {
        Vector zero(r.dim());
        if (residual_inf(m, zero, r) <= tol) return {std::move(zero), true};
    }
    throw Singular("solve_linear: fallback residual exceeds tolerance");
}

double spectral_upper_bound(const Matrix& m, int max_iters, double tol) {
    require(m.square(), "spectral_upper_bound: square matrix required");
    const std::size_t n = m.rows();
    if (n == 0) return 0.0;
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double rayleigh = 0.0;
    for (int t = 0; t < max_iters; ++t) {
        Vector w = m.matvec(v);
        const double nw = w.norm2();
        if (nw == 0.0) return 0.0;
        const double next = v.dot(w);
        w.scale(1.0 / nw);
        v = std::move(w);
        if (t > 0 && std::fabs(next - rayleigh) <= tol * std::max(1.0, std::fabs(next))) {
            rayleigh = next;
            break;
        }
        rayleigh = next;
    }
    return 1.01 * std::max(rayleigh, 0.0);
}

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvFormatError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const char* begin = cell.c_str();
            char* end = nullptr;
            const double val = std::strtod(begin, &end);
            while (end && *end == ' ') ++end;
            if (end == begin || (end && *end != '\0'))
                throw CsvFormatError(path + ":" + std::to_string(lineno) + ": malformed number '" + cell + "'");
            if (!std::isfinite(val))
                throw CsvFormatError(path + ":" + std::to_string(lineno) + ": non-finite value");
            row.push_back(val);
        }
        if (row.empty())
            throw CsvFormatError(path + ":" + std::to_string(lineno) + ": empty row");
        if (!rows.empty() && row.size() != rows.front().size())
            throw CsvFormatError(path + ":" + std::to_string(lineno) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvFormatError(path + ": empty file");
    return rows;
}

} // namespace

Matrix load_matrix_csv(const std::string& path) {
    auto rows = parse_csv(path);
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return Matrix::from(rows.size(), rows.front().size(), std::move(flat));
}

Vector load_vector_csv(const std::string& path) {
    auto rows = parse_csv(path);
    std::vector<double> flat;
    if (rows.front().size() == 1) {
        for (const auto& r : rows) flat.push_back(r.front());
    } else if (rows.size() == 1) {
        flat = rows.front();
    } else {
        throw CsvFormatError(path + ": expected a single row or a single column");
    }
    return Vector::from(std::move(flat));
}

namespace {

void write_value(std::FILE* f, double x, bool last) {
    std::fprintf(f, "%.17g%c", x, last ? '\n' : ',');
}

} // namespace

void save_matrix_csv(const std::string& path, const Matrix& m) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw CsvFormatError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            write_value(f, m(i, j), j + 1 == m.cols());
    std::fclose(f);
}

void save_vector_csv(const std::string& path, const Vector& v) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw CsvFormatError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < v.dim(); ++i) write_value(f, v[i], true);
    std::fclose(f);
}

} // namespace gdnm::linalg
