#pragma once

// Test-only oracles and generators. These stay independent of the library
// code paths they are used to check.

#include <cmath>
#include <cstdint>
#include <functional>

#include "gdnm/bench.hpp"
#include "gdnm/lasso.hpp"
#include "gdnm/linalg.hpp"

namespace testutil {

using gdnm::linalg::Matrix;
using gdnm::linalg::Vector;

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
    Vector g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

/// Brute-force 1D prox oracle: argmin over a grid of 0.5*(y-x)^2 + t*|y|.
inline double grid_argmin_prox(double x, double t, double step = 1e-4) {
    const double lo = std::min(0.0, x) - 1.0;
    const double hi = std::max(0.0, x) + 1.0;
    double best_y = lo, best_val = 0.5 * (lo - x) * (lo - x) + t * std::fabs(lo);
    for (double y = lo + step; y <= hi; y += step) {
        const double val = 0.5 * (y - x) * (y - x) + t * std::fabs(y);
        if (val < best_val) {
            best_val = val;
            best_y = y;
        }
    }
    return best_y;
}

/// Brute-force 1D Moreau infimum: min over a grid of mu*|y| + (y-u)^2/(2 gamma).
inline double grid_min_moreau(double u, double mu, double gamma, double step = 1e-4) {
    const double lo = std::min(0.0, u) - 1.0;
    const double hi = std::max(0.0, u) + 1.0;
    double best = mu * std::fabs(lo) + (lo - u) * (lo - u) / (2.0 * gamma);
    for (double y = lo + step; y <= hi; y += step) {
        const double val = mu * std::fabs(y) + (y - u) * (y - u) / (2.0 * gamma);
        best = std::min(best, val);
    }
    return best;
}

/// Long-run reference power method (no inflation, generic start vector).
inline double reference_lambda_max(const Matrix& m, int iters = 1000) {
    Vector v(m.rows());
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] = 1.0 + static_cast<double>(i % 7);
    v.scale(1.0 / v.norm2());
    double rayleigh = 0.0;
    for (int t = 0; t < iters; ++t) {
        Vector w = m.matvec(v);
        const double nw = w.norm2();
        if (nw == 0.0) return 0.0;
        rayleigh = v.dot(w);
        w.scale(1.0 / nw);
        v = std::move(w);
    }
    return rayleigh;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    gdnm::bench::NormalSampler rng(seed);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.next();
    return m;
}

inline Vector random_vector(std::size_t dim, std::uint64_t seed) {
    gdnm::bench::NormalSampler rng(seed);
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rng.next();
    return v;
}

/// Random symmetric positive-definite matrix A^T A + shift I.
inline Matrix random_spd(std::size_t n, std::uint64_t seed, double shift = 0.1) {
    Matrix a = random_matrix(n + 4, n, seed);
    Matrix s = gdnm::linalg::ata(a);
    s.add_scaled_identity(shift);
    return s;
}

} // namespace testutil
