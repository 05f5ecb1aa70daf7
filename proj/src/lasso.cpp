#include "gdnm/lasso.hpp"

#include <cmath>

namespace gdnm::lasso {

using linalg::Matrix;
using linalg::Vector;

void LassoInstance::validate() const {
    if (a.rows() != b.dim())
        throw linalg::DimensionMismatch("lasso: rows(A) must equal dim(b)");
    if (a.rows() == 0 || a.cols() == 0)
        throw linalg::DimensionMismatch("lasso: A must be nonempty");
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("lasso: mu must be finite and nonnegative");
}

double LassoInstance::objective(const Vector& x) const {
    Vector r = a.matvec(x);
    r -= b;
    return 0.5 * r.dot(r) + mu * x.norm1();
}

Vector prox_l1(const Vector& x, double threshold) {
    Vector out(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double xi = x[i];
        if (xi > threshold)
            out[i] = xi - threshold;
        else if (xi < -threshold)
            out[i] = xi + threshold;
        else
            out[i] = 0.0;
    }
    return out;
}

bool in_subdiff_l1(const Vector& x, const Vector& v, double mu, double tol) {
    if (x.dim() != v.dim()) throw linalg::DimensionMismatch("in_subdiff_l1: dimension mismatch");
    for (std::size_t j = 0; j < x.dim(); ++j) {
        if (std::fabs(x[j]) > tol) {
            const double want = x[j] > 0.0 ? mu : -mu;
            if (std::fabs(v[j] - want) > tol) return false;
        } else {
            if (std::fabs(v[j]) > mu + tol) return false;
        }
    }
    return true;
}

bool in_second_subdiff_l1(const Vector& x, const Vector& y, const Vector& v, const Vector& w,
                          double mu, double tol) {
    const std::size_t n = x.dim();
    if (y.dim() != n || v.dim() != n || w.dim() != n)
        throw linalg::DimensionMismatch("in_second_subdiff_l1: dimension mismatch");
    if (mu <= 0.0) throw std::invalid_argument("in_second_subdiff_l1: mu must be positive");
    if (!in_subdiff_l1(x, y, mu, tol))
        throw NotInGraph("in_second_subdiff_l1: (x, y) is not in gph subdiff(mu||.||_1)");

    for (std::size_t i = 0; i < n; ++i) {
        const double t = x[i];
        const double p = y[i] / mu;
        const double first = w[i] / mu;
        const double second = -v[i];
        if (std::fabs(t) > tol) {
            // branch {0} x R at p = +-1
            if (std::fabs(first) > tol) return false;
        } else if (std::fabs(p - 1.0) <= tol) {
            // branch (R_- x R_+) u ({0} x R) u (R x {0})
            const bool cone = first <= tol && second >= -tol;
            if (!cone && std::fabs(first) > tol && std::fabs(second) > tol) return false;
        } else if (std::fabs(p + 1.0) <= tol) {
            // mirrored branch (R_+ x R_-) u ({0} x R) u (R x {0})
            const bool cone = first >= -tol && second <= tol;
            if (!cone && std::fabs(first) > tol && std::fabs(second) > tol) return false;
        } else if (std::fabs(p) < 1.0 + tol) {
            // branch R x {0} for p in (-1, 1)
            if (std::fabs(second) > tol) return false;
        } else {
            return false;  // empty branch
        }
    }
    return true;
}

std::vector<Tag> active_pattern(const Vector& u, double threshold) {
    std::vector<Tag> tags(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i)
        tags[i] = std::fabs(u[i]) > threshold ? Tag::Nonzero : Tag::Zero;
    return tags;
}

std::optional<solver::DirectionStep> direction_lasso(const composite::MoreauReduction& red,
                                                     const Vector& u, const Vector& v,
                                                     const Vector& grad) {
    const std::size_t n = u.dim();
    if (v.dim() != n || grad.dim() != n || red.p.rows() != n)
        throw linalg::DimensionMismatch("direction_lasso: dimension mismatch");
    Matrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix& src = (v[i] != 0.0) ? red.p : red.q;
        const double* srow = src.row_data(i);
        double* drow = x.row_data(i);
        for (std::size_t j = 0; j < n; ++j) drow[j] = srow[j];
    }
    try {
        linalg::LinearSolve sol = linalg::solve_linear(x, -grad);
        return solver::DirectionStep{std::move(sol.x), sol.fallback_used};
    } catch (const linalg::Singular&) {
        return std::nullopt;
    }
}

double kkt_residual(const LassoInstance& inst, const Vector& x) {
    if (x.dim() != inst.a.cols())
        throw linalg::DimensionMismatch("kkt_residual: dimension mismatch");
    Vector r = inst.a.matvec(x);
    r -= inst.b;
    Vector z = x - inst.a.tmatvec(r);
    Vector p = prox_l1(z, inst.mu);
    const double num = (x - p).norm2();
    return num / (1.0 + x.norm2() + r.norm2());
}

double mu_default(const Matrix& a, const Vector& b) {
    const double scale = a.tmatvec(b).norm_inf();
    if (scale == 0.0) throw ZeroData("mu_default: A^T b is zero");
    return 1e-3 * scale;
}

composite::Regularizer l1_regularizer(double mu) {
    composite::Regularizer reg;
    reg.value = [mu](const Vector& x) { return mu * x.norm1(); };
    reg.prox = [mu](const Vector& x, double gamma) { return prox_l1(x, mu * gamma); };
    if (mu > 0.0) {
        reg.direction_solve = [](const composite::MoreauReduction& red, const Vector& u,
                                 const Vector& v, const Vector& grad) {
            return direction_lasso(red, u, v, grad);
        };
    } else {
        // g = 0 is smooth: the reduced model has plain Hessian P
        reg.direction_solve = [](const composite::MoreauReduction& red, const Vector&,
                                 const Vector&, const Vector& grad)
            -> std::optional<solver::DirectionStep> {
            try {
                linalg::LinearSolve sol = linalg::solve_linear(red.p, -grad);
                return solver::DirectionStep{std::move(sol.x), sol.fallback_used};
            } catch (const linalg::Singular&) {
                return std::nullopt;
            }
        };
    }
    if (mu > 0.0) {
        reg.inclusion_check = [mu](const composite::MoreauReduction& red, const Vector& u,
                                   const Vector& v, const Vector& grad, const Vector& d) {
            const double gamma = red.gamma;
            Vector y = u - v;
            y.scale(1.0 / gamma);
            Vector varg = red.q.matvec(d) + grad;              // Q d + grad
            Vector pd = red.p.matvec(d);
            Vector w = grad + pd;
            w.scale(-1.0 / gamma);                             // (-grad - P d) / gamma
            // the pair components carry the 1/(gamma*mu) scaling of the
            // substitution; widen the absolute tolerance accordingly
            const double scale = (grad.norm_inf() + pd.norm_inf()) / (gamma * mu);
            const double tol = 1e-10 * std::max(1.0, scale);
            return in_second_subdiff_l1(v, y, varg, w, mu, tol);
        };
    }
    return reg;
}

composite::QuadraticCompositeProblem to_composite(const LassoInstance& inst) {
    inst.validate();
    composite::QuadraticCompositeProblem prob;
    prob.a_bar = linalg::ata(inst.a);
    prob.b_bar = -inst.a.tmatvec(inst.b);
    prob.alpha_bar = 0.5 * inst.b.dot(inst.b);
    prob.reg = l1_regularizer(inst.mu);
    prob.kkt_residual = [inst](const Vector& x) { return kkt_residual(inst, x); };
    return prob;
}

} // namespace gdnm::lasso
