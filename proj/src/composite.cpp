#include "gdnm/composite.hpp"

#include <algorithm>
#include <cmath>

namespace gdnm::composite {

using linalg::Matrix;
using linalg::Vector;

double QuadraticCompositeProblem::quadratic_value(const Vector& x) const {
    return 0.5 * a_bar.matvec(x).dot(x) + b_bar.dot(x) + alpha_bar;
}

void QuadraticCompositeProblem::validate() const {
    if (!a_bar.square() || a_bar.rows() != b_bar.dim())
        throw linalg::DimensionMismatch("composite problem: A_bar must be n x n with b_bar of length n");
    const double scale = a_bar.max_abs();
    if (a_bar.max_asymmetry() > 1e-10 * (1.0 + scale))
        throw linalg::NotSymmetric("composite problem: A_bar is not symmetric");
    if (scale == 0.0) return;  // zero matrix is trivially PSD
    Matrix shifted = a_bar;
    shifted.add_scaled_identity(1e-12 * scale);
    linalg::cholesky(shifted);  // throws NotPositiveDefinite when not PSD
}

namespace {

// Cholesky of I - gamma*A, or nullopt when indefinite.
std::optional<Matrix> try_certify(const Matrix& a_bar, double gamma) {
    Matrix m = Matrix::identity(a_bar.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= gamma * a_bar(i, j);
    try {
        return linalg::cholesky(m);
    } catch (const linalg::NotPositiveDefinite&) {
        return std::nullopt;
    }
}

MoreauReduction finish_reduction(const QuadraticCompositeProblem& prob, double gamma,
                                 const Matrix& chol_factor) {
    const std::size_t n = prob.a_bar.rows();
    MoreauReduction red;
    red.gamma = gamma;

    // Q column-wise from the factor of I - gamma*A, then symmetrized
    red.q = Matrix(n, n);
    Vector e(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vector col = linalg::cholesky_solve(chol_factor, e);
        for (std::size_t i = 0; i < n; ++i) red.q(i, j) = col[i];
        e[j] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (red.q(i, j) + red.q(j, i));
            red.q(i, j) = avg;
            red.q(j, i) = avg;
        }

    red.p = red.q;
    red.p.add_scaled_identity(-1.0);
    red.c = gamma * red.q.matvec(prob.b_bar);
    red.lip_ell = 1.0 + std::sqrt(linalg::spectral_upper_bound(linalg::multiply(red.q, red.q)));

    // kappa = 1/lambda_min(P) when A_bar is PD; inverse power iteration on P
    try {
        linalg::cholesky(prob.a_bar);
        Matrix pl = linalg::cholesky(red.p);
        Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
        double rayleigh = 0.0;
        for (int t = 0; t < 200; ++t) {
            Vector w = linalg::cholesky_solve(pl, v);
            const double nw = w.norm2();
            if (nw == 0.0) break;
            const double next = v.dot(w);
            w.scale(1.0 / nw);
            v = std::move(w);
            if (t > 0 && std::fabs(next - rayleigh) <= 1e-10 * std::max(1.0, std::fabs(next))) {
                rayleigh = next;
                break;
            }
            rayleigh = next;
        }
        if (rayleigh > 0.0) red.kappa = 1.01 * rayleigh;  // = 1/lambda_min lower bound
    } catch (const linalg::NotPositiveDefinite&) {
        // A_bar merely PSD: kappa stays absent
    }
    return red;
}

} // namespace

MoreauReduction build_reduction(const QuadraticCompositeProblem& prob, double gamma_safety) {
    if (!(gamma_safety > 0.0 && gamma_safety < 1.0))
        throw solver::InvalidConfig("gamma_safety must lie in (0, 1)");
    const double lam = linalg::spectral_upper_bound(prob.a_bar);
    double gamma = lam > 0.0 ? gamma_safety / lam : gamma_safety;
    for (int attempt = 0; attempt <= 10; ++attempt) {
        if (auto factor = try_certify(prob.a_bar, gamma))
            return finish_reduction(prob, gamma, *factor);
        gamma *= 0.5;
    }
    throw ReductionFailed("no gamma certified I - gamma*A positive-definite after 10 halvings");
}

MoreauReduction build_reduction_with_gamma(const QuadraticCompositeProblem& prob, double gamma) {
    if (!(gamma > 0.0)) throw solver::InvalidConfig("gamma must be positive");
    auto factor = try_certify(prob.a_bar, gamma);
    if (!factor) throw ReductionFailed("I - gamma*A is not positive-definite at the given gamma");
    return finish_reduction(prob, gamma, *factor);
}

double psi_value(const MoreauReduction& red, const Regularizer& reg, const Vector& u) {
    if (u.dim() != red.q.rows()) throw linalg::DimensionMismatch("psi_value: dimension mismatch");
    const Vector v = reg.prox(u, red.gamma);
    const Vector diff = u - v;
    return 0.5 * red.p.matvec(u).dot(u) + red.c.dot(u) + red.gamma * reg.value(v) +
           0.5 * diff.dot(diff);
}

Vector psi_grad(const MoreauReduction& red, const Regularizer& reg, const Vector& u) {
    if (u.dim() != red.q.rows()) throw linalg::DimensionMismatch("psi_grad: dimension mismatch");
    Vector g = red.q.matvec(u);
    g -= reg.prox(u, red.gamma);
    g += red.c;
    return g;
}

Vector recover_x(const MoreauReduction& red, const Vector& u) {
    if (u.dim() != red.q.rows()) throw linalg::DimensionMismatch("recover_x: dimension mismatch");
    return red.q.matvec(u) + red.c;
}

namespace {

solver::C11Oracle make_oracle(const MoreauReduction& red, const Regularizer& reg) {
    solver::C11Oracle oracle;
    oracle.value = [&red, &reg](const Vector& u) { return psi_value(red, reg, u); };
    oracle.gradient = [&red, &reg](const Vector& u) { return psi_grad(red, reg, u); };
    oracle.direction = [&red, &reg](const Vector& u, const Vector& g)
        -> std::optional<solver::DirectionStep> {
        if (!reg.direction_solve) return std::nullopt;
        const Vector v = reg.prox(u, red.gamma);
        return reg.direction_solve(red, u, v, g);
    };
    return oracle;
}

solver::SolveHooks make_hooks(const QuadraticCompositeProblem& prob, const MoreauReduction& red,
                              const MoreauReduction& recover_red, double residual_tol,
                              bool residual_primary) {
    solver::SolveHooks hooks;
    if (prob.kkt_residual) {
        hooks.residual = [&prob, &recover_red](const Vector& u) {
            return prob.kkt_residual(recover_x(recover_red, u));
        };
        hooks.residual_tol = residual_tol;
        hooks.residual_primary = residual_primary;
    }
    if (prob.reg.inclusion_check)
        hooks.direction_check = [&prob, &red](const Vector& u, const Vector& g, const Vector& d) {
            const Vector v = prob.reg.prox(u, red.gamma);
            return prob.reg.inclusion_check(red, u, v, g, d);
        };
    return hooks;
}

CompositeReport finish_report(const QuadraticCompositeProblem& prob, const MoreauReduction& red,
                              solver::SolveReport&& inner, const solver::SolverConfig& cfg) {
    CompositeReport out;
    out.x = recover_x(red, inner.final_x);
    out.original_objective =
        prob.quadratic_value(out.x) + (prob.reg.value ? prob.reg.value(out.x) : 0.0);
    out.gamma = red.gamma;
    out.lip_ell = red.lip_ell;
    out.kappa = red.kappa;
    if (red.kappa)
        out.sigma_superlinear_bound_held = cfg.sigma < 1.0 / (2.0 * red.lip_ell * *red.kappa);
    if (prob.kkt_residual) inner.final_eta = prob.kkt_residual(out.x);
    out.report = std::move(inner);
    return out;
}

} // namespace

CompositeReport gdnm_composite_solve(const QuadraticCompositeProblem& prob,
                                     const solver::SolverConfig& cfg, double gamma_safety) {
    prob.validate();
    const MoreauReduction red = build_reduction(prob, gamma_safety);
    const solver::C11Oracle oracle = make_oracle(red, prob.reg);
    // the KKT residual, when present, is the convergence test: the reduced
    // gradient lives at the gamma scale and clears grad_tol far too early
    // on badly conditioned data
    const solver::SolveHooks hooks = make_hooks(prob, red, red, cfg.grad_tol, true);
    Vector u0(prob.b_bar.dim());  // zero starting point
    solver::SolveReport inner = gdnm_solve(oracle, u0, cfg, hooks);
    return finish_report(prob, red, std::move(inner), cfg);
}

std::vector<double> default_tikhonov_schedule() {
    return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
}

CompositeReport tikhonov_solve(const QuadraticCompositeProblem& prob,
                               const solver::SolverConfig& cfg,
                               const std::vector<double>& eps_schedule, double gamma_safety) {
    prob.validate();
    if (eps_schedule.empty()) throw solver::InvalidConfig("tikhonov_solve: empty schedule");
    const MoreauReduction base = build_reduction(prob, gamma_safety);

    CompositeReport out;
    out.gamma = base.gamma;
    out.lip_ell = base.lip_ell;
    out.kappa = base.kappa;

    Vector u(prob.b_bar.dim());  // zero starting point
    std::optional<Vector> prev_u;
    solver::Status final_status = solver::Status::ScheduleExhausted;
    solver::SolveReport last_inner;
    int total_iterations = 0;
    std::vector<solver::IterationRecord> merged_trace;

    for (double eps : eps_schedule) {
        MoreauReduction staged = base;
        staged.p.add_scaled_identity(eps);
        staged.q.add_scaled_identity(eps);  // keeps grad psi_eps = Q_eps u - prox + c
        staged.kappa.reset();

        // the stage must resolve the eps*u gradient term, otherwise warm
        // starts sit below grad_tol and late stages make no progress
        solver::SolverConfig stage_cfg = cfg;
        if (eps > 0.0)
            stage_cfg.grad_tol = std::max(
                std::min(cfg.grad_tol, 1e-2 * eps * std::max(1.0, u.norm2())), 1e-300);

        const solver::C11Oracle oracle = make_oracle(staged, prob.reg);
        // a perturbed stage converges on its own gradient (the KKT residual
        // plateaus at ~eps there and only provides the early exit); the
        // eps = 0 stage is the true problem and stops on the residual
        const solver::SolveHooks hooks =
            make_hooks(prob, staged, base, cfg.grad_tol, /*residual_primary=*/eps == 0.0);
        solver::SolveReport inner = gdnm_solve(oracle, u, stage_cfg, hooks);

        out.tikhonov_stages.push_back({eps, inner.iterations, inner.status});
        total_iterations += inner.iterations;
        // k restarts at 0 per stage; a k == 0 record marks a stage boundary
        merged_trace.insert(merged_trace.end(), inner.trace.begin(), inner.trace.end());
        u = inner.final_x;
        last_inner = std::move(inner);

        if (last_inner.status != solver::Status::Converged &&
            last_inner.status != solver::Status::MaxIterations) {
            final_status = last_inner.status;  // propagate hard failures
            break;
        }
        if (eps == 0.0 && last_inner.status == solver::Status::Converged) {
            final_status = solver::Status::Converged;  // unperturbed stage solved exactly
            break;
        }
        if (prob.kkt_residual && prob.kkt_residual(recover_x(base, u)) <= cfg.grad_tol) {
            final_status = solver::Status::Converged;
            break;
        }
        // bare stabilization only counts when no KKT residual is available;
        // with one, the schedule keeps shrinking eps until it passes
        if (!prob.kkt_residual && prev_u && (u - *prev_u).norm2() < cfg.grad_tol) {
            final_status = solver::Status::Converged;
            break;
        }
        prev_u = u;
    }

    last_inner.trace = std::move(merged_trace);
    last_inner.iterations = total_iterations;
    last_inner.status = final_status;
    CompositeReport finished = finish_report(prob, base, std::move(last_inner), cfg);
    finished.tikhonov_stages = std::move(out.tikhonov_stages);
    return finished;
}

} // namespace gdnm::composite
