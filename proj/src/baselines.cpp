#include "gdnm/baselines.hpp"

#include <chrono>
#include <cmath>

namespace gdnm::baselines {

using linalg::Matrix;
using linalg::Vector;
using solver::SolveReport;
using solver::Status;

void BaselineConfig::validate() const {
    if (!(eta_tol > 0.0)) throw solver::InvalidConfig("eta_tol must be positive");
    if (max_iter < 1) throw solver::InvalidConfig("max_iter must be positive");
    if (!(max_wall_seconds > 0.0)) throw solver::InvalidConfig("max_wall_seconds must be positive");
    if (!(admm_rho > 0.0)) throw solver::InvalidConfig("admm_rho must be positive");
    if (!(backtrack_beta > 0.0 && backtrack_beta < 1.0))
        throw solver::InvalidConfig("backtrack_beta must lie in (0, 1)");
}

namespace {

class Timer {
public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

// Shared per-iterate bookkeeping: objective, KKT residual, trace, stop tests.
struct Loop {
    const lasso::LassoInstance& inst;
    const BaselineConfig& cfg;
    Timer timer;
    SolveReport rep;

    Loop(const lasso::LassoInstance& i, const BaselineConfig& c) : inst(i), cfg(c) {}

    // Evaluates x after k completed updates; true when the solve is done.
    bool check(int k, const Vector& x, double step, double move_norm) {
        Vector r = inst.a.matvec(x);
        r -= inst.b;
        Vector atr = inst.a.tmatvec(r);
        Vector p = lasso::prox_l1(x - atr, inst.mu);
        const double eta = (x - p).norm2() / (1.0 + x.norm2() + r.norm2());
        const double obj = 0.5 * r.dot(r) + inst.mu * x.norm1();
        const double grad_norm = atr.norm2();
        if (cfg.record_trace && k > 0)
            rep.trace.push_back({k - 1, obj, grad_norm, step, move_norm, timer.seconds(), false,
                                 0.0, eta, true});
        if (eta <= cfg.eta_tol) return finish(k, x, obj, grad_norm, eta, Status::Converged);
        if (k >= cfg.max_iter) return finish(k, x, obj, grad_norm, eta, Status::MaxIterations);
        if (timer.seconds() > cfg.max_wall_seconds)
            return finish(k, x, obj, grad_norm, eta, Status::TimedOut);
        return false;
    }

    bool finish(int k, const Vector& x, double obj, double grad_norm, double eta, Status st) {
        rep.status = st;
        rep.final_x = x;
        rep.iterations = k;
        rep.final_objective = obj;
        rep.final_grad_norm = grad_norm;
        rep.final_eta = eta;
        return true;
    }
};

} // namespace

BaselineReport ista_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg) {
    inst.validate();
    cfg.validate();
    const Matrix a_bar = linalg::ata(inst.a);
    const Vector atb = inst.a.tmatvec(inst.b);
    const double lip = std::max(linalg::spectral_upper_bound(a_bar), 1e-12);

    Loop loop(inst, cfg);
    Vector x(inst.a.cols());
    double move = 0.0;
    for (int k = 0;; ++k) {
        if (loop.check(k, x, 1.0 / lip, move)) break;
        Vector g = a_bar.matvec(x) - atb;
        Vector next = x;
        next.axpy(-1.0 / lip, g);
        next = lasso::prox_l1(next, inst.mu / lip);
        move = (next - x).norm2();
        x = std::move(next);
    }
    return {std::move(loop.rep), {lip, 0}};
}

BaselineReport fista_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg) {
    inst.validate();
    cfg.validate();
    const Matrix a_bar = linalg::ata(inst.a);
    const Vector atb = inst.a.tmatvec(inst.b);
    const double lip = std::max(linalg::spectral_upper_bound(a_bar), 1e-12);

    Loop loop(inst, cfg);
    Vector x(inst.a.cols());
    Vector y = x;
    double t = 1.0;
    double move = 0.0;
    for (int k = 0;; ++k) {
        if (loop.check(k, x, 1.0 / lip, move)) break;
        Vector g = a_bar.matvec(y) - atb;
        Vector next = y;
        next.axpy(-1.0 / lip, g);
        next = lasso::prox_l1(next, inst.mu / lip);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Vector momentum = next - x;
        move = momentum.norm2();
        y = next;
        y.axpy((t - 1.0) / t_next, momentum);
        t = t_next;
        x = std::move(next);
    }
    return {std::move(loop.rep), {lip, 0}};
}

BaselineReport apg_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg) {
    inst.validate();
    cfg.validate();
    const Matrix a_bar = linalg::ata(inst.a);
    const Vector atb = inst.a.tmatvec(inst.b);
    const double alpha = 0.5 * inst.b.dot(inst.b);
    const double lip_bound = std::max(linalg::spectral_upper_bound(a_bar), 1e-12);
    auto smooth = [&](const Vector& z) {
        return 0.5 * a_bar.matvec(z).dot(z) - atb.dot(z) + alpha;
    };

    double lip = cfg.apg_initial_lipschitz > 0.0 ? cfg.apg_initial_lipschitz : lip_bound / 64.0;
    int backtracks = 0;

    Loop loop(inst, cfg);
    Vector x(inst.a.cols());
    Vector y = x;
    double t = 1.0;
    double move = 0.0;
    for (int k = 0;; ++k) {
        if (loop.check(k, x, 1.0 / lip, move)) break;
        Vector g = a_bar.matvec(y) - atb;
        const double fy = smooth(y);
        Vector next;
        while (true) {
            next = y;
            next.axpy(-1.0 / lip, g);
            next = lasso::prox_l1(next, inst.mu / lip);
            Vector diff = next - y;
            const double model = fy + g.dot(diff) + 0.5 * lip * diff.dot(diff);
            if (smooth(next) <= model + 1e-12 * std::fabs(model)) break;
            lip /= cfg.backtrack_beta;  // shrink the step by backtrack_beta
            ++backtracks;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Vector momentum = next - x;
        move = momentum.norm2();
        y = next;
        y.axpy((t - 1.0) / t_next, momentum);
        t = t_next;
        x = std::move(next);
    }
    return {std::move(loop.rep), {lip_bound, backtracks}};
}

BaselineReport admm_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg) {
    inst.validate();
    cfg.validate();
    const double rho = cfg.admm_rho;
    Matrix shifted = linalg::ata(inst.a);
    shifted.add_scaled_identity(rho);
    const Matrix factor = linalg::cholesky(shifted);
    const Vector atb = inst.a.tmatvec(inst.b);

    Loop loop(inst, cfg);
    const std::size_t n = inst.a.cols();
    Vector x(n), z(n), w(n);
    double move = 0.0;
    for (int k = 0;; ++k) {
        if (loop.check(k, x, rho, move)) break;
        Vector rhs = atb;
        rhs.axpy(rho, z - w);
        Vector x_next = linalg::cholesky_solve(factor, rhs);
        move = (x_next - x).norm2();
        x = std::move(x_next);
        z = lasso::prox_l1(x + w, inst.mu / rho);
        w += x - z;
    }
    return {std::move(loop.rep), {0.0, 0}};
}

} // namespace gdnm::baselines
