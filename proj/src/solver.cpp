#include "gdnm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace gdnm::solver {

namespace {

constexpr std::size_t kRateTailWindow = 8;

struct ArmijoResult {
    double tau;
    double f_new;
    linalg::Vector x_new;
};

std::optional<ArmijoResult> try_armijo(const std::function<double(const linalg::Vector&)>& value,
                                       const linalg::Vector& x, const linalg::Vector& d,
                                       double fx, double dir_dot_grad, const SolverConfig& cfg) {
    double tau = 1.0;
    int trials = 0;
    while (true) {
        linalg::Vector x_trial = x;
        x_trial.axpy(tau, d);
        const double f_trial = value(x_trial);
        if (f_trial <= fx + cfg.sigma * tau * dir_dot_grad)
            return ArmijoResult{tau, f_trial, std::move(x_trial)};
        ++trials;
        tau *= cfg.beta;
        if (tau < cfg.tau_min || trials > cfg.max_backtracks) return std::nullopt;
    }
}

} // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::Converged: return "Converged";
        case Status::MaxIterations: return "MaxIterations";
        case Status::LineSearchFailed: return "LineSearchFailed";
        case Status::DirectionFailed: return "DirectionFailed";
        case Status::TimedOut: return "TimedOut";
        case Status::ScheduleExhausted: return "ScheduleExhausted";
    }
    return "Unknown";
}

const char* to_string(RateClass c) {
    switch (c) {
        case RateClass::Sublinear: return "sublinear";
        case RateClass::QLinear: return "Q-linear";
        case RateClass::QSuperlinearConsistent: return "Q-superlinear-consistent";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (!(sigma > 0.0 && sigma < 0.5)) throw InvalidConfig("sigma must lie in (0, 0.5)");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidConfig("beta must lie in (0, 1)");
    if (!(grad_tol > 0.0)) throw InvalidConfig("grad_tol must be positive");
    if (max_iter < 1) throw InvalidConfig("max_iter must be positive");
    if (max_backtracks < 1) throw InvalidConfig("max_backtracks must be positive");
    if (!(tau_min > 0.0 && tau_min < 1.0)) throw InvalidConfig("tau_min must lie in (0, 1)");
    if (!(max_wall_seconds > 0.0)) throw InvalidConfig("max_wall_seconds must be positive");
}

double armijo_backtrack(const C11Oracle& oracle, const linalg::Vector& x,
                        const linalg::Vector& d, double fx, const linalg::Vector& gx,
                        const SolverConfig& cfg) {
    const double gd = gx.dot(d);
    auto res = try_armijo(oracle.value, x, d, fx, gd, cfg);
    if (!res) throw LineSearchFailure("Armijo backtracking exhausted");
    return res->tau;
}

SolveReport gdnm_solve(const C11Oracle& oracle, const linalg::Vector& x0,
                       const SolverConfig& cfg, const SolveHooks& hooks) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SolveReport rep;
    linalg::Vector x = x0;
    double fx = oracle.value(x);
    linalg::Vector gx = oracle.gradient(x);

    std::deque<linalg::Vector> tail;
    tail.push_back(x);
    if (cfg.record_iterates) rep.iterates.push_back(x);

    const double eta_tol = std::isnan(hooks.residual_tol) ? cfg.grad_tol : hooks.residual_tol;
    int k = 0;
    while (true) {
        const double gnorm = gx.norm2();
        double eta = std::numeric_limits<double>::quiet_NaN();
        if (hooks.residual) eta = hooks.residual(x);
        const bool converged = (hooks.residual && hooks.residual_primary)
                                   ? eta <= eta_tol
                                   : gnorm <= cfg.grad_tol ||
                                         (hooks.residual && eta <= eta_tol);
        if (converged) {
            rep.status = Status::Converged;
            break;
        }
        if (k >= cfg.max_iter) {
            rep.status = Status::MaxIterations;
            break;
        }
        if (elapsed() > cfg.max_wall_seconds) {
            rep.status = Status::TimedOut;
            break;
        }

        auto step = oracle.direction(x, gx);
        if (!step) {
            rep.status = Status::DirectionFailed;
            break;
        }
        const double gd = gx.dot(step->d);
        if (!(gd < 0.0)) {
            rep.status = Status::DirectionFailed;
            break;
        }

        bool membership_ok = true;
        if (cfg.debug_checks && hooks.direction_check)
            membership_ok = hooks.direction_check(x, gx, step->d);

        auto accepted = try_armijo(oracle.value, x, step->d, fx, gd, cfg);
        if (!accepted) {
            rep.status = Status::LineSearchFailed;
            break;
        }

        rep.trace.push_back({k, fx, gnorm, accepted->tau, step->d.norm2(), elapsed(),
                             step->fallback_used, gd, eta, membership_ok});

        x = std::move(accepted->x_new);
        fx = accepted->f_new;
        gx = oracle.gradient(x);
        tail.push_back(x);
        if (tail.size() > kRateTailWindow) tail.pop_front();
        if (cfg.record_iterates) rep.iterates.push_back(x);
        ++k;
    }

    rep.final_x = x;
    rep.iterations = k;
    rep.final_objective = fx;
    rep.final_grad_norm = gx.norm2();
    if (hooks.residual) rep.final_eta = hooks.residual(x);
    rep.rate_diagnostics = error_ratios({tail.begin(), tail.end()}, x);
    return rep;
}

std::vector<double> error_ratios(const std::vector<linalg::Vector>& iterates,
                                 const linalg::Vector& final_x, std::size_t max_ratios) {
    std::vector<double> errs;
    errs.reserve(iterates.size());
    for (const auto& it : iterates) errs.push_back((it - final_x).norm2());
    while (!errs.empty() && errs.back() == 0.0) errs.pop_back();

    // a zero error in the interior would make later ratios undefined;
    // restrict the window to the segment after the last one
    std::size_t begin = 0;
    for (std::size_t j = 0; j < errs.size(); ++j)
        if (errs[j] == 0.0) begin = j + 1;

    std::vector<double> ratios;
    for (std::size_t j = begin; j + 1 < errs.size(); ++j) ratios.push_back(errs[j + 1] / errs[j]);
    if (ratios.size() > max_ratios) ratios.erase(ratios.begin(), ratios.end() - max_ratios);
    return ratios;
}

RateEstimate estimate_rate(const std::vector<linalg::Vector>& iterates,
                           const linalg::Vector& final_x) {
    if (iterates.size() < 4) throw InsufficientTrace("estimate_rate needs at least 4 iterates");
    const std::size_t window = std::min<std::size_t>(5, iterates.size() - 1);
    auto ratios = error_ratios(iterates, final_x, window);
    if (ratios.size() < 2) throw InsufficientTrace("estimate_rate: too few nonzero errors");

    bool strictly_decreasing = true;
    double max_ratio = ratios.front();
    for (std::size_t j = 1; j < ratios.size(); ++j) {
        if (!(ratios[j] < ratios[j - 1])) strictly_decreasing = false;
        max_ratio = std::max(max_ratio, ratios[j]);
    }

    RateClass cls;
    if (strictly_decreasing && ratios.back() < 0.1)
        cls = RateClass::QSuperlinearConsistent;
    else if (max_ratio <= 0.95)  // operational stand-in for "bounded by some mu < 1"
        cls = RateClass::QLinear;
    else
        cls = RateClass::Sublinear;
    return {cls, std::move(ratios)};
}

} // namespace gdnm::solver
