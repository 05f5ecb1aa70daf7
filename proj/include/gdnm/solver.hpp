#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdnm/linalg.hpp"

namespace gdnm::solver {

struct InvalidConfig : std::invalid_argument {
    explicit InvalidConfig(const std::string& msg) : std::invalid_argument(msg) {}
};
struct LineSearchFailure : std::runtime_error {
    explicit LineSearchFailure(const std::string& msg) : std::runtime_error(msg) {}
};
struct InsufficientTrace : std::runtime_error {
    explicit InsufficientTrace(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Status {
    Converged,
    MaxIterations,
    LineSearchFailed,
    DirectionFailed,
    TimedOut,
    ScheduleExhausted,
};
const char* to_string(Status s);

struct SolverConfig {
    double sigma = 0.25;            // Armijo slope fraction, in (0, 1/2)
    double beta = 0.5;              // backtracking shrink factor, in (0, 1)
    double grad_tol = 1e-6;         // stop when ||grad|| <= grad_tol
    int max_iter = 1000;
    int max_backtracks = 60;
    double tau_min = 1e-12;
    double max_wall_seconds = 6000.0;
    bool record_iterates = false;   // keep the full iterate history in the report
    bool debug_checks = false;      // run per-iteration direction inclusion checks

    void validate() const;
};

/// One accepted damped-Newton step.
struct IterationRecord {
    int k = 0;
    double objective = 0.0;         // value at the pre-step point x^k
    double grad_norm = 0.0;
    double step_tau = 1.0;          // beta^j accepted by the Armijo test
    double direction_norm = 0.0;
    double wall_seconds = 0.0;
    bool fallback_used = false;     // direction came from the ridge fallback solve
    double dir_dot_grad = 0.0;      // <grad, d>, negative for descent directions
    double kkt_eta = std::numeric_limits<double>::quiet_NaN();
    bool membership_ok = true;      // result of the debug inclusion check
};

struct DirectionStep {
    linalg::Vector d;
    bool fallback_used = false;
};

/// Oracle for a C^{1,1} objective. `direction` solves the generalized
/// Newton subproblem -grad in d2phi(x)(d); empty optional means no
/// direction could be produced.
struct C11Oracle {
    std::function<double(const linalg::Vector&)> value;
    std::function<linalg::Vector(const linalg::Vector&)> gradient;
    std::function<std::optional<DirectionStep>(const linalg::Vector&, const linalg::Vector&)> direction;
};

/// Optional per-iteration instrumentation.
struct SolveHooks {
    /// Extra residual (e.g. relative KKT), recorded per iteration. The
    /// solve stops Converged when it drops to residual_tol (grad_tol when
    /// unset); with residual_primary the gradient test is not a stop at
    /// all, only this residual is.
    std::function<double(const linalg::Vector&)> residual;
    double residual_tol = std::numeric_limits<double>::quiet_NaN();
    bool residual_primary = false;
    /// Inclusion check for the computed direction (run when debug_checks).
    std::function<bool(const linalg::Vector& x, const linalg::Vector& g, const linalg::Vector& d)>
        direction_check;
};

struct SolveReport {
    Status status = Status::MaxIterations;
    linalg::Vector final_x;
    int iterations = 0;
    std::vector<IterationRecord> trace;
    /// ||x^{k+1} - x_final|| / ||x^k - x_final|| over the trailing iterates.
    std::vector<double> rate_diagnostics;
    double final_objective = 0.0;
    double final_grad_norm = 0.0;
    double final_eta = std::numeric_limits<double>::quiet_NaN();
    std::vector<linalg::Vector> iterates;  // filled when record_iterates
};

/// Backtracking line search (Armijo). First trial is tau = 1; shrinks by
/// beta until phi(x + tau d) <= fx + sigma * tau * <gx, d>. Throws
/// LineSearchFailure when tau underflows tau_min or trials exceed
/// max_backtracks. Precondition: <gx, d> < 0.
double armijo_backtrack(const C11Oracle& oracle, const linalg::Vector& x,
                        const linalg::Vector& d, double fx, const linalg::Vector& gx,
                        const SolverConfig& cfg);

SolveReport gdnm_solve(const C11Oracle& oracle, const linalg::Vector& x0,
                       const SolverConfig& cfg, const SolveHooks& hooks = {});

enum class RateClass { Sublinear, QLinear, QSuperlinearConsistent };
const char* to_string(RateClass c);

struct RateEstimate {
    RateClass cls;
    std::vector<double> ratios;
};

/// Trailing error ratios ||x^{k+1}-final|| / ||x^k-final||. Trailing
/// zero-error entries (iterates that already coincide with final_x) are
/// dropped. At most max_ratios ratios are returned.
std::vector<double> error_ratios(const std::vector<linalg::Vector>& iterates,
                                 const linalg::Vector& final_x,
                                 std::size_t max_ratios = 5);

/// Classifies the tail convergence of an iterate sequence:
/// Q-superlinear-consistent when the ratios strictly decrease and end
/// below 0.1; Q-linear when they stay below 0.95; sublinear otherwise.
/// Requires at least 4 recorded iterates.
RateEstimate estimate_rate(const std::vector<linalg::Vector>& iterates,
                           const linalg::Vector& final_x);

} // namespace gdnm::solver
