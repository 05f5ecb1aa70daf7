#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdnm/linalg.hpp"
#include "gdnm/solver.hpp"

namespace gdnm::composite {

struct ReductionFailed : std::runtime_error {
    explicit ReductionFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct MoreauReduction;

/// Convex regularizer g supplied through its proximal calculus.
/// direction_solve, when present, solves the generalized Newton
/// subproblem of the reduced problem; inclusion_check verifies a
/// computed direction against the second-order subdifferential of g.
struct Regularizer {
    std::function<double(const linalg::Vector&)> value;                      // g(x)
    std::function<linalg::Vector(const linalg::Vector&, double)> prox;       // Prox_{gamma g}(x)
    std::function<std::optional<solver::DirectionStep>(
        const MoreauReduction&, const linalg::Vector& u, const linalg::Vector& v,
        const linalg::Vector& grad)>
        direction_solve;
    std::function<bool(const MoreauReduction&, const linalg::Vector& u,
                       const linalg::Vector& v, const linalg::Vector& grad,
                       const linalg::Vector& d)>
        inclusion_check;
};

/// minimize 1/2 <A_bar x, x> + <b_bar, x> + alpha_bar + g(x)
struct QuadraticCompositeProblem {
    linalg::Matrix a_bar;   // n x n, symmetric PSD
    linalg::Vector b_bar;   // n
    double alpha_bar = 0.0;
    Regularizer reg;
    /// Optional scale-free stationarity residual of the original problem
    /// (the relative KKT residual for Lasso); used as a second stop test.
    std::function<double(const linalg::Vector&)> kkt_residual;

    double quadratic_value(const linalg::Vector& x) const;
    /// Checks symmetry and certifies positive semidefiniteness via a
    /// shifted Cholesky. Throws on violation.
    void validate() const;
};

/// The smooth reduced model: Q = (I - gamma A)^{-1}, c = gamma Q b,
/// P = Q - I, and the derived moduli for the superlinear step-size bound.
struct MoreauReduction {
    double gamma = 0.0;
    linalg::Matrix q;
    linalg::Matrix p;
    linalg::Vector c;
    double lip_ell = 0.0;               // 1 + ||Q||_2 (upper estimate)
    std::optional<double> kappa;        // 1/lambda_min(P) when A_bar is PD
};

/// Chooses gamma = gamma_safety / spectral_upper_bound(A_bar) (gamma_safety
/// for the zero matrix), certifies I - gamma A_bar by Cholesky with up to
/// 10 halvings of gamma, and builds Q column-wise from the factor.
MoreauReduction build_reduction(const QuadraticCompositeProblem& prob, double gamma_safety = 0.95);
/// Same construction with gamma given directly.
MoreauReduction build_reduction_with_gamma(const QuadraticCompositeProblem& prob, double gamma);

double psi_value(const MoreauReduction& red, const Regularizer& reg, const linalg::Vector& u);
linalg::Vector psi_grad(const MoreauReduction& red, const Regularizer& reg, const linalg::Vector& u);
linalg::Vector recover_x(const MoreauReduction& red, const linalg::Vector& u);

struct TikhonovStage {
    double eps = 0.0;
    int iterations = 0;
    solver::Status status = solver::Status::MaxIterations;
};

struct CompositeReport {
    solver::SolveReport report;
    linalg::Vector x;                    // recovered solution Q u + c
    double original_objective = 0.0;     // quadratic-composite objective at x
    double gamma = 0.0;
    double lip_ell = 0.0;
    std::optional<double> kappa;
    /// Whether sigma < 1/(2 * lip_ell * kappa) held (when kappa is known).
    std::optional<bool> sigma_superlinear_bound_held;
    std::vector<TikhonovStage> tikhonov_stages;   // empty for plain solves
};

/// Damped Newton on the reduced problem starting from the zero vector.
/// Stops when ||grad psi|| <= grad_tol or, when the problem carries a
/// KKT residual, when that residual drops to grad_tol.
CompositeReport gdnm_composite_solve(const QuadraticCompositeProblem& prob,
                                     const solver::SolverConfig& cfg,
                                     double gamma_safety = 0.95);

/// Solves a decreasing schedule of Tikhonov-perturbed problems
/// (P replaced by P + eps I), warm-starting each stage. Returns Converged
/// once the KKT residual reaches grad_tol or successive stage solutions
/// differ by less than grad_tol; ScheduleExhausted otherwise.
CompositeReport tikhonov_solve(const QuadraticCompositeProblem& prob,
                               const solver::SolverConfig& cfg,
                               const std::vector<double>& eps_schedule,
                               double gamma_safety = 0.95);

/// Default schedule 1e-2 .. 1e-12.
std::vector<double> default_tikhonov_schedule();

} // namespace gdnm::composite
