#pragma once

#include "gdnm/lasso.hpp"
#include "gdnm/solver.hpp"

namespace gdnm::baselines {

struct BaselineConfig {
    double eta_tol = 1e-6;          // stop when the relative KKT residual <= eta_tol
    int max_iter = 200000;
    double max_wall_seconds = 6000.0;
    double admm_rho = 1.0;
    double backtrack_beta = 0.5;    // APG Lipschitz backtracking shrink factor
    double apg_initial_lipschitz = 0.0;  // 0: start from spectral bound / 64
    bool record_trace = true;

    void validate() const;
};

/// Extra counters for the first-order methods.
struct BaselineStats {
    double lipschitz_bound = 0.0;   // spectral upper bound used as L
    int total_backtracks = 0;       // APG only
};

struct BaselineReport {
    solver::SolveReport report;
    BaselineStats stats;
};

/// Proximal gradient with constant step 1/L.
BaselineReport ista_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg);
/// Two-sequence momentum method with constant step 1/L.
BaselineReport fista_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg);
/// Accelerated proximal gradient with backtracking on the quadratic
/// upper-bound test.
BaselineReport apg_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg);
/// Scaled-form ADMM with a cached factorization of A^T A + rho I.
BaselineReport admm_solve(const lasso::LassoInstance& inst, const BaselineConfig& cfg);

} // namespace gdnm::baselines
