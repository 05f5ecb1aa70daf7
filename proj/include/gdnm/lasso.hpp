#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdnm/composite.hpp"
#include "gdnm/linalg.hpp"
#include "gdnm/solver.hpp"

namespace gdnm::lasso {

struct NotInGraph : std::invalid_argument {
    explicit NotInGraph(const std::string& msg) : std::invalid_argument(msg) {}
};
struct ZeroData : std::invalid_argument {
    explicit ZeroData(const std::string& msg) : std::invalid_argument(msg) {}
};

/// minimize 1/2 ||A x - b||^2 + mu ||x||_1
struct LassoInstance {
    linalg::Matrix a;   // m x n
    linalg::Vector b;   // m
    double mu = 0.0;    // the library accepts mu >= 0; the CLI requires mu > 0

    void validate() const;
    double objective(const linalg::Vector& x) const;
};

/// Coordinatewise soft threshold; ties |x_i| = threshold map to zero.
linalg::Vector prox_l1(const linalg::Vector& x, double threshold);

/// Membership v in subdiff(mu ||.||_1)(x): v_j = mu*sgn(x_j) where x_j != 0
/// and |v_j| <= mu where x_j = 0, up to tol.
bool in_subdiff_l1(const linalg::Vector& x, const linalg::Vector& v, double mu,
                   double tol = 1e-10);

/// Membership w in d2(mu ||.||_1)(x, y)(v): per coordinate the pair
/// (w_i/mu, -v_i) must land in the graphical branch selected by
/// (x_i, y_i/mu). Throws NotInGraph when (x, y) fails in_subdiff_l1.
bool in_second_subdiff_l1(const linalg::Vector& x, const linalg::Vector& y,
                          const linalg::Vector& v, const linalg::Vector& w, double mu,
                          double tol = 1e-10);

enum class Tag : std::uint8_t { Zero, Nonzero };

/// Nonzero exactly where |u_i| > threshold (the open prox branches).
std::vector<Tag> active_pattern(const linalg::Vector& u, double threshold);

/// Newton direction for the reduced Lasso problem: assembles X from rows
/// of P (where v_i != 0) and Q (where v_i = 0) and solves X d = -grad.
/// Returns nullopt when even the ridge fallback fails.
std::optional<solver::DirectionStep> direction_lasso(const composite::MoreauReduction& red,
                                                     const linalg::Vector& u,
                                                     const linalg::Vector& v,
                                                     const linalg::Vector& grad);

/// Relative KKT residual
/// ||x - Prox_{mu||.||_1}(x - A^T(Ax - b))|| / (1 + ||x|| + ||Ax - b||).
double kkt_residual(const LassoInstance& inst, const linalg::Vector& x);

/// mu = 1e-3 * ||A^T b||_inf; throws ZeroData when A^T b = 0.
double mu_default(const linalg::Matrix& a, const linalg::Vector& b);

/// The l1 regularizer of weight mu, with prox, Newton direction solve and
/// the second-order membership check wired in.
composite::Regularizer l1_regularizer(double mu);

/// Converts to the quadratic composite form A_bar = A^T A, b_bar = -A^T b,
/// alpha_bar = ||b||^2 / 2, with the relative KKT residual attached.
composite::QuadraticCompositeProblem to_composite(const LassoInstance& inst);

} // namespace gdnm::lasso
