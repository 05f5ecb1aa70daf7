#include "gdnm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace gdnm::bench {

using linalg::Matrix;
using linalg::Vector;

double NormalSampler::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double NormalSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    while (true) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_ = v * f;
            has_spare_ = true;
            return u * f;
        }
    }
}

lasso::LassoInstance gen_instance(int m, int n, std::uint64_t seed, MuMode mu_mode,
                                  double mu_value) {
    if (m < 1 || n < 1) throw std::invalid_argument("gen_instance: m and n must be >= 1");
    NormalSampler rng(seed);
    lasso::LassoInstance inst;
    Matrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* row = a.row_data(i);
        for (std::size_t j = 0; j < a.cols(); ++j) row[j] = rng.next();
    }
    Vector b(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < b.dim(); ++i) b[i] = rng.next();
    inst.a = std::move(a);
    inst.b = std::move(b);
    inst.mu = mu_mode == MuMode::Fixed ? mu_value : lasso::mu_default(inst.a, inst.b);
    inst.validate();
    return inst;
}

namespace {

// Plain damped Newton stalls when A^T A is close to singular: the
// reduced curvature P inherits the conditioning and the Newton systems
// blow up along its near-null space. Route such cells through the
// continuation. Threshold calibrated on square Gaussian instances:
// plain solves stay fast through cond ~ 1e7..1e8 and collapse beyond.
bool needs_continuation(const linalg::Matrix& a_bar) {
    const double lam_max = linalg::spectral_upper_bound(a_bar);
    if (lam_max == 0.0) return false;
    try {
        const linalg::Matrix factor = linalg::cholesky(a_bar);
        linalg::Vector v(a_bar.rows(), 1.0 / std::sqrt(static_cast<double>(a_bar.rows())));
        double rayleigh = 0.0;
        for (int t = 0; t < 60; ++t) {
            linalg::Vector w = linalg::cholesky_solve(factor, v);
            const double nw = w.norm2();
            if (nw == 0.0) break;
            const double next = v.dot(w);
            w.scale(1.0 / nw);
            v = std::move(w);
            if (t > 0 && std::fabs(next - rayleigh) <= 1e-8 * std::max(1.0, std::fabs(next))) {
                rayleigh = next;
                break;
            }
            rayleigh = next;
        }
        if (rayleigh <= 0.0) return true;
        const double lam_min_lb = 1.0 / (1.01 * rayleigh);
        return lam_max / lam_min_lb > 1e8;
    } catch (const linalg::NotPositiveDefinite&) {
        return true;
    }
}

int resolve_threads(const BenchSpec& spec, std::size_t cells) {
    int t = spec.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("GDNM_THREADS")) t = std::atoi(env);
    }
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 0) t = 1;
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), cells));
}

BenchRow run_cell(const BenchSpec& spec, int m, int n, const std::string& solver_name) {
    BenchRow row;
    row.m = m;
    row.n = n;
    row.solver = solver_name;

    const lasso::LassoInstance inst = gen_instance(m, n, spec.seed, spec.mu_mode, spec.mu_value);
    const auto t0 = std::chrono::steady_clock::now();

    if (solver_name == "gdnm") {
        solver::SolverConfig cfg;
        cfg.grad_tol = spec.eta_tol;
        cfg.max_iter = spec.gdnm_max_iter;
        cfg.max_wall_seconds = spec.max_wall_seconds;
        const auto prob = lasso::to_composite(inst);
        const bool continuation = m < n || needs_continuation(prob.a_bar);
        composite::CompositeReport rep =
            continuation
                ? composite::tikhonov_solve(prob, cfg, composite::default_tikhonov_schedule())
                : composite::gdnm_composite_solve(prob, cfg);
        row.requires_tikhonov = continuation;
        row.iterations = rep.report.iterations;
        row.final_eta = lasso::kkt_residual(inst, rep.x);
        row.final_objective = inst.objective(rep.x);
        row.status = solver::to_string(rep.report.status);
    } else {
        baselines::BaselineConfig cfg;
        cfg.eta_tol = spec.eta_tol;
        cfg.max_iter = spec.baseline_max_iter;
        cfg.max_wall_seconds = spec.max_wall_seconds;
        cfg.record_trace = false;
        baselines::BaselineReport rep;
        if (solver_name == "ista")
            rep = baselines::ista_solve(inst, cfg);
        else if (solver_name == "fista")
            rep = baselines::fista_solve(inst, cfg);
        else if (solver_name == "apg")
            rep = baselines::apg_solve(inst, cfg);
        else if (solver_name == "admm")
            rep = baselines::admm_solve(inst, cfg);
        else
            throw std::invalid_argument("unknown solver '" + solver_name + "'");
        row.iterations = rep.report.iterations;
        row.final_eta = rep.report.final_eta;
        row.final_objective = rep.report.final_objective;
        row.status = solver::to_string(rep.report.status);
    }

    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
    struct Cell {
        int m, n;
        std::string solver;
    };
    std::vector<Cell> cells;
    for (const auto& [m, n] : spec.sizes)
        for (const auto& solver_name : spec.solvers) cells.push_back({m, n, solver_name});

    std::vector<BenchRow> rows(cells.size());
    if (cells.empty()) return rows;

    const int threads = resolve_threads(spec, cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                rows[i] = run_cell(spec, cells[i].m, cells[i].n, cells[i].solver);
            } catch (const std::exception& e) {
                // a failing cell is reported in its row; the run continues
                rows[i].m = cells[i].m;
                rows[i].n = cells[i].n;
                rows[i].solver = cells[i].solver;
                rows[i].status = std::string("Error: ") + e.what();
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace gdnm::bench
