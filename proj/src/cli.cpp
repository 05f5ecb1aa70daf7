#include "gdnm/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdnm/baselines.hpp"
#include "gdnm/bench.hpp"
#include "gdnm/composite.hpp"
#include "gdnm/lasso.hpp"
#include "gdnm/report.hpp"

namespace gdnm::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kSolverNames = {"gdnm", "ista", "fista", "apg", "admm"};

int fail(const std::string& msg) {
    std::cerr << "gdnm: " << msg << '\n';
    return 1;
}

int write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) return fail("cannot write '" + out_path + "'");
    out << payload;
    return 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) parts.push_back(tok);
    return parts;
}

struct SolveArgs {
    std::string matrix, rhs, out;
    double mu = 0.0;
    bool mu_relative = false;
    std::string solver = "gdnm";
    double eps = 1e-6;
    double sigma = 0.25;
    double beta = 0.5;
    int max_iter = 1000;
    bool tikhonov = false;
    std::string format = "json";
    double gamma_safety = 0.95;
    double admm_rho = 1.0;
    double backtrack_beta = 0.5;
    bool mu_given = false;
};

int cmd_solve(const SolveArgs& a) {
    lasso::LassoInstance inst;
    try {
        inst.a = linalg::load_matrix_csv(a.matrix);
        inst.b = linalg::load_vector_csv(a.rhs);
    } catch (const std::exception& e) {
        return fail(e.what());
    }

    std::string mu_mode = "relative";
    try {
        if (a.mu_given) {
            if (!(a.mu > 0.0)) return fail("mu must be positive");
            inst.mu = a.mu;
            mu_mode = "fixed";
        } else {
            inst.mu = lasso::mu_default(inst.a, inst.b);
        }
        inst.validate();
    } catch (const std::exception& e) {
        return fail(e.what());
    }

    const solver::SolverConfig defaults;
    json config = {{"matrix", a.matrix},
                   {"rhs", a.rhs},
                   {"mu", inst.mu},
                   {"mu_mode", mu_mode},
                   {"solver", a.solver},
                   {"eps", a.eps},
                   {"sigma", a.sigma},
                   {"beta", a.beta},
                   {"max_iter", a.max_iter},
                   {"max_backtracks", defaults.max_backtracks},
                   {"tau_min", defaults.tau_min},
                   {"max_wall_seconds", defaults.max_wall_seconds},
                   {"tikhonov", a.tikhonov},
                   {"gamma_safety", a.gamma_safety},
                   {"admm_rho", a.admm_rho},
                   {"backtrack_beta", a.backtrack_beta},
                   {"format", a.format},
                   {"out", a.out}};

    json result;
    solver::Status status;
    std::vector<solver::IterationRecord> trace;
    try {
        if (a.solver == "gdnm") {
            solver::SolverConfig cfg;
            cfg.sigma = a.sigma;
            cfg.beta = a.beta;
            cfg.grad_tol = a.eps;
            cfg.max_iter = a.max_iter;
            cfg.validate();
            const auto prob = lasso::to_composite(inst);
            const auto schedule = composite::default_tikhonov_schedule();
            if (a.tikhonov) config["tikhonov_schedule"] = schedule;
            composite::CompositeReport rep =
                a.tikhonov ? composite::tikhonov_solve(prob, cfg, schedule)
                           : composite::gdnm_composite_solve(prob, cfg, a.gamma_safety);
            status = rep.report.status;
            trace = rep.report.trace;
            result = report::to_json(rep);
        } else if (a.solver == "ista" || a.solver == "fista" || a.solver == "apg" ||
                   a.solver == "admm") {
            if (a.tikhonov) return fail("--tikhonov applies to the gdnm solver only");
            baselines::BaselineConfig cfg;
            cfg.eta_tol = a.eps;
            cfg.max_iter = a.max_iter;
            cfg.admm_rho = a.admm_rho;
            cfg.backtrack_beta = a.backtrack_beta;
            cfg.validate();
            baselines::BaselineReport rep;
            if (a.solver == "ista")
                rep = baselines::ista_solve(inst, cfg);
            else if (a.solver == "fista")
                rep = baselines::fista_solve(inst, cfg);
            else if (a.solver == "apg")
                rep = baselines::apg_solve(inst, cfg);
            else
                rep = baselines::admm_solve(inst, cfg);
            status = rep.report.status;
            trace = rep.report.trace;
            result = report::to_json(rep.report);
            result["lipschitz_bound"] = rep.stats.lipschitz_bound;
            result["total_backtracks"] = rep.stats.total_backtracks;
        } else {
            return fail("unknown solver '" + a.solver + "'");
        }
    } catch (const solver::InvalidConfig& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        std::cerr << "gdnm: solver failed: " << e.what() << '\n';
        return 2;
    }

    std::string payload;
    if (a.format == "csv") {
        payload = report::trace_csv(trace);
    } else {
        payload = report::make_document("solve", std::move(config), std::move(result)).dump(2);
        payload += '\n';
    }
    const int rc = write_output(a.out, payload);
    if (rc != 0) return rc;
    return status == solver::Status::Converged ? 0 : 2;
}

struct GenArgs {
    int m = 0, n = 0;
    std::uint64_t seed = 0;
    std::string out_prefix;
};

int cmd_gen(const GenArgs& a) {
    if (a.m < 1 || a.n < 1) return fail("m and n must be >= 1");
    try {
        // mu is not materialized in the files; only A and b are written
        const auto inst = bench::gen_instance(a.m, a.n, a.seed, bench::MuMode::Fixed, 1.0);
        linalg::save_matrix_csv(a.out_prefix + "_A.csv", inst.a);
        linalg::save_vector_csv(a.out_prefix + "_b.csv", inst.b);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    std::cout << "wrote " << a.out_prefix << "_A.csv and " << a.out_prefix << "_b.csv ("
              << bench::kPrngId << ", seed " << a.seed << ")\n";
    return 0;
}

struct BenchArgs {
    std::string sizes;
    std::uint64_t seed = 1;
    std::string solvers = "gdnm,ista,fista,apg,admm";
    std::string mu_mode = "relative";
    double eta_tol = 1e-6;
    double max_wall_seconds = 6000.0;
    int gdnm_max_iter = 1000;
    int baseline_max_iter = 200000;
    std::string out;
    std::string format = "csv";
};

int cmd_bench(const BenchArgs& a) {
    bench::BenchSpec spec;
    for (const auto& tok : split(a.sizes, ',')) {
        const auto xpos = tok.find('x');
        if (xpos == std::string::npos || xpos == 0 || xpos + 1 >= tok.size())
            return fail("malformed size token '" + tok + "' (expected MxN)");
        try {
            const int m = std::stoi(tok.substr(0, xpos));
            const int n = std::stoi(tok.substr(xpos + 1));
            if (m < 1 || n < 1) return fail("sizes must be positive");
            spec.sizes.emplace_back(m, n);
        } catch (const std::exception&) {
            return fail("malformed size token '" + tok + "'");
        }
    }
    if (spec.sizes.empty()) return fail("--sizes must name at least one MxN pair");

    if (!a.solvers.empty()) {
        for (const auto& s : split(a.solvers, ',')) {
            if (std::find(kSolverNames.begin(), kSolverNames.end(), s) == kSolverNames.end())
                return fail("unknown solver '" + s + "'");
            spec.solvers.push_back(s);
        }
    }

    if (a.mu_mode == "relative") {
        spec.mu_mode = bench::MuMode::Relative;
    } else if (a.mu_mode.rfind("fixed:", 0) == 0) {
        spec.mu_mode = bench::MuMode::Fixed;
        try {
            spec.mu_value = std::stod(a.mu_mode.substr(6));
        } catch (const std::exception&) {
            return fail("malformed --mu-mode value '" + a.mu_mode + "'");
        }
        if (!(spec.mu_value > 0.0)) return fail("mu must be positive");
    } else {
        return fail("--mu-mode must be 'relative' or 'fixed:VALUE'");
    }

    spec.seed = a.seed;
    spec.eta_tol = a.eta_tol;
    spec.max_wall_seconds = a.max_wall_seconds;
    spec.gdnm_max_iter = a.gdnm_max_iter;
    spec.baseline_max_iter = a.baseline_max_iter;
    if (!(spec.eta_tol > 0.0)) return fail("eta-tol must be positive");

    const auto rows = bench::run_bench(spec);

    std::string payload;
    if (a.format == "json") {
        json config = {{"sizes", a.sizes},
                       {"seed", a.seed},
                       {"solvers", a.solvers},
                       {"mu_mode", a.mu_mode},
                       {"eta_tol", a.eta_tol},
                       {"max_wall_seconds", a.max_wall_seconds},
                       {"gdnm_max_iter", a.gdnm_max_iter},
                       {"baseline_max_iter", a.baseline_max_iter},
                       {"prng_id", bench::kPrngId},
                       {"format", a.format},
                       {"out", a.out}};
        json jrows = json::array();
        for (const auto& row : rows) jrows.push_back(report::to_json(row));
        payload = report::make_document("bench", std::move(config), {{"rows", std::move(jrows)}})
                      .dump(2);
        payload += '\n';
    } else {
        payload = report::bench_rows_csv(rows);
    }
    return write_output(a.out, payload);
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Damped Newton and first-order solvers for l1-regularized least squares"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve an instance given as CSV files");
    solve->add_option("--matrix", sa.matrix, "CSV file with the m x n matrix A")->required();
    solve->add_option("--rhs", sa.rhs, "CSV file with the right-hand side b")->required();
    auto* mu_opt = solve->add_option("--mu", sa.mu, "l1 weight (positive)");
    solve->add_flag("--mu-relative", sa.mu_relative,
                    "mu = 1e-3 * ||A^T b||_inf (the default when --mu is absent)");
    solve->add_option("--solver", sa.solver, "gdnm|ista|fista|apg|admm")
        ->default_val("gdnm");
    solve->add_option("--eps", sa.eps, "stopping tolerance")->default_val(1e-6);
    solve->add_option("--sigma", sa.sigma, "Armijo slope fraction")->default_val(0.25);
    solve->add_option("--beta", sa.beta, "backtracking shrink factor")->default_val(0.5);
    solve->add_option("--max-iter", sa.max_iter, "iteration cap")->default_val(1000);
    solve->add_flag("--tikhonov", sa.tikhonov, "outer Tikhonov loop (gdnm, PSD-safe)");
    solve->add_option("--out", sa.out, "report file (stdout when absent)");
    solve->add_option("--format", sa.format, "json|csv")
        ->default_val("json")
        ->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--gamma-safety", sa.gamma_safety, "gamma = safety / lambda_max(A^T A)")
        ->default_val(0.95);
    solve->add_option("--admm-rho", sa.admm_rho, "ADMM penalty")->default_val(1.0);
    solve->add_option("--backtrack-beta", sa.backtrack_beta, "APG step shrink factor")
        ->default_val(0.5);
    mu_opt->excludes("--mu-relative");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a random instance as CSV files");
    gen->add_option("--m", ga.m, "rows")->required();
    gen->add_option("--n", ga.n, "columns")->required();
    gen->add_option("--seed", ga.seed, "PRNG seed")->required();
    gen->add_option("--out-prefix", ga.out_prefix, "writes PREFIX_A.csv and PREFIX_b.csv")
        ->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "run the multi-solver benchmark table");
    bench_cmd->add_option("--sizes", ba.sizes, "comma list of MxN, e.g. 1024x256,512x512")
        ->required();
    bench_cmd->add_option("--seed", ba.seed, "PRNG seed")->default_val(1);
    bench_cmd->add_option("--solvers", ba.solvers, "comma list (empty for none)")
        ->default_val("gdnm,ista,fista,apg,admm");
    bench_cmd->add_option("--mu-mode", ba.mu_mode, "relative | fixed:VALUE")
        ->default_val("relative");
    bench_cmd->add_option("--eta-tol", ba.eta_tol, "KKT residual tolerance")->default_val(1e-6);
    bench_cmd->add_option("--max-wall-seconds", ba.max_wall_seconds, "per-solve wall cap")
        ->default_val(6000.0);
    bench_cmd->add_option("--gdnm-max-iter", ba.gdnm_max_iter, "")->default_val(1000);
    bench_cmd->add_option("--baseline-max-iter", ba.baseline_max_iter, "")->default_val(200000);
    bench_cmd->add_option("--out", ba.out, "table file (stdout when absent)");
    bench_cmd->add_option("--format", ba.format, "csv|json")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "json"}));

    std::vector<const char*> argv;
    argv.push_back("gdnm");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "gdnm: " << e.what() << '\n';
        return 1;
    }

    sa.mu_given = mu_opt->count() > 0;
    if (solve->parsed()) return cmd_solve(sa);
    if (gen->parsed()) return cmd_gen(ga);
    if (bench_cmd->parsed()) return cmd_bench(ba);
    return 1;
}

} // namespace gdnm::cli
