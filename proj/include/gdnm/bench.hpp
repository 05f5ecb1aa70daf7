#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gdnm/baselines.hpp"
#include "gdnm/composite.hpp"
#include "gdnm/lasso.hpp"

namespace gdnm::bench {

/// Identifier of the generator and normal-variate transform; recorded in
/// every report so runs are reproducible across builds.
inline constexpr const char* kPrngId = "mt19937_64/polar-box-muller";

/// Standard normal sampler: mt19937_64 bits mapped to [0,1) doubles via
/// (x >> 11) * 2^-53, paired through the Marsaglia polar transform.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}
    double next();

private:
    double uniform();
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class MuMode { Fixed, Relative };

struct BenchSpec {
    std::vector<std::pair<int, int>> sizes;     // (m, n)
    MuMode mu_mode = MuMode::Relative;
    double mu_value = 1e-3;                     // used when mu_mode == Fixed
    std::uint64_t seed = 1;
    std::vector<std::string> solvers;           // subset of gdnm,ista,fista,apg,admm
    double eta_tol = 1e-6;
    double max_wall_seconds = 6000.0;
    int gdnm_max_iter = 1000;
    int baseline_max_iter = 200000;
    int threads = 0;                            // 0: GDNM_THREADS env or hardware
};

struct BenchRow {
    int m = 0, n = 0;
    std::string solver;
    int iterations = 0;
    double wall_seconds = 0.0;
    double final_eta = 0.0;
    double final_objective = 0.0;
    std::string status;
    bool requires_tikhonov = false;             // gdnm routed through tikhonov_solve (m < n)
};

/// Instance with i.i.d. standard normal A (m x n, filled row-major) and b
/// (length m) drawn from one seeded stream; mu per the chosen rule.
lasso::LassoInstance gen_instance(int m, int n, std::uint64_t seed,
                                  MuMode mu_mode = MuMode::Relative, double mu_value = 1e-3);

/// One row per (size, solver) cell, in spec order. Cells may run in
/// parallel; each regenerates its instance from (m, n, seed), so the
/// result is independent of the thread schedule. Wall time covers the
/// solve call only.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

} // namespace gdnm::bench
