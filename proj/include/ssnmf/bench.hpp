#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssnmf/config.hpp"
#include "ssnmf/instances.hpp"

namespace ssnmf {

struct BenchParams {
    std::size_t m = 0, n = 0, r = 0, k = 0;
};

struct TrialRow {
    BenchParams params;
    std::uint64_t seed = 0;
    std::size_t candidates = 0;
    double runtime_s = 0.0;
    bool recovered = false;
    std::string error;  ///< set when the solver threw; the trial counts as not recovered
};

struct BenchReport {
    BenchParams params;
    std::size_t trials = 0;
    double median_candidates = 0.0;
    double median_runtime_s = 0.0;
    double recovery_rate = 0.0;
    std::vector<TrialRow> rows;  ///< ordered by seed
};

/// Odd count: middle element; even count: mean of the two middle elements.
double median(std::vector<double> values);

/// Summary fields recomputed from the rows.
void summarize(BenchReport& report);

/// gen_synthetic + brassens(delta = 0) + verify_recovery for seeds
/// seed0 .. seed0 + trials - 1. cfg.threads trials run concurrently; each
/// solve is single-threaded.
BenchReport run_bench(const BenchParams& params, std::size_t trials, std::uint64_t seed0,
                      const SolverConfig& cfg = {});

/// "m,n,r,k;m,n,r,k;..." Throws BadParams.
std::vector<BenchParams> parse_grid(const std::string& grid);

/// Header "m,n,r,k,seed,candidates,runtime_s,recovered", runtime with 3 decimals.
void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& reports);

}  // namespace ssnmf
