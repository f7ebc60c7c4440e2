#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssnmf/config.hpp"
#include "ssnmf/matrix.hpp"

namespace ssnmf {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInfeasible = 2, kExitLemma = 3 };

struct GenOptions {
    std::size_t m = 3, n = 25, r = 5, k = 2;
    std::uint64_t seed = 0;
    bool fixture = false;  ///< write the interior-vertex fixture instead
    std::string out;       ///< M as CSV; planted indices go to <stem>.planted.txt, H to <stem>.H.csv
};

struct SolveOptions {
    std::string input;
    std::size_t k = 2;
    double delta = 0.0;
    std::string out_prefix;  ///< writes <prefix>J.txt, <prefix>H.csv, <prefix>summary.json
    bool snpa_only = false;
    bool strict_normalize = false;  ///< reject inputs that are not l1-normalized instead of scaling them
    unsigned threads = 1;
};

struct BenchOptions {
    std::string grid = "3,25,5,2";
    std::size_t trials = 30;
    std::uint64_t seed = 0;
    std::string out;  ///< per-trial CSV; summary goes to <stem>.summary.json
    unsigned threads = 1;
};

struct ReduceOptions {
    std::string input;  ///< SET-COVER JSON
    std::string out;    ///< M as CSV; metadata goes to <stem>.json
};

struct UnmixOptions {
    std::vector<std::string> inputs;  ///< one CSV (bands x pixels) or one PGM per band
    std::size_t k = 2;
    double delta = 0.04;
    std::optional<std::size_t> width, height;
    std::string out_dir;  ///< H.csv, J.txt, summary.json, maps/<i>.pgm
    bool strict_normalize = false;
    unsigned threads = 1;
};

/// Each command reports progress on `log` and throws ssnmf::Error on failure;
/// exit_code_for maps those errors to process exit codes.
int cmd_gen(const GenOptions& opt, std::ostream& log);
int cmd_solve(const SolveOptions& opt, std::ostream& log);
int cmd_bench(const BenchOptions& opt, std::ostream& log);
int cmd_reduce(const ReduceOptions& opt, std::ostream& log);
int cmd_unmix(const UnmixOptions& opt, std::ostream& log);

int exit_code_for(const std::exception& e);

/// Result of a solve on the caller's scaling: M ~ M(:, J) H.
struct SolveResult {
    IndexSet J;
    Matrix H;
    IndexSet candidates;
    IndexSet exterior;
    double residual_rel = 0.0;
};

/// l1-normalizes the columns (or checks them when strict), runs brassens or
/// SNPA alone, and rescales H back to the input columns.
SolveResult solve_matrix(const Matrix& M, std::size_t k, double delta, bool snpa_only, bool strict,
                         const SolverConfig& cfg = {});

/// `path` with its extension replaced (or appended when it has none).
std::string with_extension(const std::string& path, const std::string& ext);

}  // namespace ssnmf
