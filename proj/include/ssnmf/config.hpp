#pragma once

#include <cstddef>
#include <optional>

namespace ssnmf {

struct SolverConfig {
    /// Optimality tolerance on the projected-gradient residual of NNLS solves.
    double kkt_tol = 1e-12;
    /// Iteration cap for one NNLS solve; 0 means 50 * (number of variables).
    std::size_t max_iter = 0;
    /// Node cap for the branch-and-bound; unset means unlimited when the
    /// dictionary has at most 30 columns and 1'000'000 otherwise.
    std::optional<std::size_t> max_nodes;
    /// Relative tolerance (against ||M||_F) for treating a residual as zero.
    double eps_zero = 1e-9;
    /// Verify unit l1 columns before greedy selection.
    bool strict_normalize = true;
    /// Worker threads for per-column subproblems. Results do not depend on it.
    unsigned threads = 1;
};

}  // namespace ssnmf
