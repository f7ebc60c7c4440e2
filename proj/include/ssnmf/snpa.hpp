#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ssnmf/config.hpp"
#include "ssnmf/matrix.hpp"

namespace ssnmf {

enum class StopReason { ZeroResidual, Tolerance, MaxAtoms };

const char* to_string(StopReason reason);

struct StopRule {
    std::optional<std::size_t> max_atoms;  ///< unset: run until the residual criterion fires
    double delta_rel = 0.0;                ///< stop once ||R||_F <= delta_rel * ||M||_F

    void validate() const;
};

struct SelectionResult {
    IndexSet selected;                   ///< extraction order
    Matrix H;                            ///< |selected| x cols(M)
    std::vector<double> residual_trace;  ///< ||R||_F after each extraction
    StopReason stopped_by = StopReason::ZeroResidual;
};

/// Throws NotNormalized if cfg.strict_normalize is set and some column's l1
/// norm differs from 1 by more than 1e-6.
void check_normalized(const Matrix& M, const SolverConfig& cfg);

/// Successive nonnegative projection: repeatedly pick the column with the
/// largest residual l2 norm (lowest index on ties) and project every column
/// onto the convex hull of the origin and the selected columns.
///
/// With delta_rel == 0 the residual counts as zero below cfg.eps_zero * ||M||_F.
SelectionResult snpa(const Matrix& M, const StopRule& stop, const SolverConfig& cfg = {});

/// SNPA with the projection restricted to k-sparse coefficient vectors
/// (sum(h) <= 1, ||h||_0 <= k). Starts from `initial` without re-extracting
/// it; the residual trace still has one entry per selected column.
SelectionResult kssnpa(const Matrix& M, std::size_t k, const StopRule& stop, const IndexSet& initial,
                       const SolverConfig& cfg = {});

}  // namespace ssnmf
