#pragma once

#include <cstddef>

#include "ssnmf/config.hpp"
#include "ssnmf/matrix.hpp"

namespace ssnmf {

struct BrassensOutput {
    IndexSet J;           ///< vertex columns, in extraction order
    Matrix H;             ///< |J| x cols(M), column-wise k-sparse, nonnegative
    IndexSet candidates;  ///< kSSNPA selection (contains `exterior`)
    IndexSet exterior;    ///< SNPA selection
    double residual_rel = 0.0;  ///< ||M - M(:,J) H||_F / ||M||_F
};

/// Sparse separable NMF of an l1-normalized matrix:
///   1. SNPA picks the exterior vertices,
///   2. kSSNPA extends them into a candidate set,
///   3. candidates that are k-sparse combinations of the other candidates are dropped,
///   4. H is the exact k-sparse nonnegative fit of M on the survivors.
/// Steps 1-2 stop at ||R||_F <= delta_rel ||M||_F (cfg.eps_zero when
/// delta_rel is 0). Throws Infeasible when the final residual misses that
/// target, which happens only when the recovery assumptions fail.
BrassensOutput brassens(const Matrix& M, std::size_t k, double delta_rel, const SolverConfig& cfg = {});

/// Keeps the candidates that are not k-sparse nonnegative combinations of the
/// remaining candidates (within tol_rel). Every check uses the full input set,
/// and the input order is preserved.
IndexSet postprocess_candidates(const Matrix& M, const IndexSet& candidates, std::size_t k, double tol_rel,
                                const SolverConfig& cfg = {});

/// Column j is the exact k-sparse nonnegative least-squares fit of M(:,j) by
/// M(:,J). Columns in J get their own unit vector.
Matrix compute_final_H(const Matrix& M, const IndexSet& J, std::size_t k, const SolverConfig& cfg = {});

/// True iff {M(:,j) : j in found} and {M(:,j) : j in planted} are the same
/// set of columns after l1 scaling (entrywise tolerance 1e-7).
bool verify_recovery(const IndexSet& found, const IndexSet& planted, const Matrix& M);

struct FactorizationCheck {
    bool nonnegative = false;
    bool sparse = false;  ///< every column of H has at most k nonzeros
    double max_abs_error = 0.0;
    bool ok(double tol) const { return nonnegative && sparse && max_abs_error <= tol; }
};

/// Shared validator for k-sparse factorizations M = W H.
FactorizationCheck check_factorization(const Matrix& M, const Matrix& W, const Matrix& H, std::size_t k);

}  // namespace ssnmf
