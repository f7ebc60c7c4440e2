#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ssnmf/config.hpp"
#include "ssnmf/matrix.hpp"
#include "ssnmf/nnls.hpp"

namespace ssnmf {

/// Explicit support with nonnegative values; off-support entries are zero.
struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::size_t> support;  // increasing
    std::vector<double> values;        // aligned with support, all > 0

    std::size_t nnz() const noexcept { return support.size(); }
    Vector dense() const;
    /// Keeps the strictly positive coordinates of a dense vector.
    static SparseVector from_dense(const Vector& h);
};

struct SparseSolution {
    SparseVector h;
    double objective = 0.0;  ///< ||b - A h||_2^2
    /// Branch-and-bound: relaxations solved. Brute force: restricted NNLS solves.
    std::size_t work = 0;
};

/// A branch-and-bound node: `forbidden` coordinates are fixed to zero,
/// `locked` coordinates count toward the sparsity budget. `relaxed` solves the
/// subproblem over every non-forbidden coordinate without the sparsity
/// constraint, so `bound` lower-bounds every descendant.
struct BnbNode {
    std::vector<std::size_t> forbidden;
    std::vector<std::size_t> locked;
    NnlsSolution relaxed;
    double bound = 0.0;
};

using BnbObserver = std::function<void(const BnbNode&)>;

/// Global minimizer of ||b - A h||_2^2 over {h feasible for mode, ||h||_0 <= k}.
///
/// Best-first branch-and-bound over supports. The incumbent starts from the
/// k largest coordinates of the root relaxation. A node whose relaxation has
/// more than k nonzeros branches on its smallest positive unlocked coordinate:
/// one child forbids it, the other locks it. When k >= cols(A) the constraint
/// is inactive and the result is nnls_solve itself. `observer`, when set, sees
/// every node whose relaxation was solved.
SparseSolution ksparse_nnls_exact(const Matrix& A, const Vector& b, std::size_t k, ConstraintMode mode,
                                  const SolverConfig& cfg = {}, const BnbObserver& observer = {});

/// Enumerates every support of size min(k, cols(A)) in lexicographic order
/// and keeps the best; ties go to the earliest support. Throws
/// TooManySupports above 10^6 supports.
SparseSolution ksparse_nnls_bruteforce(const Matrix& A, const Vector& b, std::size_t k, ConstraintMode mode,
                                       const SolverConfig& cfg = {});

/// True iff the best nonnegative k-sparse fit of b by the columns of A has
/// residual at most tol_rel * ||b||_2. An empty dictionary represents only b = 0.
bool is_ksparse_representable(const Matrix& A, const Vector& b, std::size_t k, double tol_rel,
                              const SolverConfig& cfg = {});

/// Number of k-subsets of n items, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace ssnmf
