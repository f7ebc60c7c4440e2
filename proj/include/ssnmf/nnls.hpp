#pragma once

#include <cstddef>

#include "ssnmf/config.hpp"
#include "ssnmf/errors.hpp"
#include "ssnmf/matrix.hpp"

namespace ssnmf {

/// Feasible set of a least-squares subproblem min ||b - A h||_2^2.
enum class ConstraintMode {
    Nonneg,     ///< h >= 0
    SimplexLE,  ///< h >= 0, sum(h) <= 1 (convex hull of the origin and the columns)
    SimplexEQ,  ///< h >= 0, sum(h) == 1 (convex hull of the columns)
};

const char* to_string(ConstraintMode mode);

struct NnlsSolution {
    Vector h;
    double objective = 0.0;  ///< ||b - A h||_2^2
    std::size_t iterations = 0;
    bool converged = false;
};

/// Iteration cap reached; best() is the last feasible iterate.
class NotConverged : public Error {
public:
    NotConverged(const std::string& what, NnlsSolution best) : Error(what), best_(std::move(best)) {}
    const NnlsSolution& best() const noexcept { return best_; }

private:
    NnlsSolution best_;
};

/// Global minimizer of ||b - A h||_2^2 over the feasible set of `mode`.
///
/// Nonneg is solved with the Lawson-Hanson active-set method. SimplexEQ runs
/// the same active-set iteration with the passive least-squares subproblem
/// restricted to sum(z) == 1 by eliminating one passive variable. SimplexLE is
/// SimplexEQ on [A, 0]: the appended zero column is a slack that absorbs
/// 1 - sum(h). Ties between entering columns go to the lowest index.
NnlsSolution nnls_solve(const Matrix& A, const Vector& b, ConstraintMode mode,
                        const SolverConfig& cfg = {});

/// Projected-gradient residual ||h - P(h - g)||_inf with g = A^T (A h - b)
/// and P the Euclidean projection onto the feasible set of `mode`. It is zero
/// exactly when h is optimal. Throws InfeasiblePoint if h violates the mode's
/// constraints by more than 1e-10.
double kkt_residual(const Matrix& A, const Vector& b, const Vector& h, ConstraintMode mode);

/// Euclidean projection of y onto {x >= 0, sum(x) == 1}.
Vector project_onto_simplex(const Vector& y);

}  // namespace ssnmf
