#include "ssnmf/snpa.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "ssnmf/ksparse_nnls.hpp"
#include "ssnmf/nnls.hpp"
#include "ssnmf/parallel.hpp"

namespace ssnmf {

namespace {

using Index = Eigen::Index;
using Projector = std::function<Vector(const Matrix& dictionary, const Vector& column)>;

// Columns whose residual is already this small relative to their norm keep
// their coefficients: enlarging the dictionary cannot make them worse.
constexpr double kSettled = 1e-14;

SelectionResult greedy_selection(const Matrix& M, const StopRule& stop, const IndexSet& initial,
                                 const Projector& project, const SolverConfig& cfg) {
    stop.validate();
    require_finite(M);
    check_normalized(M, cfg);
    const Index n = M.cols();
    initial.validate_for(static_cast<std::size_t>(n));

    const double threshold = (stop.delta_rel > 0.0 ? stop.delta_rel : cfg.eps_zero) * M.norm();
    const Vector column_norms = M.colwise().norm().transpose();

    SelectionResult result;
    result.H = Matrix::Zero(0, n);
    Matrix R = M;

    const auto extend = [&](std::size_t picked) {
        result.selected.push_back(picked);
        const Matrix dictionary = select_columns(M, result.selected);
        const auto atoms = static_cast<Index>(result.selected.size());
        Matrix H = Matrix::Zero(atoms, n);
        H.topRows(atoms - 1) = result.H;

        parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t js) {
            const auto j = static_cast<Index>(js);
            const std::size_t pos = result.selected.position_of(js);
            if (pos < result.selected.size()) {
                H.col(j).setZero();
                H(static_cast<Index>(pos), j) = 1.0;
                R.col(j).setZero();
                return;
            }
            if (R.col(j).norm() <= kSettled * column_norms(j)) return;
            const Vector h = project(dictionary, M.col(j));
            H.col(j) = h;
            R.col(j) = M.col(j) - dictionary * h;
        });

        result.H = std::move(H);
        result.residual_trace.push_back(R.norm());
    };

    for (std::size_t idx : initial) extend(idx);

    for (;;) {
        if (R.norm() <= threshold) {
            result.stopped_by = stop.delta_rel > 0.0 ? StopReason::Tolerance : StopReason::ZeroResidual;
            break;
        }
        if (stop.max_atoms && result.selected.size() >= *stop.max_atoms) {
            result.stopped_by = StopReason::MaxAtoms;
            break;
        }
        Index picked = -1;
        double best = -1.0;
        for (Index j = 0; j < n; ++j) {
            if (result.selected.contains(static_cast<std::size_t>(j))) continue;
            const double v = R.col(j).squaredNorm();
            if (v > best) {
                best = v;
                picked = j;
            }
        }
        if (picked < 0) {
            result.stopped_by = StopReason::ZeroResidual;
            break;
        }
        extend(static_cast<std::size_t>(picked));
    }
    return result;
}

}  // namespace

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::ZeroResidual: return "zero-residual";
        case StopReason::Tolerance: return "tolerance";
        case StopReason::MaxAtoms: return "max-atoms";
    }
    return "unknown";
}

void StopRule::validate() const {
    if (max_atoms && *max_atoms < 1) throw BadParams("max_atoms must be >= 1");
    if (!(delta_rel >= 0.0 && delta_rel < 1.0)) throw BadParams("delta_rel must lie in [0, 1)");
}

void check_normalized(const Matrix& M, const SolverConfig& cfg) {
    if (!cfg.strict_normalize) return;
    for (Index j = 0; j < M.cols(); ++j) {
        const double s = M.col(j).lpNorm<1>();
        if (std::abs(s - 1.0) > 1e-6) {
            throw NotNormalized("column " + std::to_string(j) + " has l1 norm " + std::to_string(s));
        }
    }
}

SelectionResult snpa(const Matrix& M, const StopRule& stop, const SolverConfig& cfg) {
    const Projector project = [&cfg](const Matrix& dictionary, const Vector& column) {
        return nnls_solve(dictionary, column, ConstraintMode::SimplexLE, cfg).h;
    };
    return greedy_selection(M, stop, IndexSet{}, project, cfg);
}

SelectionResult kssnpa(const Matrix& M, std::size_t k, const StopRule& stop, const IndexSet& initial,
                       const SolverConfig& cfg) {
    if (k < 1) throw BadParams("sparsity level k must be >= 1");
    const Projector project = [&cfg, k](const Matrix& dictionary, const Vector& column) {
        return ksparse_nnls_exact(dictionary, column, k, ConstraintMode::SimplexLE, cfg).h.dense();
    };
    return greedy_selection(M, stop, initial, project, cfg);
}

}  // namespace ssnmf
