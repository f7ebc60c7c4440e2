#include "ssnmf/brassens.hpp"

#include <string>
#include <vector>

#include "ssnmf/ksparse_nnls.hpp"
#include "ssnmf/parallel.hpp"
#include "ssnmf/snpa.hpp"

namespace ssnmf {

namespace {
using Index = Eigen::Index;
}

BrassensOutput brassens(const Matrix& M, std::size_t k, double delta_rel, const SolverConfig& cfg) {
    if (k < 1) throw BadParams("sparsity level k must be >= 1");
    const StopRule stop{std::nullopt, delta_rel};

    BrassensOutput out;
    out.exterior = snpa(M, stop, cfg).selected;
    out.candidates = kssnpa(M, k, stop, out.exterior, cfg).selected;

    const double tol_rel = delta_rel > 0.0 ? delta_rel : 1e-7;
    out.J = postprocess_candidates(M, out.candidates, k, tol_rel, cfg);
    if (out.J.empty()) throw Infeasible("postprocessing discarded every candidate");

    out.H = compute_final_H(M, out.J, k, cfg);
    const double norm = M.norm();
    out.residual_rel = norm > 0.0 ? residual_norm(M, out.J, out.H) / norm : 0.0;

    const double target = delta_rel > 0.0 ? delta_rel : cfg.eps_zero;
    if (out.residual_rel > target) {
        throw Infeasible("relative residual " + std::to_string(out.residual_rel) + " exceeds " +
                         std::to_string(target) + " with " + std::to_string(out.J.size()) + " vertices");
    }
    return out;
}

IndexSet postprocess_candidates(const Matrix& M, const IndexSet& candidates, std::size_t k, double tol_rel,
                                const SolverConfig& cfg) {
    candidates.validate_for(static_cast<std::size_t>(M.cols()));
    std::vector<char> keep(candidates.size(), 0);
    parallel_for(candidates.size(), cfg.threads, [&](std::size_t pos) {
        const Matrix others = select_columns(M, candidates.without_position(pos));
        const Vector column = M.col(static_cast<Index>(candidates[pos]));
        keep[pos] = !is_ksparse_representable(others, column, k, tol_rel, cfg);
    });
    IndexSet out;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
        if (keep[pos]) out.push_back(candidates[pos]);
    }
    return out;
}

Matrix compute_final_H(const Matrix& M, const IndexSet& J, std::size_t k, const SolverConfig& cfg) {
    if (J.empty()) throw BadParams("compute_final_H needs a nonempty index set");
    const Matrix dictionary = select_columns(M, J);
    Matrix H = Matrix::Zero(static_cast<Index>(J.size()), M.cols());
    parallel_for(static_cast<std::size_t>(M.cols()), cfg.threads, [&](std::size_t js) {
        const auto j = static_cast<Index>(js);
        const std::size_t pos = J.position_of(js);
        if (pos < J.size()) {
            H(static_cast<Index>(pos), j) = 1.0;
            return;
        }
        H.col(j) = ksparse_nnls_exact(dictionary, M.col(j), k, ConstraintMode::Nonneg, cfg).h.dense();
    });
    return H;
}

bool verify_recovery(const IndexSet& found, const IndexSet& planted, const Matrix& M) {
    const auto n = static_cast<std::size_t>(M.cols());
    found.validate_for(n);
    planted.validate_for(n);
    if (found.size() != planted.size()) return false;

    const auto scaled = [&M](std::size_t j) -> Vector {
        const Vector c = M.col(static_cast<Index>(j));
        const double s = c.lpNorm<1>();
        return s > 0.0 ? Vector(c / s) : c;
    };
    const auto covered = [&](const IndexSet& from, const IndexSet& into) {
        for (std::size_t a : from) {
            const Vector va = scaled(a);
            bool hit = false;
            for (std::size_t b : into) {
                if ((va - scaled(b)).lpNorm<Eigen::Infinity>() <= 1e-7) {
                    hit = true;
                    break;
                }
            }
            if (!hit) return false;
        }
        return true;
    };
    return covered(found, planted) && covered(planted, found);
}

FactorizationCheck check_factorization(const Matrix& M, const Matrix& W, const Matrix& H, std::size_t k) {
    if (W.rows() != M.rows() || W.cols() != H.rows() || H.cols() != M.cols()) {
        throw DimensionMismatch("factorization shapes do not match M");
    }
    FactorizationCheck check;
    check.nonnegative = H.size() == 0 || H.minCoeff() >= 0.0;
    check.sparse = true;
    for (Index j = 0; j < H.cols(); ++j) {
        if (static_cast<std::size_t>((H.col(j).array() != 0.0).count()) > k) check.sparse = false;
    }
    check.max_abs_error = M.size() == 0 ? 0.0 : (M - W * H).lpNorm<Eigen::Infinity>();
    return check;
}

}  // namespace ssnmf
