#include "ssnmf/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace ssnmf {

namespace {

using Index = Eigen::Index;

// Least squares over the passive columns, optionally with sum(z) == 1.
Vector solve_passive(const Matrix& A, const Vector& b, const std::vector<Index>& passive, bool sum_to_one) {
    const auto q = static_cast<Index>(passive.size());
    Vector z(q);
    if (!sum_to_one) {
        Matrix Ap(A.rows(), q);
        for (Index i = 0; i < q; ++i) Ap.col(i) = A.col(passive[static_cast<std::size_t>(i)]);
        z = Ap.completeOrthogonalDecomposition().solve(b);
        return z;
    }
    if (q == 1) {
        z(0) = 1.0;
        return z;
    }
    // z_0 = 1 - sum(y), the remaining coordinates are free.
    const Vector pivot = A.col(passive[0]);
    Matrix D(A.rows(), q - 1);
    for (Index i = 1; i < q; ++i) D.col(i - 1) = A.col(passive[static_cast<std::size_t>(i)]) - pivot;
    const Vector y = D.completeOrthogonalDecomposition().solve(b - pivot);
    z(0) = 1.0 - y.sum();
    z.tail(q - 1) = y;
    return z;
}

NnlsSolution active_set(const Matrix& A, const Vector& b, bool sum_to_one, Index start,
                        std::size_t max_iter, double dual_tol) {
    const Index p = A.cols();
    Vector x = Vector::Zero(p);
    std::vector<char> passive(static_cast<std::size_t>(p), 0);
    std::vector<char> rejected(static_cast<std::size_t>(p), 0);
    if (sum_to_one) {
        x(start) = 1.0;
        passive[static_cast<std::size_t>(start)] = 1;
    }

    std::size_t iter = 0;
    const auto bump = [&] {
        if (++iter > max_iter) {
            NnlsSolution best{x, (b - A * x).squaredNorm(), iter, false};
            throw NotConverged("NNLS active set did not converge in " + std::to_string(max_iter) +
                                   " iterations",
                               std::move(best));
        }
    };

    for (;;) {
        const Vector grad = A.transpose() * (A * x - b);
        double ref = 0.0;
        if (sum_to_one) {
            // Common gradient value on the passive face (the equality multiplier).
            double total = 0.0;
            Index count = 0;
            for (Index j = 0; j < p; ++j) {
                if (passive[static_cast<std::size_t>(j)]) {
                    total += grad(j);
                    ++count;
                }
            }
            ref = total / static_cast<double>(std::max<Index>(count, 1));
        }

        Index entering = -1;
        double best = ref - dual_tol;
        for (Index j = 0; j < p; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (!passive[js] && !rejected[js] && grad(j) < best) {
                best = grad(j);
                entering = j;
            }
        }
        if (entering < 0) break;
        bump();
        passive[static_cast<std::size_t>(entering)] = 1;

        bool first = true;
        for (;;) {
            std::vector<Index> idx;
            for (Index j = 0; j < p; ++j) {
                if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
            }
            const Vector z = solve_passive(A, b, idx, sum_to_one);

            if (first) {
                first = false;
                const auto pos = std::find(idx.begin(), idx.end(), entering) - idx.begin();
                if (z(pos) <= 0.0) {
                    // Roundoff made the entering column look useful; drop it until x moves.
                    passive[static_cast<std::size_t>(entering)] = 0;
                    rejected[static_cast<std::size_t>(entering)] = 1;
                    break;
                }
            }

            if ((z.array() > 0.0).all()) {
                x.setZero();
                for (std::size_t i = 0; i < idx.size(); ++i) x(idx[i]) = z(static_cast<Index>(i));
                std::fill(rejected.begin(), rejected.end(), 0);
                break;
            }

            double alpha = std::numeric_limits<double>::infinity();
            Index blocking = -1;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const double zi = z(static_cast<Index>(i));
                if (zi <= 0.0) {
                    const double xi = x(idx[i]);
                    const double ratio = xi / (xi - zi);
                    if (ratio < alpha) {
                        alpha = ratio;
                        blocking = idx[i];
                    }
                }
            }
            for (std::size_t i = 0; i < idx.size(); ++i) {
                x(idx[i]) += alpha * (z(static_cast<Index>(i)) - x(idx[i]));
            }
            x(blocking) = 0.0;
            passive[static_cast<std::size_t>(blocking)] = 0;
            for (Index j : idx) {
                if (x(j) <= 0.0) {
                    x(j) = 0.0;
                    passive[static_cast<std::size_t>(j)] = 0;
                }
            }
            std::fill(rejected.begin(), rejected.end(), 0);
            bump();
        }
    }

    if (sum_to_one) {
        const double s = x.sum();
        if (s > 0.0) x /= s;
    }
    return NnlsSolution{x, (b - A * x).squaredNorm(), iter, true};
}

}  // namespace

const char* to_string(ConstraintMode mode) {
    switch (mode) {
        case ConstraintMode::Nonneg: return "nonneg";
        case ConstraintMode::SimplexLE: return "simplex-le";
        case ConstraintMode::SimplexEQ: return "simplex-eq";
    }
    return "unknown";
}

NnlsSolution nnls_solve(const Matrix& A, const Vector& b, ConstraintMode mode, const SolverConfig& cfg) {
    if (A.cols() < 1) throw DimensionMismatch("NNLS needs at least one column");
    if (A.rows() != b.size()) throw DimensionMismatch("rows(A) != size(b)");
    if (!A.allFinite() || !b.allFinite()) throw NonFiniteEntry("NNLS input contains NaN or infinite entries");

    const Index p = A.cols();
    const std::size_t max_iter = cfg.max_iter ? cfg.max_iter : 50 * static_cast<std::size_t>(p);
    const double anorm = A.norm();
    const double dual_tol = 0.01 * cfg.kkt_tol * std::max(1.0, anorm * (anorm + b.norm()));

    switch (mode) {
        case ConstraintMode::Nonneg:
            return active_set(A, b, false, 0, max_iter, dual_tol);
        case ConstraintMode::SimplexEQ: {
            Index start = 0;
            (A.colwise() - b).colwise().squaredNorm().minCoeff(&start);
            return active_set(A, b, true, start, max_iter, dual_tol);
        }
        case ConstraintMode::SimplexLE: {
            Matrix ext(A.rows(), p + 1);
            ext.leftCols(p) = A;
            ext.col(p).setZero();
            NnlsSolution sol = active_set(ext, b, true, p, max_iter, dual_tol);
            sol.h = sol.h.head(p).eval();
            return sol;
        }
    }
    throw BadParams("unknown constraint mode");
}

Vector project_onto_simplex(const Vector& y) {
    const Index n = y.size();
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0, theta = 0.0;
    for (Index j = 0; j < n; ++j) {
        cumsum += u[static_cast<std::size_t>(j)];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
    }
    return (y.array() - theta).max(0.0).matrix();
}

double kkt_residual(const Matrix& A, const Vector& b, const Vector& h, ConstraintMode mode) {
    if (A.cols() != h.size() || A.rows() != b.size()) throw DimensionMismatch("kkt_residual dimensions");
    constexpr double feas_tol = 1e-10;
    if (h.size() > 0 && h.minCoeff() < -feas_tol) throw InfeasiblePoint("negative coordinate");
    const double s = h.sum();
    if (mode == ConstraintMode::SimplexLE && s > 1.0 + feas_tol) throw InfeasiblePoint("sum(h) > 1");
    if (mode == ConstraintMode::SimplexEQ && std::abs(s - 1.0) > feas_tol) throw InfeasiblePoint("sum(h) != 1");

    const Vector grad = A.transpose() * (A * h - b);
    const Vector y = h - grad;
    Vector projected;
    switch (mode) {
        case ConstraintMode::Nonneg:
            projected = y.array().max(0.0).matrix();
            break;
        case ConstraintMode::SimplexLE:
            projected = y.array().max(0.0).matrix();
            if (projected.sum() > 1.0) projected = project_onto_simplex(y);
            break;
        case ConstraintMode::SimplexEQ:
            projected = project_onto_simplex(y);
            break;
    }
    return h.size() == 0 ? 0.0 : (h - projected).lpNorm<Eigen::Infinity>();
}

}  // namespace ssnmf
