#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ssnmf/matrix.hpp"
#include "ssnmf/nnls.hpp"

namespace ssnmf::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo = 0.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix A(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) A(i, j) = u(rng);
    }
    return A;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = 0.0, double hi = 1.0) {
    return random_matrix(rng, n, 1, lo, hi).col(0);
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double objective(const Matrix& A, const Vector& b, const Vector& h) { return (b - A * h).squaredNorm(); }

/// Objectives agree within tol relative, where a residual at most tol * ||b||
/// counts as zero.
inline bool objectives_agree(double a, double b, double b_sq_norm, double tol) {
    const double hi = std::max(a, b);
    return std::abs(a - b) <= tol * hi || hi <= tol * tol * b_sq_norm;
}

inline bool feasible(const Vector& h, ConstraintMode mode, double tol = 1e-10) {
    if (h.size() > 0 && h.minCoeff() < -tol) return false;
    if (mode == ConstraintMode::SimplexLE) return h.sum() <= 1.0 + tol;
    if (mode == ConstraintMode::SimplexEQ) return std::abs(h.sum() - 1.0) <= tol;
    return true;
}

/// Exact oracle: the optimum of a convex QP over a polyhedral cone/simplex is
/// the least-squares solution on some face. Enumerate every support, solve
/// the face problem directly, keep the feasible ones.
inline double support_enumeration_optimum(const Matrix& A, const Vector& b, ConstraintMode mode) {
    const auto p = static_cast<int>(A.cols());
    double best = std::numeric_limits<double>::infinity();
    if (mode != ConstraintMode::SimplexEQ) best = b.squaredNorm();  // h = 0
    for (int mask = 1; mask < (1 << p); ++mask) {
        std::vector<Eigen::Index> cols;
        for (int j = 0; j < p; ++j) {
            if (mask & (1 << j)) cols.push_back(j);
        }
        const auto s = static_cast<Eigen::Index>(cols.size());
        Matrix As(A.rows(), s);
        for (Eigen::Index t = 0; t < s; ++t) As.col(t) = A.col(cols[static_cast<std::size_t>(t)]);

        const auto consider = [&](const Vector& z) {
            if (z.minCoeff() < -1e-12) return;
            if (mode == ConstraintMode::SimplexLE && z.sum() > 1.0 + 1e-12) return;
            best = std::min(best, (b - As * z).squaredNorm());
        };
        if (mode != ConstraintMode::SimplexEQ) consider(As.completeOrthogonalDecomposition().solve(b));
        if (mode != ConstraintMode::Nonneg) {
            // KKT system of min ||As z - b||^2 s.t. sum(z) = 1.
            Matrix K = Matrix::Zero(s + 1, s + 1);
            K.topLeftCorner(s, s) = As.transpose() * As;
            K.topRightCorner(s, 1).setOnes();
            K.bottomLeftCorner(1, s).setOnes();
            Vector rhs(s + 1);
            rhs.head(s) = As.transpose() * b;
            rhs(s) = 1.0;
            consider(K.completeOrthogonalDecomposition().solve(rhs).head(s));
        }
    }
    return best;
}

/// Pixels of a `width` x `height` image mixing `materials` (bands x r) with at
/// most two materials per pixel; the first r pixels are pure.
inline Matrix planted_image(std::mt19937_64& rng, const Matrix& materials, std::size_t width, std::size_t height) {
    const auto r = static_cast<std::size_t>(materials.cols());
    const std::size_t n = width * height;
    Matrix H = Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto c = static_cast<Eigen::Index>(j);
        if (j < r) {
            H(c, c) = 1.0;
            continue;
        }
        const auto a = static_cast<Eigen::Index>(random_size(rng, 0, r - 1));
        auto b = static_cast<Eigen::Index>(random_size(rng, 0, r - 2));
        if (b >= a) ++b;
        const double t = u(rng);
        H(a, c) = t;
        H(b, c) = 1.0 - t;
    }
    return materials * H;
}

/// M plus nonnegative uniform noise with Frobenius norm level * ||M||_F.
inline Matrix add_noise(std::mt19937_64& rng, const Matrix& M, double level) {
    const Matrix N = random_matrix(rng, M.rows(), M.cols());
    return M + (level * M.norm() / N.norm()) * N;
}

}  // namespace ssnmf::testing
