#include <gtest/gtest.h>

#include <array>

#include "ssnmf/nnls.hpp"
#include "support.hpp"

using namespace ssnmf;
using namespace ssnmf::testing;

namespace {

constexpr std::array<ConstraintMode, 3> kModes{ConstraintMode::Nonneg, ConstraintMode::SimplexLE,
                                               ConstraintMode::SimplexEQ};

// Grid search over 3 coefficients, refined around the incumbent until the
// step reaches 1e-3. For SimplexEQ the third coordinate is 1 - h0 - h1.
double grid_optimum(const Matrix& A, const Vector& b, ConstraintMode mode) {
    double upper = 1.0;
    if (mode == ConstraintMode::Nonneg) {
        // ||A h|| <= 2 ||b|| at the optimum, hence |h_i| <= 2 ||b|| / sigma_min.
        const double smin = Eigen::JacobiSVD<Matrix>(A).singularValues().minCoeff();
        upper = 2.0 * b.norm() / smin;
    }
    const std::array<double, 4> steps{upper / 100.0, upper / 1000.0, 1e-3, 1e-3};
    Vector best_h = Vector::Zero(3);
    double best = std::numeric_limits<double>::infinity();
    Vector lo = Vector::Zero(3), hi = Vector::Constant(3, upper);
    for (double step : steps) {
        step = std::min(step, upper / 50.0);
        const auto count = [&](int i) { return static_cast<long>(std::ceil((hi(i) - lo(i)) / step)); };
        Vector h(3);
        for (long a = 0; a <= count(0); ++a) {
            h(0) = std::min(hi(0), lo(0) + step * static_cast<double>(a));
            for (long c = 0; c <= count(1); ++c) {
                h(1) = std::min(hi(1), lo(1) + step * static_cast<double>(c));
                if (mode == ConstraintMode::SimplexEQ) {
                    h(2) = 1.0 - h(0) - h(1);
                    if (h(2) < 0.0) break;
                    const double f = objective(A, b, h);
                    if (f < best) best = f, best_h = h;
                    continue;
                }
                for (long d = 0; d <= count(2); ++d) {
                    h(2) = std::min(hi(2), lo(2) + step * static_cast<double>(d));
                    if (mode == ConstraintMode::SimplexLE && h.sum() > 1.0 + 1e-12) break;
                    const double f = objective(A, b, h);
                    if (f < best) best = f, best_h = h;
                }
            }
        }
        lo = (best_h.array() - 2.0 * step).max(0.0);
        hi = (best_h.array() + 2.0 * step).min(upper);
    }
    return best;
}

}  // namespace

TEST(Nnls, InteriorOptimumSimplexLE) {
    const Matrix A = Matrix::Identity(2, 2);
    const auto sol = nnls_solve(A, Vector{{0.3, 0.2}}, ConstraintMode::SimplexLE);
    EXPECT_NEAR(sol.h(0), 0.3, 1e-14);
    EXPECT_NEAR(sol.h(1), 0.2, 1e-14);
    EXPECT_NEAR(sol.objective, 0.0, 1e-28);
    EXPECT_TRUE(sol.converged);
}

TEST(Nnls, SimplexCapSimplexLE) {
    const auto sol = nnls_solve(Matrix::Identity(2, 2), Vector{{2.0, 0.0}}, ConstraintMode::SimplexLE);
    EXPECT_NEAR(sol.h(0), 1.0, 1e-14);
    EXPECT_NEAR(sol.h(1), 0.0, 1e-14);
    EXPECT_NEAR(sol.objective, 1.0, 1e-14);
}

TEST(Nnls, ClampForIdentityDesign) {
    const auto sol = nnls_solve(Matrix::Identity(3, 3), Vector{{0.5, -0.4, 0.2}}, ConstraintMode::Nonneg);
    EXPECT_NEAR(sol.h(0), 0.5, 1e-14);
    EXPECT_EQ(sol.h(1), 0.0);
    EXPECT_NEAR(sol.h(2), 0.2, 1e-14);
}

TEST(Nnls, MatchesGridSearch) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix A = random_matrix(rng, 4, 3);
        const Vector b = random_vector(rng, 4, -0.5, 1.0);
        for (ConstraintMode mode : kModes) {
            const double grid = grid_optimum(A, b, mode);
            const auto sol = nnls_solve(A, b, mode);
            EXPECT_NEAR(sol.objective, grid, 1e-5) << to_string(mode);
            EXPECT_LE(sol.objective, grid + 1e-12) << to_string(mode);
        }
    }
}

TEST(Nnls, GlobalOptimalityAgainstSupportEnumeration) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = static_cast<Eigen::Index>(random_size(rng, 1, 5));
        const auto p = static_cast<Eigen::Index>(random_size(rng, 1, 5));
        const Matrix A = random_matrix(rng, m, p, -0.2, 1.0);
        const Vector b = random_vector(rng, m, -0.5, 1.5);
        for (ConstraintMode mode : kModes) {
            const auto sol = nnls_solve(A, b, mode);
            const double oracle = support_enumeration_optimum(A, b, mode);
            EXPECT_LE(sol.objective, oracle + 1e-8) << to_string(mode) << " trial " << trial;
            EXPECT_TRUE(feasible(sol.h, mode)) << to_string(mode) << " trial " << trial;
            EXPECT_NEAR(sol.objective, objective(A, b, sol.h), 1e-12 * std::max(1.0, sol.objective));
        }
    }
}

TEST(Nnls, ModesNest) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix A = random_matrix(rng, 5, 4);
        const Vector b = random_vector(rng, 5, -0.5, 2.0);
        const double nonneg = nnls_solve(A, b, ConstraintMode::Nonneg).objective;
        const double le = nnls_solve(A, b, ConstraintMode::SimplexLE).objective;
        const double eq = nnls_solve(A, b, ConstraintMode::SimplexEQ).objective;
        EXPECT_LE(nonneg, le + 1e-12);
        EXPECT_LE(le, eq + 1e-12);
    }
}

TEST(Nnls, ZeroInput) {
    std::mt19937_64 rng(24);
    const Matrix A = random_matrix(rng, 4, 3);
    for (ConstraintMode mode : {ConstraintMode::Nonneg, ConstraintMode::SimplexLE}) {
        const auto sol = nnls_solve(A, Vector::Zero(4), mode);
        EXPECT_EQ(sol.h, Vector::Zero(3));
        EXPECT_EQ(sol.objective, 0.0);
    }
}

TEST(Nnls, ConeScaling) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix A = random_matrix(rng, 5, 4);
        const Vector b = random_vector(rng, 5, -0.5, 1.0);
        const Vector h = nnls_solve(A, b, ConstraintMode::Nonneg).h;
        for (double c : {0.01, 3.0, 250.0}) {
            const Vector hc = nnls_solve(A, c * b, ConstraintMode::Nonneg).h;
            EXPECT_LE((hc - c * h).cwiseAbs().maxCoeff(), 1e-10 * c * std::max(1.0, h.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST(Nnls, RankDeficientDesign) {
    Matrix A(2, 3);
    A << 1, 2, 0, 1, 2, 1;  // column 1 = 2 * column 0
    const Vector b{{3.0, 4.0}};
    for (ConstraintMode mode : kModes) {
        const auto sol = nnls_solve(A, b, mode);
        EXPECT_LE(sol.objective, support_enumeration_optimum(A, b, mode) + 1e-10) << to_string(mode);
        EXPECT_TRUE(feasible(sol.h, mode));
    }
}

TEST(Nnls, Errors) {
    EXPECT_THROW(nnls_solve(Matrix(2, 0), Vector::Zero(2), ConstraintMode::Nonneg), DimensionMismatch);
    EXPECT_THROW(nnls_solve(Matrix::Ones(3, 2), Vector::Zero(2), ConstraintMode::Nonneg), DimensionMismatch);
    Matrix A = Matrix::Ones(2, 2);
    A(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(nnls_solve(A, Vector::Zero(2), ConstraintMode::Nonneg), NonFiniteEntry);
}

TEST(Nnls, IterationCap) {
    // Three columns must enter the passive set one by one.
    SolverConfig cfg;
    cfg.max_iter = 1;
    try {
        nnls_solve(Matrix::Identity(3, 3), Vector::Ones(3), ConstraintMode::Nonneg, cfg);
        FAIL() << "expected NotConverged";
    } catch (const NotConverged& e) {
        EXPECT_TRUE(feasible(e.best().h, ConstraintMode::Nonneg));
        EXPECT_FALSE(e.best().converged);
    }
}

TEST(Kkt, ZeroAtOptimum) {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix A = random_matrix(rng, 5, 4);
        const Vector b = random_vector(rng, 5, -0.5, 1.0);
        for (ConstraintMode mode : kModes) {
            const auto sol = nnls_solve(A, b, mode);
            EXPECT_LE(kkt_residual(A, b, sol.h, mode), 1e-12) << to_string(mode);
        }
    }
}

TEST(Kkt, PositiveAwayFromOptimum) {
    std::mt19937_64 rng(28);
    const Matrix A = random_matrix(rng, 4, 3);
    const Vector b = A.col(0);
    EXPECT_GT(kkt_residual(A, b, Vector::Zero(3), ConstraintMode::Nonneg), 0.0);
    EXPECT_GT(kkt_residual(A, b, Vector::Zero(3), ConstraintMode::SimplexLE), 0.0);
}

TEST(Kkt, GrowsWithPerturbation) {
    std::mt19937_64 rng(29);
    const Matrix A = random_matrix(rng, 5, 3);
    const Vector b = A * Vector{{0.5, 0.3, 0.4}};  // interior Nonneg optimum
    const Vector h = nnls_solve(A, b, ConstraintMode::Nonneg).h;
    const Vector direction = Vector{{1.0, -0.5, 0.25}}.normalized();
    double previous = kkt_residual(A, b, h, ConstraintMode::Nonneg);
    for (double eps = 1e-3; eps <= 1e-2 + 1e-15; eps += 1e-3) {
        const double now = kkt_residual(A, b, h + eps * direction, ConstraintMode::Nonneg);
        EXPECT_GT(now, previous);
        previous = now;
    }
}

TEST(Kkt, RejectsInfeasiblePoints) {
    const Matrix A = Matrix::Identity(2, 2);
    const Vector b = Vector::Zero(2);
    EXPECT_THROW(kkt_residual(A, b, Vector{{-0.1, 0.0}}, ConstraintMode::Nonneg), InfeasiblePoint);
    EXPECT_THROW(kkt_residual(A, b, Vector{{0.7, 0.7}}, ConstraintMode::SimplexLE), InfeasiblePoint);
    EXPECT_THROW(kkt_residual(A, b, Vector{{0.2, 0.2}}, ConstraintMode::SimplexEQ), InfeasiblePoint);
}

TEST(SimplexProjection, KnownPoints) {
    const Vector p = project_onto_simplex(Vector{{2.0, 0.0}});
    EXPECT_NEAR(p(0), 1.0, 1e-15);
    EXPECT_NEAR(p(1), 0.0, 1e-15);
    const Vector q = project_onto_simplex(Vector{{0.5, 0.5, 0.5}});
    EXPECT_NEAR(q(0), 1.0 / 3.0, 1e-15);
    std::mt19937_64 rng(30);
    for (int t = 0; t < 50; ++t) {
        const Vector y = random_vector(rng, 4, -1.0, 2.0);
        const Vector x = project_onto_simplex(y);
        EXPECT_TRUE(feasible(x, ConstraintMode::SimplexEQ, 1e-12));
        // Optimality: (y - x) . (z - x) <= 0 for the vertices z of the simplex.
        for (Eigen::Index i = 0; i < 4; ++i) {
            Vector e = Vector::Zero(4);
            e(i) = 1.0;
            EXPECT_LE((y - x).dot(e - x), 1e-12);
        }
    }
}
