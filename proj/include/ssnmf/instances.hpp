#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ssnmf/config.hpp"
#include "ssnmf/matrix.hpp"
#include "ssnmf/nnls.hpp"

namespace ssnmf {

struct SyntheticParams {
    std::size_t m = 0;  ///< rows
    std::size_t n = 0;  ///< columns
    std::size_t r = 0;  ///< vertices
    std::size_t k = 0;  ///< sparsity
    std::uint64_t seed = 0;
};

/// M = W H with W = M(:, planted_J).
struct SyntheticInstance {
    Matrix M;
    Matrix W;
    Matrix H;
    IndexSet planted_J;
    SyntheticParams params;
};

/// k-sparse r-separable instance.
///
/// The first m columns of W are uniform on [0,1]^m; the other r - m are
/// combinations of all m of them with strictly positive uniform weights.
/// Each non-vertex column of H has a support drawn uniformly among the
/// k-subsets of the r vertices and uniform values. W and H get unit l1
/// columns, the columns of M are shuffled, and planted_J records where the
/// vertices ended up. Deterministic per seed within a build.
SyntheticInstance gen_synthetic(std::size_t m, std::size_t n, std::size_t r, std::size_t k, std::uint64_t seed);

/// Three exterior vertices and one interior vertex in the unit simplex of
/// R^3 followed by 16 data points, each an exact 2-sparse convex combination
/// of two vertices. planted_J = {0, 1, 2, 3}; column 3 is the interior vertex.
SyntheticInstance interior_vertex_fixture();

/// SET-COVER instance over the ground set {1, ..., n}.
struct SetCoverInstance {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> subsets;  ///< 1-based elements
    std::size_t K = 0;

    std::size_t m() const noexcept { return subsets.size(); }
    /// Throws SchemaError when an invariant fails.
    void validate() const;
    /// True iff the subsets at the given 0-based positions cover {1..n}.
    bool is_cover(const std::vector<std::size_t>& chosen) const;
};

enum class Block { M1, M2, M3, Origin, MinusOne };

const char* to_string(Block block);

/// Where a column of the reduction matrix comes from. `subset` is 0-based,
/// `element` is the 1-based ground element; unused fields are 0.
struct ColumnTag {
    Block block = Block::M1;
    std::size_t subset = 0;
    std::size_t element = 0;
};

/// The 2 x (m + n + 2 + sum |C_i|) matrix [M1, M2, M3] and target rank r.
/// M3 lists the membership points subset by subset, then (0,0) and (0,-1).
struct ReductionOutput {
    Matrix M;
    std::size_t r = 0;
    std::vector<ColumnTag> columns;
    std::vector<double> h;  ///< h_i = i / (m + 1), i = 1..m
    std::vector<double> b;  ///< b_j = 1 / (m + 1 + a j), j = 1..n
    double a = 0.0;
    std::size_t K = 0;

    /// Column indices whose tag is in M3 (memberships, origin, minus-one).
    IndexSet m3_columns() const;
    /// Column indices from M1 and M2.
    IndexSet data_columns() const;
};

/// SET-COVER to 2-sparse separable NMF reduction with spacing a = 1/n.
ReductionOutput setcover_to_ssnmf(const SetCoverInstance& inst);
/// Same construction with an explicit spacing `a` (a = 0 collapses b_j).
ReductionOutput setcover_to_ssnmf(const SetCoverInstance& inst, double spacing);

/// All M3 columns differ pairwise by more than 1e-12 in the max norm.
bool check_lemma_distinct(const ReductionOutput& red);

/// Every M1 and M2 column is a convex combination of the M3 columns
/// (SimplexEQ objective at most 1e-16).
bool check_lemma_hull(const ReductionOutput& red, const SolverConfig& cfg = {});

struct Factorization {
    Matrix W;
    Matrix H;
};

/// W = [M3, M1(:, cover)] and the 2-sparse H mapping every column onto it:
/// M1 points split between (0,0) and (0,-1) with weight h_i on the latter,
/// M2 point j uses the first covering subset i with weight b_j^2 / h_i on the
/// membership point (i, j). `cover` lists 0-based subset positions; throws
/// NotACover unless it covers {1..n} with at most K subsets.
Factorization construct_reduction_solution(const ReductionOutput& red, const std::vector<std::size_t>& cover);

struct SsnmfSolution {
    IndexSet J;
    Matrix H;
};

/// Exhaustive search for J with |J| <= r such that every column of M is a
/// k-sparse combination of M(:, J) (residual <= 1e-8 times the column norm).
/// Sets are tried smallest first, then lexicographically; nullopt when none
/// works. `mode` is the coefficient constraint (SimplexEQ for convex
/// combinations). Throws TooManySubsets if C(cols, r) > 10^5.
std::optional<SsnmfSolution> solve_ssnmf_bruteforce(const Matrix& M, std::size_t r, std::size_t k,
                                                    ConstraintMode mode = ConstraintMode::Nonneg,
                                                    const SolverConfig& cfg = {});

}  // namespace ssnmf
