#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "ssnmf/errors.hpp"

namespace ssnmf {

/// Dense column-major storage for M, W, H and residuals. Columns are data
/// points, rows are features (bands).
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordered list of distinct 0-based column indices.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<std::size_t> indices);
    explicit IndexSet(std::vector<std::size_t> indices);

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t operator[](std::size_t pos) const { return indices_[pos]; }
    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

    bool contains(std::size_t index) const;
    /// Position of `index` in the ordered list; size() if absent.
    std::size_t position_of(std::size_t index) const;

    /// Appends an index; throws InvalidIndexSet if already present.
    void push_back(std::size_t index);
    /// Copy with the element at `pos` removed.
    IndexSet without_position(std::size_t pos) const;

    /// Throws InvalidIndexSet if any index is >= cols.
    void validate_for(std::size_t cols) const;

    /// Set equality, ignoring order.
    bool same_elements(const IndexSet& other) const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<std::size_t> indices_;
};

/// Throws NonFiniteEntry if any entry is NaN or infinite.
void require_finite(const Matrix& M);

struct NormalizedColumns {
    Matrix columns;
    std::vector<double> scales;  // original l1 norm of each column
};

/// Scales every column to unit l1 norm. Entries must be nonnegative and each
/// column must have l1 norm above 1e-15. The input equals
/// columns * diag(scales).
NormalizedColumns l1_normalize_columns(const Matrix& M);

/// M(:, J) as a new matrix.
Matrix select_columns(const Matrix& M, const IndexSet& J);

/// Frobenius norm of M - M(:, J) * H.
double residual_norm(const Matrix& M, const IndexSet& J, const Matrix& H);

}  // namespace ssnmf
