#include "ssnmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ssnmf {

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::vector<std::size_t> sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidIndexSet("index set contains duplicates");
    }
}

bool IndexSet::contains(std::size_t index) const {
    return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

std::size_t IndexSet::position_of(std::size_t index) const {
    return static_cast<std::size_t>(std::find(indices_.begin(), indices_.end(), index) - indices_.begin());
}

void IndexSet::push_back(std::size_t index) {
    if (contains(index)) {
        throw InvalidIndexSet("index " + std::to_string(index) + " already in set");
    }
    indices_.push_back(index);
}

IndexSet IndexSet::without_position(std::size_t pos) const {
    IndexSet out;
    out.indices_.reserve(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i != pos) out.indices_.push_back(indices_[i]);
    }
    return out;
}

void IndexSet::validate_for(std::size_t cols) const {
    for (std::size_t idx : indices_) {
        if (idx >= cols) {
            throw InvalidIndexSet("index " + std::to_string(idx) + " out of range for " +
                                  std::to_string(cols) + " columns");
        }
    }
}

bool IndexSet::same_elements(const IndexSet& other) const {
    if (size() != other.size()) return false;
    std::vector<std::size_t> a = indices_, b = other.indices_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

void require_finite(const Matrix& M) {
    if (!M.allFinite()) throw NonFiniteEntry("matrix contains NaN or infinite entries");
}

NormalizedColumns l1_normalize_columns(const Matrix& M) {
    require_finite(M);
    if ((M.array() < 0.0).any()) throw NegativeEntry("l1 normalization requires nonnegative entries");

    NormalizedColumns out{M, std::vector<double>(static_cast<std::size_t>(M.cols()))};
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        const double s = M.col(j).sum();
        if (s <= 1e-15) throw ZeroColumn(static_cast<std::size_t>(j));
        out.columns.col(j) /= s;
        out.scales[static_cast<std::size_t>(j)] = s;
    }
    return out;
}

Matrix select_columns(const Matrix& M, const IndexSet& J) {
    J.validate_for(static_cast<std::size_t>(M.cols()));
    Matrix out(M.rows(), static_cast<Eigen::Index>(J.size()));
    for (std::size_t i = 0; i < J.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = M.col(static_cast<Eigen::Index>(J[i]));
    }
    return out;
}

double residual_norm(const Matrix& M, const IndexSet& J, const Matrix& H) {
    if (H.rows() != static_cast<Eigen::Index>(J.size()) || H.cols() != M.cols()) {
        throw DimensionMismatch("H must be |J| x cols(M)");
    }
    if (J.empty()) return M.norm();
    return (M - select_columns(M, J) * H).norm();
}

}  // namespace ssnmf
