#include "ssnmf/ksparse_nnls.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace ssnmf {

namespace {

using Index = Eigen::Index;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const Matrix& A, const Vector& b, std::size_t k) {
    if (k < 1) throw BadParams("sparsity level k must be >= 1");
    if (A.rows() != b.size()) throw DimensionMismatch("rows(A) != size(b)");
    if (A.cols() < 1) throw DimensionMismatch("dictionary needs at least one column");
}

// NNLS over the columns in `allowed` (increasing), scattered back to cols(A)
// coordinates. An empty allowed set gives h = 0, or +inf under SimplexEQ.
NnlsSolution restricted_solve(const Matrix& A, const Vector& b, const std::vector<std::size_t>& allowed,
                              ConstraintMode mode, const SolverConfig& cfg) {
    NnlsSolution out;
    out.h = Vector::Zero(A.cols());
    out.converged = true;
    if (allowed.empty()) {
        out.objective = mode == ConstraintMode::SimplexEQ ? kInf : b.squaredNorm();
        return out;
    }
    Matrix sub(A.rows(), static_cast<Index>(allowed.size()));
    for (std::size_t i = 0; i < allowed.size(); ++i) {
        sub.col(static_cast<Index>(i)) = A.col(static_cast<Index>(allowed[i]));
    }
    NnlsSolution sol = nnls_solve(sub, b, mode, cfg);
    for (std::size_t i = 0; i < allowed.size(); ++i) {
        out.h(static_cast<Index>(allowed[i])) = sol.h(static_cast<Index>(i));
    }
    out.objective = sol.objective;
    out.iterations = sol.iterations;
    return out;
}

std::size_t count_positive(const Vector& h) {
    return static_cast<std::size_t>((h.array() > 0.0).count());
}

struct SearchLimits {
    double stop_at = 0.0;        // finish once the incumbent is at or below this
    double prune_above = kInf;   // also discard nodes whose bound exceeds this
};

struct Pending {
    BnbNode node;
    std::vector<char> forbidden_mask;
    std::size_t seq = 0;
};

struct PendingOrder {
    bool operator()(const Pending& a, const Pending& b) const {
        if (a.node.bound != b.node.bound) return a.node.bound > b.node.bound;
        return a.seq > b.seq;
    }
};

SparseSolution branch_and_bound(const Matrix& A, const Vector& b, std::size_t k, ConstraintMode mode,
                                const SolverConfig& cfg, const BnbObserver& observer, SearchLimits limits) {
    const auto p = static_cast<std::size_t>(A.cols());
    const std::size_t node_cap =
        cfg.max_nodes ? *cfg.max_nodes : (p <= 30 ? std::numeric_limits<std::size_t>::max() : 1'000'000);

    std::size_t work = 0;
    Vector best_h = Vector::Zero(A.cols());
    double best_obj = kInf;

    const auto consider = [&](const Vector& h, double obj) {
        if (obj < best_obj) {
            best_obj = obj;
            best_h = h;
        }
    };
    const auto pruned = [&](double bound) {
        return bound >= best_obj * (1.0 - 1e-12) || bound > limits.prune_above;
    };
    const auto done = [&] { return best_obj <= limits.stop_at; };

    const auto evaluate = [&](const std::vector<char>& mask, std::vector<std::size_t> locked) {
        if (++work > node_cap) {
            throw NodeBudgetExceeded("branch-and-bound exceeded " + std::to_string(node_cap) + " nodes");
        }
        std::vector<std::size_t> allowed, forbidden;
        for (std::size_t i = 0; i < p; ++i) (mask[i] ? forbidden : allowed).push_back(i);
        BnbNode node;
        node.relaxed = restricted_solve(A, b, allowed, mode, cfg);
        node.bound = node.relaxed.objective;
        node.forbidden = std::move(forbidden);
        node.locked = std::move(locked);
        if (observer) observer(node);
        return node;
    };

    std::priority_queue<Pending, std::vector<Pending>, PendingOrder> queue;
    std::size_t seq = 0;
    const auto offer = [&](BnbNode node, std::vector<char> mask) {
        if (node.bound == kInf) return;
        if (count_positive(node.relaxed.h) <= k) {
            consider(node.relaxed.h, node.relaxed.objective);
            return;
        }
        if (!pruned(node.bound)) queue.push(Pending{std::move(node), std::move(mask), seq++});
    };

    std::vector<char> root_mask(p, 0);
    BnbNode root = evaluate(root_mask, {});
    if (root.bound != kInf && count_positive(root.relaxed.h) > k) {
        // Incumbent: keep the k largest relaxed coordinates and re-solve on them.
        std::vector<std::size_t> order(p);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return root.relaxed.h(static_cast<Index>(i)) > root.relaxed.h(static_cast<Index>(j));
        });
        std::vector<std::size_t> support(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(support.begin(), support.end());
        ++work;
        const NnlsSolution init = restricted_solve(A, b, support, mode, cfg);
        consider(init.h, init.objective);
    }
    offer(std::move(root), root_mask);

    while (!queue.empty() && !done()) {
        Pending current = queue.top();
        queue.pop();
        if (pruned(current.node.bound)) continue;

        const Vector& h = current.node.relaxed.h;
        const std::vector<std::size_t>& locked = current.node.locked;
        std::size_t branch = p;
        for (std::size_t i = 0; i < p; ++i) {
            const double v = h(static_cast<Index>(i));
            if (v > 0.0 && std::find(locked.begin(), locked.end(), i) == locked.end() &&
                (branch == p || v < h(static_cast<Index>(branch)))) {
                branch = i;
            }
        }

        // Child 1: forbid the coordinate.
        std::vector<char> forbid_mask = current.forbidden_mask;
        forbid_mask[branch] = 1;
        offer(evaluate(forbid_mask, locked), forbid_mask);
        if (done()) break;

        // Child 2: lock it. The relaxation only changes once the budget is full.
        std::vector<std::size_t> lock = locked;
        lock.push_back(branch);
        std::sort(lock.begin(), lock.end());
        if (lock.size() == k) {
            std::vector<char> mask(p, 1);
            for (std::size_t i : lock) mask[i] = 0;
            offer(evaluate(mask, lock), mask);
        } else {
            BnbNode same = current.node;
            same.locked = std::move(lock);
            if (observer) observer(same);
            offer(std::move(same), current.forbidden_mask);
        }
    }

    SparseSolution out;
    out.h = SparseVector::from_dense(best_h);
    out.objective = best_obj;
    out.work = work;
    return out;
}

}  // namespace

Vector SparseVector::dense() const {
    Vector out = Vector::Zero(static_cast<Index>(dim));
    for (std::size_t i = 0; i < support.size(); ++i) out(static_cast<Index>(support[i])) = values[i];
    return out;
}

SparseVector SparseVector::from_dense(const Vector& h) {
    SparseVector out;
    out.dim = static_cast<std::size_t>(h.size());
    for (Index i = 0; i < h.size(); ++i) {
        if (h(i) > 0.0) {
            out.support.push_back(static_cast<std::size_t>(i));
            out.values.push_back(h(i));
        }
    }
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t num = n - k + i;
        if (result > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
        result = result * num / i;
    }
    return result;
}

SparseSolution ksparse_nnls_exact(const Matrix& A, const Vector& b, std::size_t k, ConstraintMode mode,
                                  const SolverConfig& cfg, const BnbObserver& observer) {
    check_inputs(A, b, k);
    if (k >= static_cast<std::size_t>(A.cols())) {
        const NnlsSolution sol = nnls_solve(A, b, mode, cfg);
        if (observer) observer(BnbNode{{}, {}, sol, sol.objective});
        return SparseSolution{SparseVector::from_dense(sol.h), sol.objective, 1};
    }
    // Anything below roundoff level of ||b||^2 cannot be improved on meaningfully.
    return branch_and_bound(A, b, k, mode, cfg, observer, SearchLimits{1e-30 * b.squaredNorm(), kInf});
}

SparseSolution ksparse_nnls_bruteforce(const Matrix& A, const Vector& b, std::size_t k, ConstraintMode mode,
                                       const SolverConfig& cfg) {
    check_inputs(A, b, k);
    const auto p = static_cast<std::size_t>(A.cols());
    const std::size_t size = std::min(k, p);
    if (binomial(p, size) > 1'000'000) {
        throw TooManySupports("C(" + std::to_string(p) + ", " + std::to_string(size) + ") exceeds 10^6 supports");
    }

    const double tie_floor = 1e-28 * b.squaredNorm();
    std::vector<std::size_t> support(size);
    std::iota(support.begin(), support.end(), 0);
    SparseSolution best;
    best.objective = kInf;
    Vector best_h = Vector::Zero(A.cols());
    for (;;) {
        const NnlsSolution sol = restricted_solve(A, b, support, mode, cfg);
        ++best.work;
        if (best.work == 1 || sol.objective < best.objective - (1e-12 * best.objective + tie_floor)) {
            best.objective = sol.objective;
            best_h = sol.h;
        }
        // Next combination in lexicographic order.
        std::size_t i = size;
        while (i > 0 && support[i - 1] == p - size + i - 1) --i;
        if (i == 0) break;
        ++support[i - 1];
        for (std::size_t j = i; j < size; ++j) support[j] = support[j - 1] + 1;
    }
    best.h = SparseVector::from_dense(best_h);
    return best;
}

bool is_ksparse_representable(const Matrix& A, const Vector& b, std::size_t k, double tol_rel,
                              const SolverConfig& cfg) {
    if (k < 1) throw BadParams("sparsity level k must be >= 1");
    if (A.rows() != b.size()) throw DimensionMismatch("rows(A) != size(b)");
    const double threshold = (tol_rel * b.norm()) * (tol_rel * b.norm());
    if (A.cols() == 0) return b.squaredNorm() <= threshold;
    if (k >= static_cast<std::size_t>(A.cols())) {
        return nnls_solve(A, b, ConstraintMode::Nonneg, cfg).objective <= threshold;
    }
    // Decision version: stop at the first fit under the threshold and drop
    // any node that cannot reach it.
    const SparseSolution sol =
        branch_and_bound(A, b, k, ConstraintMode::Nonneg, cfg, {}, SearchLimits{threshold, threshold});
    return sol.objective <= threshold;
}

}  // namespace ssnmf
