#include "ssnmf/instances.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "ssnmf/ksparse_nnls.hpp"

namespace ssnmf {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void normalize_l1(Matrix& X) {
    for (Index j = 0; j < X.cols(); ++j) X.col(j) /= X.col(j).lpNorm<1>();
}

// Rows of the interior-vertex picture: three exterior vertices, one interior
// vertex, then data points on segments between pairs of vertices.
constexpr double kFixtureColumns[20][3] = {
    {0.1, 0.1, 0.8},
    {1.0 / 15.0, 0.8, 2.0 / 15.0},
    {0.7, 0.05, 0.25},
    {7.0 / 19.0, 6.0 / 19.0, 6.0 / 19.0},
    {0.32520138422833, 0.385141964842912, 0.289656650928758},
    {0.465630197826768, 0.0695308168477693, 0.464838985325462},
    {0.0703272644254425, 0.723127447065707, 0.206545288508851},
    {0.0671279775274921, 0.790312471922667, 0.142559550549841},
    {0.275520164796942, 0.241104446209306, 0.483375388993752},
    {0.591018030848994, 0.137358562573425, 0.27162340657758},
    {0.668270183468812, 0.052644151377599, 0.279085665153589},
    {0.553583839969188, 0.223387557931225, 0.223028602099587},
    {0.0918636955979726, 0.270862392442576, 0.637273911959451},
    {0.17460222331209, 0.159974336388151, 0.665423440299758},
    {0.0845324899550969, 0.424817710942965, 0.490649799101938},
    {0.079636620163263, 0.527630976571477, 0.39273240326526},
    {0.541310984631405, 0.177203099620858, 0.281485915747737},
    {0.392029367779484, 0.414702064471663, 0.193268567748852},
    {0.175676656665297, 0.625076992792895, 0.199246350541808},
    {0.606179066187951, 0.161103737409005, 0.232717196403044},
};

}  // namespace

SyntheticInstance gen_synthetic(std::size_t m, std::size_t n, std::size_t r, std::size_t k, std::uint64_t seed) {
    if (m < 2 || r < m || n < r || k < 1 || k > r) {
        throw BadParams("gen_synthetic needs m >= 2, r >= m, n >= r, 1 <= k <= r (got m=" + std::to_string(m) +
                        " n=" + std::to_string(n) + " r=" + std::to_string(r) + " k=" + std::to_string(k) + ")");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto positive = [&] { return 1.0 - uniform(rng); };  // (0, 1]

    Matrix W(idx(m), idx(r));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) W(idx(i), idx(j)) = uniform(rng);
    }
    for (std::size_t j = m; j < r; ++j) {
        Vector weights(idx(m));
        for (std::size_t i = 0; i < m; ++i) weights(idx(i)) = positive();
        W.col(idx(j)) = W.leftCols(idx(m)) * weights;
    }
    normalize_l1(W);

    Matrix H = Matrix::Zero(idx(r), idx(n));
    H.leftCols(idx(r)).setIdentity();
    std::vector<std::size_t> vertices(r);
    std::iota(vertices.begin(), vertices.end(), 0);
    for (std::size_t j = r; j < n; ++j) {
        std::vector<std::size_t> support;
        std::sample(vertices.begin(), vertices.end(), std::back_inserter(support), k, rng);
        for (std::size_t i : support) H(idx(i), idx(j)) = positive();
    }
    normalize_l1(H);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    SyntheticInstance inst;
    inst.W = W;
    inst.H.resize(idx(r), idx(n));
    std::vector<std::size_t> planted(r);
    for (std::size_t c = 0; c < n; ++c) {
        inst.H.col(idx(c)) = H.col(idx(perm[c]));
        if (perm[c] < r) planted[perm[c]] = c;
    }
    inst.M = W * inst.H;
    inst.planted_J = IndexSet(planted);
    inst.params = SyntheticParams{m, n, r, k, seed};
    return inst;
}

SyntheticInstance interior_vertex_fixture() {
    constexpr std::size_t cols = std::size(kFixtureColumns);
    Matrix M(3, idx(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < 3; ++i) M(idx(i), idx(j)) = kFixtureColumns[j][i];
    }
    normalize_l1(M);

    SyntheticInstance inst;
    inst.M = M;
    inst.W = M.leftCols(4);
    inst.planted_J = IndexSet{0, 1, 2, 3};
    inst.H = Matrix::Zero(4, idx(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        inst.H.col(idx(j)) =
            ksparse_nnls_bruteforce(inst.W, M.col(idx(j)), 2, ConstraintMode::Nonneg).h.dense();
    }
    inst.params = SyntheticParams{3, cols, 4, 2, 0};
    return inst;
}

void SetCoverInstance::validate() const {
    if (n < 1) throw SchemaError("ground set must be nonempty");
    if (subsets.empty()) throw SchemaError("need at least one subset");
    if (K < 1 || K > subsets.size()) {
        throw SchemaError("K must satisfy 1 <= K <= m (K=" + std::to_string(K) + ", m=" +
                          std::to_string(subsets.size()) + ")");
    }
    std::vector<char> seen(n + 1, 0);
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& subset = subsets[i];
        if (subset.empty()) throw SchemaError("subset " + std::to_string(i + 1) + " is empty");
        std::set<std::size_t> unique;
        for (std::size_t e : subset) {
            if (e < 1 || e > n) {
                throw SchemaError("subset " + std::to_string(i + 1) + " has element " + std::to_string(e) +
                                  " outside 1.." + std::to_string(n));
            }
            if (!unique.insert(e).second) {
                throw SchemaError("subset " + std::to_string(i + 1) + " repeats element " + std::to_string(e));
            }
            seen[e] = 1;
        }
    }
    for (std::size_t e = 1; e <= n; ++e) {
        if (!seen[e]) throw SchemaError("element " + std::to_string(e) + " belongs to no subset");
    }
}

bool SetCoverInstance::is_cover(const std::vector<std::size_t>& chosen) const {
    std::vector<char> seen(n + 1, 0);
    for (std::size_t i : chosen) {
        if (i >= subsets.size()) return false;
        for (std::size_t e : subsets[i]) seen[e] = 1;
    }
    return std::all_of(seen.begin() + 1, seen.end(), [](char c) { return c != 0; });
}

const char* to_string(Block block) {
    switch (block) {
        case Block::M1: return "M1";
        case Block::M2: return "M2";
        case Block::M3: return "M3";
        case Block::Origin: return "origin";
        case Block::MinusOne: return "minus-one";
    }
    return "unknown";
}

IndexSet ReductionOutput::m3_columns() const {
    IndexSet out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const Block b = columns[c].block;
        if (b == Block::M3 || b == Block::Origin || b == Block::MinusOne) out.push_back(c);
    }
    return out;
}

IndexSet ReductionOutput::data_columns() const {
    IndexSet out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const Block b = columns[c].block;
        if (b == Block::M1 || b == Block::M2) out.push_back(c);
    }
    return out;
}

ReductionOutput setcover_to_ssnmf(const SetCoverInstance& inst) {
    inst.validate();
    return setcover_to_ssnmf(inst, 1.0 / static_cast<double>(inst.n));
}

ReductionOutput setcover_to_ssnmf(const SetCoverInstance& inst, double spacing) {
    inst.validate();
    const std::size_t m = inst.m(), n = inst.n;
    std::size_t memberships = 0;
    for (const auto& s : inst.subsets) memberships += s.size();

    ReductionOutput red;
    red.a = spacing;
    red.K = inst.K;
    red.r = memberships + 2 + inst.K;
    for (std::size_t i = 1; i <= m; ++i) red.h.push_back(static_cast<double>(i) / static_cast<double>(m + 1));
    for (std::size_t j = 1; j <= n; ++j) {
        red.b.push_back(1.0 / (static_cast<double>(m + 1) + spacing * static_cast<double>(j)));
    }

    red.M.resize(2, idx(m + n + memberships + 2));
    Index c = 0;
    const auto add = [&](double x, double y, ColumnTag tag) {
        red.M(0, c) = x;
        red.M(1, c) = y;
        red.columns.push_back(tag);
        ++c;
    };
    for (std::size_t i = 0; i < m; ++i) add(0.0, -red.h[i], {Block::M1, i, 0});
    for (std::size_t j = 0; j < n; ++j) add(red.b[j], red.b[j] * red.b[j], {Block::M2, 0, j + 1});
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> elements = inst.subsets[i];
        std::sort(elements.begin(), elements.end());
        for (std::size_t e : elements) {
            const double ratio = red.h[i] / red.b[e - 1];
            add(ratio, ratio * ratio, {Block::M3, i, e});
        }
    }
    add(0.0, 0.0, {Block::Origin, 0, 0});
    add(0.0, -1.0, {Block::MinusOne, 0, 0});
    return red;
}

bool check_lemma_distinct(const ReductionOutput& red) {
    const IndexSet m3 = red.m3_columns();
    for (std::size_t a = 0; a < m3.size(); ++a) {
        for (std::size_t b = a + 1; b < m3.size(); ++b) {
            const double gap = (red.M.col(idx(m3[a])) - red.M.col(idx(m3[b]))).lpNorm<Eigen::Infinity>();
            if (gap <= 1e-12) return false;
        }
    }
    return true;
}

bool check_lemma_hull(const ReductionOutput& red, const SolverConfig& cfg) {
    const Matrix hull = select_columns(red.M, red.m3_columns());
    for (std::size_t c : red.data_columns()) {
        const NnlsSolution sol = nnls_solve(hull, red.M.col(idx(c)), ConstraintMode::SimplexEQ, cfg);
        if (sol.objective > 1e-16) return false;
    }
    return true;
}

Factorization construct_reduction_solution(const ReductionOutput& red, const std::vector<std::size_t>& cover) {
    const std::size_t m = red.h.size(), n = red.b.size();
    if (cover.size() > red.K) {
        throw NotACover("cover uses " + std::to_string(cover.size()) + " subsets, K = " + std::to_string(red.K));
    }
    std::set<std::size_t> chosen;
    for (std::size_t i : cover) {
        if (i >= m || !chosen.insert(i).second) throw NotACover("invalid subset position " + std::to_string(i));
    }

    const IndexSet m3 = red.m3_columns();
    // Row of W holding membership point (i, e), and rows of the two anchors.
    std::vector<std::vector<std::size_t>> member_row(m, std::vector<std::size_t>(n + 1, m3.size()));
    std::size_t origin_row = 0, minus_row = 0;
    for (std::size_t row = 0; row < m3.size(); ++row) {
        const ColumnTag& tag = red.columns[m3[row]];
        if (tag.block == Block::M3) member_row[tag.subset][tag.element] = row;
        if (tag.block == Block::Origin) origin_row = row;
        if (tag.block == Block::MinusOne) minus_row = row;
    }

    // Pick, for every element, the first subset of the cover containing it.
    std::vector<std::size_t> covering(n + 1, m);
    for (std::size_t i : cover) {
        for (std::size_t e = 1; e <= n; ++e) {
            if (covering[e] == m && member_row[i][e] < m3.size()) covering[e] = i;
        }
    }
    for (std::size_t e = 1; e <= n; ++e) {
        if (covering[e] == m) throw NotACover("element " + std::to_string(e) + " is not covered");
    }

    Factorization f;
    const std::size_t rank = m3.size() + cover.size();
    f.W.resize(2, idx(rank));
    f.W.leftCols(idx(m3.size())) = select_columns(red.M, m3);
    std::vector<std::size_t> cover_row(m, rank);
    for (std::size_t t = 0; t < cover.size(); ++t) {
        f.W.col(idx(m3.size() + t)) = red.M.col(idx(cover[t]));  // M1 comes first in M
        cover_row[cover[t]] = m3.size() + t;
    }

    f.H = Matrix::Zero(idx(rank), red.M.cols());
    for (std::size_t c = 0; c < red.columns.size(); ++c) {
        const ColumnTag& tag = red.columns[c];
        const Index col = idx(c);
        switch (tag.block) {
            case Block::M1: {
                const double alpha = red.h[tag.subset];
                f.H(idx(origin_row), col) = 1.0 - alpha;
                f.H(idx(minus_row), col) = alpha;
                break;
            }
            case Block::M2: {
                const std::size_t i = covering[tag.element];
                const double bj = red.b[tag.element - 1];
                const double beta = bj * bj / red.h[i];
                f.H(idx(member_row[i][tag.element]), col) = beta;
                f.H(idx(cover_row[i]), col) = 1.0 - beta;
                break;
            }
            default:
                f.H(idx(m3.position_of(c)), col) = 1.0;
                break;
        }
    }
    return f;
}

std::optional<SsnmfSolution> solve_ssnmf_bruteforce(const Matrix& M, std::size_t r, std::size_t k,
                                                    ConstraintMode mode, const SolverConfig& cfg) {
    if (r < 1 || k < 1) throw BadParams("r and k must be >= 1");
    const auto cols = static_cast<std::size_t>(M.cols());
    const std::size_t largest = std::min(r, cols);
    if (binomial(cols, largest) > 100'000) {
        throw TooManySubsets("C(" + std::to_string(cols) + ", " + std::to_string(largest) + ") exceeds 10^5");
    }

    for (std::size_t size = 1; size <= largest; ++size) {
        std::vector<std::size_t> subset(size);
        std::iota(subset.begin(), subset.end(), 0);
        for (;;) {
            const IndexSet J(subset);
            const Matrix dictionary = select_columns(M, J);
            Matrix H = Matrix::Zero(idx(size), M.cols());
            bool ok = true;
            for (std::size_t j = 0; j < cols && ok; ++j) {
                const std::size_t pos = J.position_of(j);
                if (pos < size) {
                    H(idx(pos), idx(j)) = 1.0;
                    continue;
                }
                const Vector column = M.col(idx(j));
                const SparseSolution sol = ksparse_nnls_bruteforce(dictionary, column, k, mode, cfg);
                const double limit = 1e-8 * column.norm();
                ok = sol.objective <= limit * limit;
                if (ok) H.col(idx(j)) = sol.h.dense();
            }
            if (ok) return SsnmfSolution{J, H};

            std::size_t i = size;
            while (i > 0 && subset[i - 1] == cols - size + i - 1) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::size_t t = i; t < size; ++t) subset[t] = subset[t - 1] + 1;
        }
    }
    return std::nullopt;
}

}  // namespace ssnmf
