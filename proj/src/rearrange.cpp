#include "torusrel/rearrange.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "torusrel/errors.hpp"

namespace torusrel {

namespace {

struct RowContent {
    std::vector<Weight> values;          // distinct entry values, sorted
    std::vector<std::vector<long long>> positions; // original positions per value
};

RowContent row_content(const WeightMatrix& W, long long i) {
    std::map<Weight, std::vector<long long>> by_value;
    for (long long j = 0; j < W.cols; ++j) {
        const long long* e = W.at(i, j);
        by_value[Weight(e, e + W.dim)].push_back(j);
    }
    RowContent rc;
    for (auto& [v, pos] : by_value) {
        rc.values.push_back(v);
        rc.positions.push_back(pos);
    }
    return rc;
}

// One column's worth of choices: per row an index into that row's
// distinct values, plus the resulting column sum.
struct ColumnChoice {
    std::vector<int> pick;
    Weight sum;
    long long nsq = 0;
};

// All feasible picks for the next column given remaining counts, sorted
// by (norm^2 of the column sum, the picked values lexicographically).
// With no norm filter (nsq_limit < 0) everything is enumerated; this
// is how the fallback measures what is achievable.
std::vector<ColumnChoice> column_choices(const std::vector<RowContent>& rows,
                                         const std::vector<std::vector<long long>>& left,
                                         long long dim, __int128 nsq_limit_num,
                                         long long den_sq, bool filtered) {
    std::vector<ColumnChoice> out;
    std::vector<int> pick(rows.size(), 0);
    Weight sum(dim, 0);

    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == rows.size()) {
            long long nsq = 0;
            for (long long c : sum) nsq += c * c;
            if (filtered && (__int128)nsq * den_sq > nsq_limit_num) return;
            out.push_back({pick, sum, nsq});
            return;
        }
        for (size_t v = 0; v < rows[i].values.size(); ++v) {
            if (left[i][v] == 0) continue;
            pick[i] = (int)v;
            for (long long c = 0; c < dim; ++c) sum[c] += rows[i].values[v][c];
            self(self, i + 1);
            for (long long c = 0; c < dim; ++c) sum[c] -= rows[i].values[v][c];
        }
    };
    rec(rec, 0);

    std::sort(out.begin(), out.end(), [&](const ColumnChoice& a, const ColumnChoice& b) {
        if (a.nsq != b.nsq) return a.nsq < b.nsq;
        for (size_t i = 0; i < rows.size(); ++i) {
            const Weight& va = rows[i].values[a.pick[i]];
            const Weight& vb = rows[i].values[b.pick[i]];
            if (va != vb) return va < vb;
        }
        return false;
    });
    return out;
}

} // namespace

std::vector<std::vector<long long>> steinitz_rearrange(const WeightMatrix& W,
                                                       const Rational& D,
                                                       long long node_cap) {
    const long long n = W.rows, d = W.cols;
    if (n == 0 || d == 0) return std::vector<std::vector<long long>>(n);

    {
        Weight total(W.dim, 0);
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < d; ++j) {
                const long long* e = W.at(i, j);
                for (long long c = 0; c < W.dim; ++c) total[c] += e[c];
            }
        if (!std::all_of(total.begin(), total.end(), [](long long v) { return v == 0; }))
            throw decomposition_error("rearrangement input must be zero-sum");
    }

    std::vector<RowContent> rows;
    rows.reserve(n);
    for (long long i = 0; i < n; ++i) rows.push_back(row_content(W, i));

    std::vector<std::vector<long long>> left(n);
    for (long long i = 0; i < n; ++i)
        for (const auto& pos : rows[i].positions)
            left[i].push_back((long long)pos.size());

    const __int128 limit_num = (__int128)D.num * D.num;
    const long long den_sq = D.den * D.den;

    // Depth-first over columns; dead remaining-count states are memoized
    // so equal sub-multisets are never retried.
    std::set<std::vector<std::vector<long long>>> dead;
    std::vector<std::vector<int>> chosen; // per column, per row: value index
    long long nodes = 0;

    auto dfs = [&](auto&& self, long long col) -> bool {
        if (col == d) return true;
        if (dead.count(left)) return false;
        if (++nodes > node_cap)
            throw resource_cap_error("rearrangement search exceeded node cap");
        for (const auto& choice :
             column_choices(rows, left, W.dim, limit_num, den_sq, true)) {
            for (long long i = 0; i < n; ++i) --left[i][choice.pick[i]];
            chosen.push_back(choice.pick);
            if (self(self, col + 1)) return true;
            chosen.pop_back();
            for (long long i = 0; i < n; ++i) ++left[i][choice.pick[i]];
        }
        dead.insert(left);
        return false;
    };

    if (!dfs(dfs, 0)) {
        // Measure what an unconstrained greedy pass achieves so the
        // caller knows how far off D is.
        for (long long i = 0; i < n; ++i)
            for (size_t v = 0; v < left[i].size(); ++v)
                left[i][v] = (long long)rows[i].positions[v].size();
        long long achieved = 0;
        for (long long col = 0; col < d; ++col) {
            auto choices = column_choices(rows, left, W.dim, 0, 1, false);
            assert(!choices.empty());
            const auto& pick = choices.front();
            achieved = std::max(achieved, pick.nsq);
            for (long long i = 0; i < n; ++i) --left[i][pick.pick[i]];
        }
        throw bound_exceeded_error(
            "no arrangement with column sums within D = " + D.str() +
                "; greedy achieved squared norm " + std::to_string(achieved),
            achieved);
    }

    std::vector<std::vector<long long>> perms(n);
    std::vector<std::vector<long long>> used(n);
    for (long long i = 0; i < n; ++i) {
        used[i].assign(rows[i].values.size(), 0);
        perms[i].reserve(d);
    }
    for (long long col = 0; col < d; ++col)
        for (long long i = 0; i < n; ++i) {
            int v = chosen[col][i];
            perms[i].push_back(rows[i].positions[v][used[i][v]++]);
        }
    return perms;
}

WeightMatrix apply_row_permutations(const WeightMatrix& W,
                                    const std::vector<std::vector<long long>>& perms) {
    assert((long long)perms.size() == W.rows);
    WeightMatrix out;
    out.rows = W.rows;
    out.cols = W.cols;
    out.dim = W.dim;
    out.data.resize(W.data.size());
    for (long long i = 0; i < W.rows; ++i) {
        assert((long long)perms[i].size() == W.cols);
        for (long long j = 0; j < W.cols; ++j) {
            const long long* src = W.at(i, perms[i][j]);
            std::copy(src, src + W.dim, out.at(i, j));
        }
    }
    return out;
}

DoubledMatrix build_doubled_matrix(const PnMonomial& F, const PnMonomial& G,
                                   const Rational& D, long long node_cap) {
    assert(F.rep && F.rep == G.rep);
    assert(F.n == G.n);
    const auto& rep = *F.rep;
    const long long n = F.n;
    const long long r = rep.rank;

    struct Side {
        std::vector<std::vector<int>> cols;
        std::vector<ColumnOrigin> origin;
    };
    auto expand = [&](const PnMonomial& P) {
        Side side;
        for (size_t fi = 0; fi < P.factors.size(); ++fi) {
            const auto& f = P.factors[fi];
            WeightMatrix wf = weight_matrix(f);
            auto perms = steinitz_rearrange(wf, D, node_cap);
            for (long long j = 0; j < f.deg; ++j) {
                std::vector<int> col(n);
                for (long long i = 0; i < n; ++i) col[i] = f.at(i, perms[i][j]);
                side.cols.push_back(std::move(col));
                side.origin.push_back({(long long)fi, j});
            }
        }
        return side;
    };
    Side fs = expand(F), gs = expand(G);
    if (fs.cols.size() != gs.cols.size())
        throw decomposition_error("sides of unequal total degree cannot be paired");

    DoubledMatrix M;
    M.rep = F.rep;
    M.n = n;
    M.width = (long long)fs.cols.size();
    M.fcol = std::move(fs.cols);
    M.gcol = std::move(gs.cols);
    M.forigin = std::move(fs.origin);
    M.gorigin = std::move(gs.origin);
    M.entries.rows = n;
    M.entries.cols = M.width;
    M.entries.dim = 2 * r;
    M.entries.data.resize(n * M.width * 2 * r);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < M.width; ++j) {
            long long* e = M.entries.at(i, j);
            const Weight& wf = rep.weights[M.fcol[j][i]];
            const Weight& wg = rep.weights[M.gcol[j][i]];
            std::copy(wf.begin(), wf.end(), e);
            std::copy(wg.begin(), wg.end(), e + r);
        }
    return M;
}

WeightMatrix self_double(const WeightMatrix& W) {
    WeightMatrix out;
    out.rows = W.rows;
    out.cols = W.cols;
    out.dim = 2 * W.dim;
    out.data.resize(out.rows * out.cols * out.dim);
    for (long long i = 0; i < W.rows; ++i)
        for (long long j = 0; j < W.cols; ++j) {
            const long long* src = W.at(i, j);
            long long* dst = out.at(i, j);
            std::copy(src, src + W.dim, dst);
            std::copy(src, src + W.dim, dst + W.dim);
        }
    return out;
}

namespace {

// Shared mechanism of both partitions: bucket the item sums, express the
// multiplicity vector in the basis one element at a time, map each
// element back to the smallest unused item indices.
std::vector<std::vector<long long>> hilbert_partition(const std::vector<Weight>& sums,
                                                      long long size_bound,
                                                      const HilbertBasis& basis,
                                                      const char* what) {
    const auto& cone = basis.cone;
    if (!sums.empty() && (long long)sums[0].size() != cone.dim)
        throw decomposition_error(std::string(what) +
                                  ": sum dimension does not match the basis cone");

    std::map<Weight, int> gen_index;
    for (int g = 0; g < cone.num_gens(); ++g) gen_index[cone.gens[g]] = g;

    std::vector<std::vector<long long>> items_by_gen(cone.num_gens());
    for (size_t idx = 0; idx < sums.size(); ++idx) {
        auto it = gen_index.find(sums[idx]);
        if (it == gen_index.end())
            throw decomposition_error(
                std::string(what) +
                ": a sum falls outside the generator set (invalid D or input "
                "exceeding the bound stage)");
        items_by_gen[it->second].push_back((long long)idx);
    }

    if (basis.elements.empty() && !sums.empty()) {
        // The stage this basis came from fell back to a certified ceiling
        // and carries no elements. The cone restricted to the sums
        // actually present partitions identically, minimal solutions
        // embed as minimal solutions of the full cone under zero padding,
        // and only elements of coordinate sum at most the item count can
        // ever fit the multiplicity vector, so a truncated completion of
        // the restricted cone is enough.
        const long long items = (long long)sums.size();
        bool complete = false;
        HilbertBasis restricted = hilbert_basis_partial(
            restricted_value_cone(sums), {items + 1, 1 << 22},
            [&](long long level) { return level <= items; }, &complete);
        if (!restricted.elements.empty())
            return hilbert_partition(sums, size_bound, restricted, what);
    }

    std::vector<long long> mult(cone.num_gens(), 0);
    for (int g = 0; g < cone.num_gens(); ++g) mult[g] = (long long)items_by_gen[g].size();
    std::vector<long long> used(cone.num_gens(), 0);

    long long remaining = (long long)sums.size();
    std::vector<std::vector<long long>> blocks;
    while (remaining > 0) {
        const HilbertElem* pick = nullptr;
        for (const auto& e : basis.elements) {
            bool fits = true;
            for (auto [g, c] : e.nz)
                if (mult[g] < c) {
                    fits = false;
                    break;
                }
            if (fits) {
                pick = &e;
                break;
            }
        }
        if (!pick)
            throw decomposition_error(std::string(what) +
                                      ": multiplicity vector admits no basis element "
                                      "(basis incomplete for this input)");
        if (pick->sum > size_bound)
            throw decomposition_error(std::string(what) + ": block of size " +
                                      std::to_string(pick->sum) + " exceeds bound " +
                                      std::to_string(size_bound));
        std::vector<long long> block;
        for (auto [g, c] : pick->nz) {
            for (long long t = 0; t < c; ++t)
                block.push_back(items_by_gen[g][used[g] + t]);
            used[g] += c;
            mult[g] -= c;
        }
        std::sort(block.begin(), block.end());
        remaining -= (long long)block.size();
        blocks.push_back(std::move(block));
    }
    return blocks;
}

} // namespace

std::vector<long long> zero_sum_column_block(const WeightMatrix& doubled, long long d0,
                                             const HilbertBasis& basisA) {
    if (d0 < 1) throw config_error("column block extraction needs d0 >= 1");
    if (doubled.cols == 0)
        throw decomposition_error("column block extraction on an empty matrix");
    std::vector<Weight> sums;
    sums.reserve(doubled.cols);
    for (long long j = 0; j < doubled.cols; ++j) sums.push_back(doubled.col_sum(j));
    auto blocks = hilbert_partition(sums, d0, basisA, "column block");
    return blocks.front();
}

std::vector<std::vector<long long>> zero_sum_column_partition(const WeightMatrix& doubled,
                                                              long long d0,
                                                              const HilbertBasis& basisA) {
    if (d0 < 1) throw config_error("column partition needs d0 >= 1");
    std::vector<Weight> sums;
    sums.reserve(doubled.cols);
    for (long long j = 0; j < doubled.cols; ++j) sums.push_back(doubled.col_sum(j));
    return hilbert_partition(sums, d0, basisA, "column partition");
}

std::vector<std::vector<long long>> zero_sum_row_partition(const WeightMatrix& doubled,
                                                           long long n0,
                                                           const HilbertBasis& basisB) {
    if (n0 < 1) throw config_error("row partition needs n0 >= 1");
    std::vector<Weight> sums;
    sums.reserve(doubled.rows);
    for (long long i = 0; i < doubled.rows; ++i) sums.push_back(doubled.row_sum(i));
    return hilbert_partition(sums, n0, basisB, "row partition");
}

KernelCone restricted_value_cone(const std::vector<Weight>& values) {
    if (values.empty()) throw config_error("restricted cone needs at least one value");
    return KernelCone((long long)values[0].size(), values);
}

} // namespace torusrel
