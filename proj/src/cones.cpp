#include "torusrel/cones.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "torusrel/errors.hpp"

namespace torusrel {

KernelCone::KernelCone(long long m, std::vector<Weight> generators) : dim(m) {
    if (m < 1) throw config_error("cone dimension must be positive");
    if (generators.empty()) throw config_error("cone needs at least one generator");
    std::set<Weight> seen;
    for (auto& g : generators) {
        if ((long long)g.size() != m)
            throw config_error("cone generator of wrong dimension");
        if (seen.insert(g).second) gens.push_back(std::move(g));
    }
}

std::vector<long long> HilbertElem::dense(long long L) const {
    std::vector<long long> v(L, 0);
    for (auto [i, c] : nz) v[i] = c;
    return v;
}

long long HilbertBasis::max_coordinate_sum() const {
    long long best = 0;
    for (const auto& e : elements) best = std::max(best, e.sum);
    return best;
}

namespace {

using Sparse = std::vector<std::pair<int, long long>>;

// Dense lexicographic order on sparse nonnegative vectors: at the first
// index where they differ, the smaller entry wins (a missing index is 0).
bool dense_lex_less(const Sparse& a, const Sparse& b) {
    size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia].first < b[ib].first) return false; // a nonzero where b is 0
        if (a[ia].first > b[ib].first) return true;
        if (a[ia].second != b[ib].second) return a[ia].second < b[ib].second;
        ++ia;
        ++ib;
    }
    return ia == a.size() && ib != b.size();
}

Sparse sparse_add_unit(const Sparse& s, int j) {
    Sparse out;
    out.reserve(s.size() + 1);
    bool placed = false;
    for (auto [i, c] : s) {
        if (i == j) {
            out.emplace_back(i, c + 1);
            placed = true;
        } else {
            if (!placed && i > j) {
                out.emplace_back(j, 1);
                placed = true;
            }
            out.emplace_back(i, c);
        }
    }
    if (!placed) out.emplace_back(j, 1);
    return out;
}

// True iff sol <= cand componentwise.
bool sparse_leq(const Sparse& sol, const Sparse& cand) {
    size_t ic = 0;
    for (auto [i, c] : sol) {
        while (ic < cand.size() && cand[ic].first < i) ++ic;
        if (ic == cand.size() || cand[ic].first != i || cand[ic].second < c) return false;
    }
    return true;
}

struct Node {
    Sparse lam;
    Weight value;
    int added; // generator index whose unit extension created this node
};

} // namespace

HilbertBasis hilbert_basis_partial(const KernelCone& cone, const HilbertCaps& caps,
                                   const std::function<bool(long long)>& keep_going,
                                   bool* complete) {
    const long long L = cone.num_gens();
    const long long m = cone.dim;

    HilbertBasis out;
    out.cone = cone;
    if (complete) *complete = true;

    // Dominance index: solutions bucketed by (generator, count). A
    // candidate lam+e_j whose parent was dominance-free can only be
    // dominated by a solution with exactly lam_j + 1 at j.
    std::map<std::pair<int, long long>, std::vector<int>> bucket;
    std::vector<Sparse> sols;

    // Extension cache per running value: generators with negative scalar
    // product, the Contejean-Devie restriction.
    std::map<Weight, std::vector<int>> ext_cache;
    auto extensions = [&](const Weight& v) -> const std::vector<int>& {
        auto it = ext_cache.find(v);
        if (it != ext_cache.end()) return it->second;
        std::vector<int> js;
        for (int j = 0; j < L; ++j) {
            long long dot = 0;
            for (long long c = 0; c < m; ++c) dot += v[c] * cone.gens[j][c];
            if (dot < 0) js.push_back(j);
        }
        return ext_cache.emplace(v, std::move(js)).first->second;
    };

    std::vector<Node> frontier;
    frontier.reserve(L);
    for (int j = 0; j < L; ++j) frontier.push_back({{{j, 1}}, cone.gens[j], j});

    long long nodes_total = L;
    long long level = 1;
    while (!frontier.empty()) {
        if (!keep_going(level)) {
            if (complete) *complete = false;
            break;
        }
        if (level > caps.max_sum)
            throw cone_error("hilbert basis did not stabilize within coordinate sum " +
                             std::to_string(caps.max_sum));

        // Split off the solutions of this level first so extensions of the
        // remaining nodes are filtered against a complete solution set.
        std::vector<Node> open;
        open.reserve(frontier.size());
        for (auto& node : frontier) {
            bool zero = std::all_of(node.value.begin(), node.value.end(),
                                    [](long long v) { return v == 0; });
            if (zero) {
                int idx = (int)sols.size();
                sols.push_back(node.lam);
                for (auto [i, c] : node.lam) bucket[{i, c}].push_back(idx);
            } else {
                open.push_back(std::move(node));
            }
        }

        std::vector<Node> candidates;
        for (const auto& node : open) {
            for (int j : extensions(node.value)) {
                // Budget the raw extensions too: wide cones can overwhelm
                // memory within a single level, long before the surviving
                // frontier is counted.
                if (nodes_total + (long long)candidates.size() >= caps.node_cap)
                    throw resource_cap_error(
                        "hilbert basis frontier exceeded node cap of " +
                        std::to_string(caps.node_cap));
                Node next;
                next.lam = sparse_add_unit(node.lam, j);
                next.value = node.value;
                for (long long c = 0; c < m; ++c) next.value[c] += cone.gens[j][c];
                next.added = j;
                candidates.push_back(std::move(next));
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Node& a, const Node& b) { return a.lam < b.lam; });
        candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                     [](const Node& a, const Node& b) {
                                         return a.lam == b.lam;
                                     }),
                         candidates.end());

        frontier.clear();
        for (auto& cand : candidates) {
            long long cnt = 0;
            for (auto [i, c] : cand.lam)
                if (i == cand.added) cnt = c;
            bool dominated = false;
            auto it = bucket.find({cand.added, cnt});
            if (it != bucket.end()) {
                for (int idx : it->second) {
                    if (sparse_leq(sols[idx], cand.lam)) {
                        dominated = true;
                        break;
                    }
                }
            }
            if (!dominated) frontier.push_back(std::move(cand));
        }

        nodes_total += (long long)frontier.size();
        if (nodes_total > caps.node_cap)
            throw resource_cap_error("hilbert basis frontier exceeded node cap of " +
                                     std::to_string(caps.node_cap));
        ++level;
    }

    out.elements.reserve(sols.size());
    for (auto& s : sols) {
        HilbertElem e;
        e.sum = 0;
        for (auto [i, c] : s) e.sum += c;
        e.nz = std::move(s);
        out.elements.push_back(std::move(e));
    }
    std::sort(out.elements.begin(), out.elements.end(),
              [](const HilbertElem& a, const HilbertElem& b) {
                  if (a.sum != b.sum) return a.sum < b.sum;
                  return dense_lex_less(a.nz, b.nz);
              });
    return out;
}

HilbertBasis hilbert_basis(const KernelCone& cone, const HilbertCaps& caps) {
    bool complete = false;
    HilbertBasis out = hilbert_basis_partial(
        cone, caps, [](long long) { return true; }, &complete);
    // The layered search only stops early through keep_going; every other
    // exit either empties the frontier or throws.
    assert(complete);
    return out;
}

namespace {

constexpr long long kSumBoundSaturated = (long long)4e18;

// Rank of the dim x num_gens matrix whose columns are the generators, by
// fraction-free elimination. Entries stay at minor size, far from
// overflow for the small dimensions handled here.
long long generator_rank(const KernelCone& cone) {
    const long long m = cone.dim, L = cone.num_gens();
    std::vector<std::vector<long long>> M(m, std::vector<long long>(L));
    for (long long j = 0; j < L; ++j)
        for (long long i = 0; i < m; ++i) M[i][j] = cone.gens[j][i];
    long long rank = 0, prev = 1;
    for (long long col = 0; col < L && rank < m; ++col) {
        long long piv = -1;
        for (long long i = rank; i < m; ++i)
            if (M[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        for (long long i = rank + 1; i < m; ++i) {
            for (long long j = col + 1; j < L; ++j)
                M[i][j] = (M[rank][col] * M[i][j] - M[i][col] * M[rank][j]) / prev;
            M[i][col] = 0;
        }
        prev = M[rank][col];
        ++rank;
    }
    return rank;
}

long long det_small(std::vector<std::vector<long long>>& a, long long n) {
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    long long det = 0, sign = 1;
    std::vector<std::vector<long long>> sub(n - 1, std::vector<long long>(n - 1));
    for (long long c = 0; c < n; ++c) {
        for (long long i = 1; i < n; ++i) {
            long long k = 0;
            for (long long j = 0; j < n; ++j)
                if (j != c) sub[i - 1][k++] = a[i][j];
        }
        det += sign * a[0][c] * det_small(sub, n - 1);
        sign = -sign;
    }
    return det;
}

// Primitive all-positive kernel vector of the dim x s matrix with the
// selected generators as columns, or empty. Nonempty exactly when the
// support is a nonnegative circuit: kernel of dimension one, no zero
// component, one sign. Components come from cofactors along s-1
// independent rows and are verified against every row.
std::vector<long long> circuit_vector(const KernelCone& cone,
                                      const std::vector<long long>& support) {
    const long long m = cone.dim;
    const long long s = (long long)support.size();
    assert(s >= 2 && s - 1 <= m);

    std::vector<long long> rows(s - 1);
    for (long long i = 0; i < s - 1; ++i) rows[i] = i;
    std::vector<long long> x(s, 0);
    std::vector<std::vector<long long>> minor(s - 1, std::vector<long long>(s - 1));
    while (true) {
        bool nonzero = false;
        for (long long c = 0; c < s; ++c) {
            for (long long i = 0; i < s - 1; ++i) {
                long long k = 0;
                for (long long j = 0; j < s; ++j)
                    if (j != c) minor[i][k++] = cone.gens[support[j]][rows[i]];
            }
            long long d = det_small(minor, s - 1);
            x[c] = (c % 2 == 0) ? d : -d;
            if (d != 0) nonzero = true;
        }
        if (nonzero) break;
        // Advance to the next row subset; none left means rank <= s-2.
        long long i = s - 2;
        while (i >= 0 && rows[i] == m - (s - 1) + i) --i;
        if (i < 0) return {};
        ++rows[i];
        for (long long j = i + 1; j < s - 1; ++j) rows[j] = rows[j - 1] + 1;
    }

    long long sign = 0;
    long long g = 0;
    for (long long c = 0; c < s; ++c) {
        if (x[c] == 0) return {}; // proper subset already dependent
        long long sg = x[c] > 0 ? 1 : -1;
        if (sign == 0) sign = sg;
        if (sg != sign) return {};
        g = std::gcd(g, std::llabs(x[c]));
    }
    for (long long c = 0; c < s; ++c) x[c] = sign * x[c] / g;
    for (long long r = 0; r < m; ++r) {
        long long acc = 0;
        for (long long c = 0; c < s; ++c) acc += x[c] * cone.gens[support[c]][r];
        if (acc != 0) return {}; // full rank after all, independent columns
    }
    return x;
}

} // namespace

SumBound irreducible_sum_bound(const KernelCone& cone, long long scan_cap) {
    const long long L = cone.num_gens(), m = cone.dim;
    SumBound sb;

    long long beta = 0;
    for (const auto& g : cone.gens)
        for (long long v : g) beta = std::max(beta, std::llabs(v));

    unsigned __int128 cells = 1;
    const long long side = 4 * m * beta + 1;
    for (long long k = 0; k < m; ++k) {
        cells *= (unsigned __int128)side;
        if (cells > (unsigned __int128)kSumBoundSaturated) {
            cells = (unsigned __int128)kSumBoundSaturated;
            break;
        }
    }
    sb.steinitz = (long long)cells;

    const long long rank = generator_rank(cone);
    unsigned __int128 subsets = 0, binom = 1;
    for (long long s = 1; s <= rank + 1; ++s) {
        binom = binom * (unsigned __int128)(L - s + 1) / (unsigned __int128)s;
        subsets += binom;
        if (subsets > (unsigned __int128)scan_cap) break;
    }

    if (subsets <= (unsigned __int128)scan_cap) {
        std::vector<long long> sums;
        for (long long j = 0; j < L; ++j) {
            bool zero = std::all_of(cone.gens[j].begin(), cone.gens[j].end(),
                                    [](long long v) { return v == 0; });
            if (zero) sums.push_back(1);
        }
        std::vector<long long> support;
        for (long long s = 2; s <= std::min(rank + 1, L); ++s) {
            support.assign(s, 0);
            for (long long i = 0; i < s; ++i) support[i] = i;
            while (true) {
                auto x = circuit_vector(cone, support);
                if (!x.empty()) {
                    long long total = 0;
                    for (long long c : x) total += c;
                    sums.push_back(total);
                }
                long long i = s - 1;
                while (i >= 0 && support[i] == L - s + i) --i;
                if (i < 0) break;
                ++support[i];
                for (long long j = i + 1; j < s; ++j) support[j] = support[j - 1] + 1;
            }
        }
        sb.circuit_count = (long long)sums.size();
        for (long long v : sums) sb.max_circuit_sum = std::max(sb.max_circuit_sum, v);
        std::sort(sums.begin(), sums.end(), std::greater<>());
        long long k = std::min(L - rank, (long long)sums.size());
        unsigned __int128 top = 0;
        for (long long i = 0; i < k; ++i) top += (unsigned __int128)sums[i];
        if (top > (unsigned __int128)kSumBoundSaturated)
            top = (unsigned __int128)kSumBoundSaturated;
        // A minimal solution is a circuit or sits strictly inside a
        // simplicial subcone of at most num_gens - rank distinct rays.
        sb.caratheodory =
            std::max({1LL, sb.max_circuit_sum, (long long)top - 1});
    }

    sb.bound = sb.steinitz;
    if (sb.caratheodory > 0) sb.bound = std::min(sb.bound, sb.caratheodory);
    sb.bound = std::max(sb.bound, 1LL);
    return sb;
}

namespace {

long long norm_sq(const Weight& v) {
    long long s = 0;
    for (long long c : v) s += c * c;
    return s;
}

long long ceil_sqrt(long long nsq) {
    long long c = (long long)std::ceil(std::sqrt((double)nsq));
    while (c * c < nsq) ++c;
    while (c >= 1 && (c - 1) * (c - 1) >= nsq) --c;
    return c;
}

} // namespace

KernelCone build_A(const TorusRep& rep, const Rational& D, long long values_cap) {
    if (D.num <= 0) throw config_error("D must be positive");
    auto X2 = squared_alphabet(rep);
    const long long m = 2 * rep.rank;

    // Search radius per the rearrangement principle: any N-combination of
    // norm <= 2D is reachable through partial sums within 2D plus the
    // dimension times the largest generator norm. Integer ceilings only
    // enlarge the searched region.
    long long wceil = 0;
    for (const auto& x : X2) wceil = std::max(wceil, ceil_sqrt(norm_sq(x)));
    long long twoD_ceil = (2 * D.num + D.den - 1) / D.den;
    long long R = twoD_ceil + m * wceil;
    long long R_sq = R * R;

    std::set<Weight> seen;
    std::vector<Weight> queue;
    Weight zero(m, 0);
    seen.insert(zero);
    queue.push_back(zero);
    while (!queue.empty()) {
        Weight v = std::move(queue.back());
        queue.pop_back();
        for (const auto& x : X2) {
            Weight w = v;
            for (long long c = 0; c < m; ++c) w[c] += x[c];
            if (norm_sq(w) > R_sq) continue;
            if (seen.insert(w).second) {
                if ((long long)seen.size() > values_cap)
                    throw resource_cap_error("generator set for A exceeded value cap");
                queue.push_back(std::move(w));
            }
        }
    }

    std::vector<Weight> gens;
    for (const auto& v : seen)
        if (sq_le_twice(norm_sq(v), D)) gens.push_back(v);
    return KernelCone(m, std::move(gens));
}

namespace {

struct U128Hash {
    size_t operator()(unsigned __int128 k) const {
        uint64_t x = (uint64_t)k ^ (uint64_t)(k >> 64) * 0x9e3779b97f4a7c15ULL;
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return (size_t)x;
    }
};

} // namespace

KernelCone build_B(const TorusRep& rep, long long d0, long long values_cap) {
    if (d0 < 1) throw config_error("d0 must be a positive integer");
    auto X2 = squared_alphabet(rep);
    const long long m = 2 * rep.rank;

    // Breadth-first walk from zero, each value expanded once; the level
    // of first discovery is the least coefficient sum producing it, so
    // stopping after d0 levels yields exactly the combinations with
    // coefficient sum <= d0.
    long long beta = 0;
    for (const auto& x : X2)
        for (long long c : x) beta = std::max(beta, std::llabs(c));
    long long bits = 1;
    while ((1LL << bits) < 2 * beta * d0 + 1 && bits < 63) ++bits;

    std::vector<Weight> values;
    if (m * bits <= 120 && beta <= (1LL << 62) / std::max(d0, 1LL)) {
        const long long off = beta * d0;
        auto pack = [&](const Weight& v) {
            unsigned __int128 key = 0;
            for (long long c : v) key = (key << bits) | (unsigned __int128)(c + off);
            return key;
        };
        std::unordered_set<unsigned __int128, U128Hash> seen;
        Weight zero(m, 0);
        seen.insert(pack(zero));
        values.push_back(zero);
        std::vector<Weight> layer{zero};
        for (long long t = 1; t <= d0 && !layer.empty(); ++t) {
            std::vector<Weight> next;
            for (const auto& v : layer) {
                for (const auto& x : X2) {
                    Weight w = v;
                    for (long long c = 0; c < m; ++c) w[c] += x[c];
                    if (!seen.insert(pack(w)).second) continue;
                    if ((long long)seen.size() > values_cap)
                        throw resource_cap_error("generator set for B exceeded value cap");
                    values.push_back(w);
                    next.push_back(std::move(w));
                }
            }
            layer = std::move(next);
        }
    } else {
        // Coordinates too wide to pack; the ordered set costs more per
        // visit but has no range limits.
        std::set<Weight> seen;
        Weight zero(m, 0);
        seen.insert(zero);
        values.push_back(zero);
        std::vector<Weight> layer{zero};
        for (long long t = 1; t <= d0 && !layer.empty(); ++t) {
            std::vector<Weight> next;
            for (const auto& v : layer) {
                for (const auto& x : X2) {
                    Weight w = v;
                    for (long long c = 0; c < m; ++c) w[c] += x[c];
                    if (!seen.insert(w).second) continue;
                    if ((long long)seen.size() > values_cap)
                        throw resource_cap_error("generator set for B exceeded value cap");
                    values.push_back(w);
                    next.push_back(std::move(w));
                }
            }
            layer = std::move(next);
        }
    }
    std::sort(values.begin(), values.end());
    return KernelCone(m, std::move(values));
}

namespace {

constexpr long long kCircuitScanCap = 50000000;

// One stage of the pipeline: complete the basis when the budget allows,
// otherwise certify a ceiling. Everything downstream consumes the value
// as an upper bound on minimal-solution coordinate sums, which both
// branches deliver; only partitioning wants the basis itself, and it
// falls back to restricted cones when the elements are missing.
void bound_stage(const KernelCone& cone, const HilbertCaps& hcaps, long long exact_nodes,
                 HilbertBasis& basis, long long& value, bool& exact, SumBound& sb) {
    basis.cone = cone;
    basis.elements.clear();
    HilbertCaps attempt{hcaps.max_sum, std::min(hcaps.node_cap, exact_nodes)};
    try {
        basis = hilbert_basis(cone, attempt);
        value = std::max(1LL, basis.max_coordinate_sum());
        exact = true;
        return;
    } catch (const cone_error&) {
    } catch (const resource_cap_error&) {
    }
    sb = irreducible_sum_bound(cone, kCircuitScanCap);
    value = sb.bound;
    exact = false;
}

} // namespace

BoundsPipeline compute_pipeline(const TorusRep& rep, const Rational& D,
                                const HilbertCaps& hcaps, long long values_cap,
                                long long exact_nodes) {
    BoundsPipeline p;
    p.bounds.D = D;
    p.coneA = build_A(rep, D, values_cap);
    bound_stage(p.coneA, hcaps, exact_nodes, p.basisA, p.bounds.d0, p.d0_exact,
                p.boundA);
    p.coneB = build_B(rep, p.bounds.d0, values_cap);
    bound_stage(p.coneB, hcaps, exact_nodes, p.basisB, p.bounds.n0, p.n0_exact,
                p.boundB);
    unsigned __int128 d1 =
        (unsigned __int128)p.bounds.n0 * (unsigned __int128)p.bounds.d0 *
        (unsigned __int128)p.bounds.d0;
    if (d1 > (unsigned __int128)kSumBoundSaturated)
        throw resource_cap_error("degree bound n0 * d0^2 exceeds the representable "
                                 "range");
    p.bounds.d1 = (long long)d1;
    return p;
}

Bounds compute_bounds(const TorusRep& rep, const Rational& D, const HilbertCaps& hcaps,
                      long long values_cap) {
    return compute_pipeline(rep, D, hcaps, values_cap).bounds;
}

} // namespace torusrel
