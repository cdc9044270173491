#include "torusrel/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "torusrel/errors.hpp"

namespace torusrel {

namespace {

// Degree of the part of a that survives cancelling the common factors
// with b. Both lie in one fiber, so the value is symmetric in a and b.
long long exchange_degree(const PnMonomial& a, const PnMonomial& b) {
    auto [red, common] = reduce_common(Binomial{a, b});
    return a.total_degree() - common.total_degree();
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

} // namespace

std::vector<Fiber> enumerate_fibers(const std::shared_ptr<const TorusRep>& rep,
                                    long long n, long long pn_degree_cap, long long dcap,
                                    long long cap, long long max_total_degree) {
    if (pn_degree_cap < 0) throw config_error("the factor count cap must be >= 0");
    std::vector<Fiber> out;
    if (pn_degree_cap == 0) return out;

    auto vars = enumerate_pn_variables(rep, n, dcap, cap);
    std::map<MultiMonomial, std::vector<PnMonomial>> groups;
    long long count = 0;
    PnMonomial cur = pn_one(rep, n);
    long long cur_deg = 0;

    // Variables come degree-ascending, so nondecreasing index choices
    // yield each product exactly once, already in canonical factor order.
    std::function<void(size_t)> rec = [&](size_t start) {
        for (size_t i = start; i < vars.size(); ++i) {
            if (max_total_degree >= 0 && cur_deg + vars[i].deg > max_total_degree)
                break;
            cur.factors.push_back(vars[i]);
            cur_deg += vars[i].deg;
            if (++count > cap)
                throw resource_cap_error("fiber enumeration exceeded the cap of " +
                                         std::to_string(cap) + " products");
            groups[flatten(cur)].push_back(cur);
            if ((long long)cur.factors.size() < pn_degree_cap) rec(i);
            cur_deg -= vars[i].deg;
            cur.factors.pop_back();
        }
    };
    rec(0);

    out.reserve(groups.size());
    for (auto& [value, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(Fiber{value, std::move(members)});
    }
    return out;
}

bool fiber_connected_under(const Fiber& fiber, long long s) {
    const size_t k = fiber.members.size();
    if (k <= 1) return true;
    UnionFind uf(k);
    size_t components = k;
    for (size_t i = 0; i < k && components > 1; ++i)
        for (size_t j = i + 1; j < k && components > 1; ++j)
            if (exchange_degree(fiber.members[i], fiber.members[j]) <= s &&
                uf.unite((int)i, (int)j))
                --components;
    return components == 1;
}

long long markov_degree_upper(const std::shared_ptr<const TorusRep>& rep, long long n,
                              long long pn_degree_cap, long long dcap, long long cap,
                              long long max_total_degree) {
    auto fibers = enumerate_fibers(rep, n, pn_degree_cap, dcap, cap, max_total_degree);
    long long worst = 0;
    for (const auto& fiber : fibers) {
        const size_t k = fiber.members.size();
        if (k <= 1) continue;

        // Minimax bottleneck of the complete exchange graph: ascending
        // Kruskal, the last edge that merges two components is the
        // smallest s connecting this fiber.
        std::vector<std::tuple<long long, size_t, size_t>> edges;
        edges.reserve(k * (k - 1) / 2);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j)
                edges.emplace_back(exchange_degree(fiber.members[i], fiber.members[j]),
                                   i, j);
        std::sort(edges.begin(), edges.end());

        UnionFind uf(k);
        size_t components = k;
        long long bottleneck = 0;
        for (const auto& [w, i, j] : edges) {
            if (!uf.unite((int)i, (int)j)) continue;
            bottleneck = std::max(bottleneck, w);
            if (--components == 1) break;
        }
        worst = std::max(worst, bottleneck);
    }
    return worst;
}

} // namespace torusrel
