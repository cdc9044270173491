#ifndef TORUSREL_TESTS_HELPERS_HPP
#define TORUSREL_TESTS_HELPERS_HPP

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "torusrel/cones.hpp"
#include "torusrel/repspec.hpp"

namespace torusrel::testing {

inline std::shared_ptr<const TorusRep> rep1() {
    static auto r = std::make_shared<const TorusRep>(
        make_rep(1, {{1}, {-1}}, {"x", "y"}));
    return r;
}

inline std::shared_ptr<const TorusRep> rep2() {
    static auto r = std::make_shared<const TorusRep>(
        make_rep(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    return r;
}

// Reference enumeration of minimal nonzero solutions with coordinate sum
// at most S, by walking every lambda in the sum-<=S simplex. Minimality
// inside the truncation equals global minimality: a dominated solution
// has a dominating witness of strictly smaller sum, which the truncation
// also contains.
inline std::vector<std::vector<long long>> brute_force_minimal(const KernelCone& cone,
                                                               long long S) {
    const long long L = cone.num_gens();
    std::vector<std::vector<long long>> sols;
    std::vector<long long> lam(L, 0);

    auto rec = [&](auto&& self, long long i, long long budget) -> void {
        if (i == L) {
            std::vector<long long> img(cone.dim, 0);
            bool zero_lam = true;
            for (long long g = 0; g < L; ++g) {
                if (lam[g] == 0) continue;
                zero_lam = false;
                for (long long c = 0; c < cone.dim; ++c)
                    img[c] += lam[g] * cone.gens[g][c];
            }
            if (zero_lam) return;
            if (std::all_of(img.begin(), img.end(), [](long long v) { return v == 0; }))
                sols.push_back(lam);
            return;
        }
        for (long long v = 0; v <= budget; ++v) {
            lam[i] = v;
            self(self, i + 1, budget - v);
        }
        lam[i] = 0;
    };
    rec(rec, 0, S);

    std::vector<std::vector<long long>> minimal;
    for (const auto& a : sols) {
        bool dominated = false;
        for (const auto& b : sols) {
            if (&a == &b || b == a) continue;
            bool leq = true;
            for (size_t k = 0; k < a.size(); ++k)
                if (b[k] > a[k]) {
                    leq = false;
                    break;
                }
            if (leq) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(a);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

// Dense, sorted view of a computed basis truncated to sum <= S, shaped
// like brute_force_minimal output.
inline std::vector<std::vector<long long>> dense_elements(const HilbertBasis& basis,
                                                          long long S) {
    std::vector<std::vector<long long>> out;
    for (const auto& e : basis.elements)
        if (e.sum <= S) out.push_back(e.dense(basis.cone.num_gens()));
    std::sort(out.begin(), out.end());
    return out;
}

// Random cone with small entries; dimensions and ranges chosen so the
// reference enumeration stays affordable.
inline KernelCone random_cone(std::mt19937_64& rng, long long max_dim, long long max_gens) {
    long long m = 1 + (long long)(rng() % (unsigned long long)max_dim);
    long long L = 1 + (long long)(rng() % (unsigned long long)max_gens);
    std::vector<Weight> gens;
    for (long long g = 0; g < L; ++g) {
        Weight w(m);
        for (long long c = 0; c < m; ++c) w[c] = (long long)(rng() % 7) - 3;
        gens.push_back(std::move(w));
    }
    return KernelCone(m, std::move(gens));
}

} // namespace torusrel::testing

#endif
