#include <doctest.h>

#include <algorithm>
#include <set>

#include "torusrel/cones.hpp"
#include "torusrel/errors.hpp"

#include "helpers.hpp"

using namespace torusrel;
using namespace torusrel::testing;

namespace {

HilbertCaps roomy() { return {128, 20000000}; }

std::vector<std::vector<long long>> dense_all(const HilbertBasis& b) {
    std::vector<std::vector<long long>> out;
    for (const auto& e : b.elements) out.push_back(e.dense(b.cone.num_gens()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("kernel cone constructor deduplicates but keeps order") {
    KernelCone c(1, {{1}, {-1}, {1}, {2}});
    CHECK(c.num_gens() == 3);
    CHECK(c.gens == std::vector<Weight>{{1}, {-1}, {2}});
    CHECK_THROWS_AS(KernelCone(2, {{1}, {2}}), config_error);
}

TEST_CASE("hilbert basis of tiny cones matches direct reasoning") {
    SUBCASE("opposite unit weights") {
        HilbertBasis b = hilbert_basis(KernelCone(1, {{1}, {-1}}), roomy());
        CHECK(dense_all(b) == std::vector<std::vector<long long>>{{1, 1}});
        CHECK(b.max_coordinate_sum() == 2);
    }
    SUBCASE("weights 2 and -3 need counts 3 and 2") {
        HilbertBasis b = hilbert_basis(KernelCone(1, {{2}, {-3}}), roomy());
        CHECK(dense_all(b) == std::vector<std::vector<long long>>{{3, 2}});
    }
    SUBCASE("rank two unit pairs split into independent relations") {
        HilbertBasis b =
            hilbert_basis(KernelCone(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), roomy());
        CHECK(dense_all(b) == std::vector<std::vector<long long>>{{0, 0, 1, 1},
                                                                  {1, 1, 0, 0}});
    }
    SUBCASE("zero generator is a minimal solution by itself") {
        HilbertBasis b = hilbert_basis(KernelCone(1, {{0}, {5}}), roomy());
        CHECK(dense_all(b) == std::vector<std::vector<long long>>{{1, 0}});
    }
    SUBCASE("solution-free cone gives an empty basis") {
        HilbertBasis b = hilbert_basis(KernelCone(1, {{1}, {2}}), roomy());
        CHECK(b.elements.empty());
        CHECK(b.max_coordinate_sum() == 0);
    }
}

TEST_CASE("hilbert basis agrees with reference enumeration on random cones") {
    std::mt19937_64 rng(20260816);
    const long long S = 8;
    int tested = 0;
    for (int t = 0; t < 60; ++t) {
        KernelCone cone = random_cone(rng, 3, 5);
        bool complete = false;
        HilbertBasis basis = hilbert_basis_partial(
            cone, {S + 1, 4000000}, [&](long long level) { return level <= S; },
            &complete);
        auto got = dense_elements(basis, S);
        auto want = brute_force_minimal(cone, S);
        CHECK(got == want);
        ++tested;
    }
    CHECK(tested == 60);
}

TEST_CASE("partial completion is exact below the stopping level") {
    KernelCone cone(1, {{1}, {-1}, {2}, {-3}});
    HilbertBasis full = hilbert_basis(cone, roomy());

    bool complete = true;
    HilbertBasis part = hilbert_basis_partial(
        cone, roomy(), [](long long level) { return level <= 3; }, &complete);
    CHECK_FALSE(complete);
    CHECK(dense_all(part) == dense_elements(full, 3));

    bool complete2 = false;
    HilbertBasis all = hilbert_basis_partial(
        cone, roomy(), [](long long) { return true; }, &complete2);
    CHECK(complete2);
    CHECK(dense_all(all) == dense_all(full));
}

TEST_CASE("completion caps turn into typed errors") {
    CHECK_THROWS_AS(hilbert_basis(KernelCone(1, {{2}, {-3}}), {4, 1000000}), cone_error);
    CHECK_THROWS_AS(hilbert_basis(KernelCone(1, {{2}, {-3}}), {128, 1}),
                    resource_cap_error);
}

TEST_CASE("elements come sorted by sum, then lexicographically") {
    HilbertBasis b = hilbert_basis(KernelCone(1, {{1}, {-1}, {2}, {-2}}), roomy());
    for (size_t i = 1; i < b.elements.size(); ++i) {
        const auto& prev = b.elements[i - 1];
        const auto& cur = b.elements[i];
        bool ordered =
            prev.sum < cur.sum ||
            (prev.sum == cur.sum && prev.dense(4) <= cur.dense(4));
        CHECK(ordered);
    }
}

TEST_CASE("certified ceiling covers the exact maximum") {
    SUBCASE("single full-support circuit is found exactly") {
        KernelCone cone(2, {{4, 2}, {-3, -1}, {4, -4}});
        HilbertBasis b = hilbert_basis(cone, roomy());
        REQUIRE(b.elements.size() == 1);
        CHECK(b.elements[0].dense(3) == std::vector<long long>{8, 12, 1});
        CHECK(b.max_coordinate_sum() == 21);

        SumBound sb = irreducible_sum_bound(cone, 1000000);
        CHECK(sb.circuit_count == 1);
        CHECK(sb.max_circuit_sum == 21);
        CHECK(sb.caratheodory == 21);
        CHECK(sb.steinitz == 33 * 33); // (4 * dim * beta + 1)^dim with beta = 4
        CHECK(sb.bound == 21);
    }
    SUBCASE("skipped scan leaves the pigeonhole value") {
        KernelCone cone(2, {{4, 2}, {-3, -1}, {4, -4}});
        SumBound sb = irreducible_sum_bound(cone, 1);
        CHECK(sb.circuit_count == 0);
        CHECK(sb.caratheodory == 0);
        CHECK(sb.bound == sb.steinitz);
    }
    SUBCASE("random cones never beat the ceiling") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 40; ++t) {
            KernelCone cone = random_cone(rng, 2, 5);
            HilbertBasis b;
            try {
                b = hilbert_basis(cone, {64, 2000000});
            } catch (const error&) {
                continue; // too wide for exact completion, nothing to compare
            }
            SumBound sb = irreducible_sum_bound(cone, 1000000);
            CHECK(sb.bound >= b.max_coordinate_sum());
            CHECK(sb.max_circuit_sum <= std::max(b.max_coordinate_sum(), 1LL));
        }
    }
}

TEST_CASE("stage A generators are the short norm ball") {
    SUBCASE("rank one at radius one") {
        KernelCone A = build_A(*rep1(), Rational(1), 100000);
        std::vector<Weight> want = {{-2, 0}, {-1, -1}, {-1, 1}, {0, -2}, {0, 0},
                                    {0, 2},  {1, -1},  {1, 1},  {2, 0}};
        CHECK(A.gens == want);
    }
    SUBCASE("rank two at radius one") {
        KernelCone A = build_A(*rep2(), Rational(1), 100000);
        CHECK(A.num_gens() == 49);
        CHECK(std::count(A.gens.begin(), A.gens.end(), Weight{0, 0, 0, 0}) == 1);
        for (const auto& g : A.gens) {
            long long nsq = 0;
            for (long long c : g) nsq += c * c;
            CHECK(nsq <= 4);
        }
    }
    SUBCASE("radius below the alphabet norm leaves only zero") {
        KernelCone A = build_A(*rep1(), Rational(1, 2), 100000);
        CHECK(A.gens == std::vector<Weight>{{0, 0}});
    }
    SUBCASE("rank two at radius 3/4 adds the one-sided cancellations") {
        KernelCone A = build_A(*rep2(), Rational(3, 4), 100000);
        CHECK(A.num_gens() == 25);
    }
}

TEST_CASE("stage B generators are the short coefficient sums") {
    KernelCone B1 = build_B(*rep1(), 1, 100000);
    std::vector<Weight> want = {{-1, -1}, {-1, 1}, {0, 0}, {1, -1}, {1, 1}};
    CHECK(B1.gens == want);

    KernelCone B4 = build_B(*rep1(), 4, 100000);
    CHECK(B4.num_gens() == 41);
    for (const auto& g : B4.gens) {
        CHECK(std::abs(g[0]) <= 4);
        CHECK(std::abs(g[1]) <= 4);
        CHECK((g[0] + g[1]) % 2 == 0);
    }

    CHECK_THROWS_AS(build_B(*rep1(), 4, 10), resource_cap_error);
}

TEST_CASE("pipeline reproduces the pinned rank one bounds") {
    BoundsPipeline p = compute_pipeline(*rep1(), Rational(1), roomy(), 2000000);
    CHECK(p.bounds.d0 == 4);
    CHECK(p.bounds.n0 == 928);
    CHECK(p.bounds.d1 == 14848);

    CHECK(p.d0_exact);
    CHECK(p.basisA.elements.size() == 13);

    CHECK_FALSE(p.n0_exact);
    CHECK(p.basisB.elements.empty());
    CHECK(p.coneB.num_gens() == 41);
    CHECK(p.boundB.circuit_count == 1857);
    CHECK(p.boundB.max_circuit_sum == 25);
    CHECK(p.boundB.caratheodory == 928);
    CHECK(p.boundB.steinitz == 1089);
}

TEST_CASE("pipeline reproduces the pinned rank two bounds") {
    BoundsPipeline p = compute_pipeline(*rep2(), Rational(3, 4), roomy(), 2000000);
    CHECK(p.bounds.d0 == 6);
    CHECK(p.bounds.n0 == 88529281); // 97^4
    CHECK(p.bounds.d1 == 3187054116);

    CHECK(p.d0_exact);
    CHECK(p.basisA.elements.size() == 261);

    CHECK_FALSE(p.n0_exact);
    CHECK(p.coneB.num_gens() == 3697);
    CHECK(p.boundB.caratheodory == 0); // support scan skipped at this width
    CHECK(p.boundB.steinitz == 88529281);
}

TEST_CASE("d0 grows with the rearrangement radius") {
    std::vector<Rational> radii = {Rational(1, 2), Rational(1), Rational(3, 2)};
    std::vector<long long> want = {1, 4, 5};
    for (size_t i = 0; i < radii.size(); ++i) {
        BoundsPipeline p = compute_pipeline(*rep1(), radii[i], roomy(), 2000000);
        CHECK(p.bounds.d0 == want[i]);
    }
}

TEST_CASE("tiny radius collapses the pipeline to trivial bounds") {
    BoundsPipeline p = compute_pipeline(*rep1(), Rational(1, 2), roomy(), 2000000);
    CHECK(p.bounds.d0 == 1);
    CHECK(p.bounds.n0 == 2);
    CHECK(p.bounds.d1 == 2);
    CHECK(p.d0_exact);
    CHECK(p.n0_exact);
    CHECK(p.basisB.elements.size() == 3);
}

TEST_CASE("single weight without cancellation still yields unit bounds") {
    TorusRep lonely = make_rep(1, {{1}});
    BoundsPipeline p = compute_pipeline(lonely, Rational(1), roomy(), 2000000);
    CHECK(p.bounds.d0 == 1);
    CHECK(p.bounds.n0 == 1);
    CHECK(p.bounds.d1 == 1);
}

TEST_CASE("rank two at the default radius exhausts the value cap honestly") {
    CHECK_THROWS_AS(compute_pipeline(*rep2(), Rational(4), roomy(), 100000, 50000),
                    resource_cap_error);
}

TEST_CASE("compute_bounds is the pipeline's bounds slice") {
    Bounds b = compute_bounds(*rep1(), Rational(1), roomy(), 2000000);
    CHECK(b.d0 == 4);
    CHECK(b.n0 == 928);
    CHECK(b.d1 == 14848);
    CHECK(b.D == Rational(1));
}
