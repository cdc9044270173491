#ifndef TORUSREL_CONES_HPP
#define TORUSREL_CONES_HPP

#include <functional>
#include <vector>

#include "torusrel/monomials.hpp"
#include "torusrel/rational.hpp"
#include "torusrel/repspec.hpp"

namespace torusrel {

// Generators a_1..a_L of the cone sigma = { lambda >= 0 : sum lambda_i a_i = 0 }.
// Generator order is the coordinate order of all lambda vectors, so the
// constructor deduplicates but never reorders.
struct KernelCone {
    long long dim = 0; // ambient dimension m of the generators
    std::vector<Weight> gens;

    KernelCone() = default;
    KernelCone(long long m, std::vector<Weight> generators);

    long long num_gens() const { return (long long)gens.size(); }
};

// One minimal nonzero solution, stored sparsely as (generator index, count)
// pairs sorted by index.
struct HilbertElem {
    std::vector<std::pair<int, long long>> nz;
    long long sum = 0; // coordinate sum

    std::vector<long long> dense(long long L) const;
    bool operator==(const HilbertElem& o) const { return nz == o.nz; }
};

struct HilbertBasis {
    KernelCone cone;
    std::vector<HilbertElem> elements; // sorted by (sum, dense lex)

    long long max_coordinate_sum() const;
};

// Options bounding the completion search. `max_sum` is the largest
// coordinate sum explored; exceeding it before the frontier empties is a
// cone_error. `node_cap` bounds total frontier nodes (resource_cap_error).
struct HilbertCaps {
    long long max_sum = 128;
    long long node_cap = 20000000;
};

// Full completion by coordinate-sum level: returns every componentwise
// minimal nonzero solution, or throws when completeness cannot be
// certified within the caps (cone_error past max_sum, resource_cap_error
// past node_cap).
HilbertBasis hilbert_basis(const KernelCone& cone, const HilbertCaps& caps);

// Contejean-Devie completion layered by coordinate sum: `keep_going(s)`
// is consulted before each level s; returning false stops the search,
// leaving a partial basis that is complete through level s-1 (every
// reported element is a genuine minimal solution). `complete` reports
// whether the frontier emptied. Used both as a certified lower bound
// when full completion is out of reach and as an independent algorithm
// to cross-check hilbert_basis.
HilbertBasis hilbert_basis_partial(const KernelCone& cone, const HilbertCaps& caps,
                                   const std::function<bool(long long)>& keep_going,
                                   bool* complete);

// Certified ceiling on the coordinate sum of every minimal nonzero
// solution, for cones too wide to complete. Two independent arguments
// are evaluated and the smaller wins:
//  - extreme rays: a minimal solution either is a nonnegative circuit
//    (support at most rank+1, found by scanning support subsets) or has
//    all barycentric coordinates below 1 inside a simplicial subcone of
//    extreme rays, so its sum stays below the sum of the largest
//    num_gens - rank circuit sums;
//  - pigeonhole: a zero-sum multiset of generators can be ordered so all
//    partial sums stay within 2 * dim * beta in the max norm (beta the
//    largest generator entry), and a minimal solution cannot repeat a
//    partial sum, capping its length at the cell count of that box.
struct SumBound {
    long long bound = 1;           // certified max coordinate sum, >= 1
    long long caratheodory = 0;    // 0 when the support scan was skipped
    long long steinitz = 0;
    long long circuit_count = 0;   // nonnegative circuits found
    long long max_circuit_sum = 0; // exact lower bound on the true maximum
};

// `scan_cap` bounds the number of support subsets examined; past it the
// circuit side is skipped and the pigeonhole value stands alone.
SumBound irreducible_sum_bound(const KernelCone& cone, long long scan_cap);

// All N-combinations of the squared alphabet with Euclidean norm <= 2D,
// as a cone over Z^{2r}. Generators sorted lexicographically; always
// contains the zero vector.
KernelCone build_A(const TorusRep& rep, const Rational& D, long long values_cap);

// All N-combinations of the squared alphabet with coefficient sum <= d0.
KernelCone build_B(const TorusRep& rep, long long d0, long long values_cap);

struct Bounds {
    Rational D;
    long long d0 = 0;
    long long n0 = 0;
    long long d1 = 0; // n0 * d0^2
};

// Everything the decomposition pipeline needs from the cone stage. A
// stage completes exactly when it can; otherwise its basis stays empty
// (cone still attached), the exact flag drops, and the bound value comes
// from irreducible_sum_bound. Partitions later rebuild what they need
// from cones restricted to the values actually present.
struct BoundsPipeline {
    Bounds bounds;
    KernelCone coneA, coneB;
    HilbertBasis basisA, basisB;
    bool d0_exact = true, n0_exact = true;
    SumBound boundA, boundB; // meaningful only for a stage that fell back
};

// `exact_nodes` limits the completion attempt per stage before falling
// back; the configured node cap still applies when it is smaller.
BoundsPipeline compute_pipeline(const TorusRep& rep, const Rational& D,
                                const HilbertCaps& hcaps, long long values_cap,
                                long long exact_nodes = 300000);

Bounds compute_bounds(const TorusRep& rep, const Rational& D, const HilbertCaps& hcaps,
                      long long values_cap);

} // namespace torusrel

#endif
