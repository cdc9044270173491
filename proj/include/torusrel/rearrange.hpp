#ifndef TORUSREL_REARRANGE_HPP
#define TORUSREL_REARRANGE_HPP

#include <vector>

#include "torusrel/cones.hpp"
#include "torusrel/monomials.hpp"

namespace torusrel {

// Finds per-row permutations of W's entries so that every column sum of
// the permuted matrix has squared Euclidean norm <= D^2. Backtracking
// column by column with candidates ordered by (norm^2, lex), so the
// result is deterministic. perms[i][j] = original position in row i of
// the entry placed at column j.
// Throws bound_exceeded_error (with the best achievable max column
// norm^2) when no arrangement meets the bound.
std::vector<std::vector<long long>> steinitz_rearrange(const WeightMatrix& W,
                                                       const Rational& D,
                                                       long long node_cap);

WeightMatrix apply_row_permutations(const WeightMatrix& W,
                                    const std::vector<std::vector<long long>>& perms);

// Identifies one column of a doubled matrix: which factor of the
// P_n-monomial it came from and which column within that factor.
struct ColumnOrigin {
    long long factor = 0;
    long long col = 0;
};

// The matrix M of paired columns: entry (i,j) is the concatenation of
// the ij-th entries of ||F|| and ||G|| after each factor's weight matrix
// has been rearranged to column sums of norm <= D. Entries live in Z^{2r},
// and fvars/gvars give each column's variable indices so monomials can
// be reassembled.
struct DoubledMatrix {
    std::shared_ptr<const TorusRep> rep;
    long long n = 0, width = 0;
    WeightMatrix entries;               // n x width over Z^{2r}
    std::vector<std::vector<int>> fcol; // per column: n variable indices (F half)
    std::vector<std::vector<int>> gcol; // per column: n variable indices (G half)
    std::vector<ColumnOrigin> forigin, gorigin;
};

// Rearranges every factor of F and G at radius D and pairs the flattened
// columns positionally. F and G must flatten to the same monomial.
DoubledMatrix build_doubled_matrix(const PnMonomial& F, const PnMonomial& G,
                                   const Rational& D, long long node_cap);

// Self-doubled matrix (w || w) of a plain weight matrix, for running the
// partitions on a single rearranged matrix.
WeightMatrix self_double(const WeightMatrix& W);

// First zero-sum block: buckets the column-sum vectors, finds the first
// Hilbert basis element below the multiplicity vector, and maps it back
// to concrete columns (smallest index first). Indices ascending,
// cardinality <= d0.
std::vector<long long> zero_sum_column_block(const WeightMatrix& doubled, long long d0,
                                             const HilbertBasis& basisA);

// Repeats block extraction until every column is used. Blocks are
// disjoint, covering, each zero-sum with <= d0 columns.
std::vector<std::vector<long long>> zero_sum_column_partition(const WeightMatrix& doubled,
                                                              long long d0,
                                                              const HilbertBasis& basisA);

// Same mechanism on rows: buckets row sums (elements of B when the width
// is <= d0) and extracts blocks of <= n0 rows via basisB. Rows need no
// rearrangement since row sums are permutation invariant.
std::vector<std::vector<long long>> zero_sum_row_partition(const WeightMatrix& doubled,
                                                           long long n0,
                                                           const HilbertBasis& basisB);

// Kernel cone over the distinct values of the given vectors (input
// order). Its Hilbert basis elements are exactly the minimal zero-sum
// sub-multisets, which is what the row partition consumes; restricting
// to the values actually present keeps the cone tiny.
KernelCone restricted_value_cone(const std::vector<Weight>& values);

} // namespace torusrel

#endif
