#ifndef TORUSREL_MONOMIALS_HPP
#define TORUSREL_MONOMIALS_HPP

#include <memory>
#include <string>
#include <vector>

#include "torusrel/repspec.hpp"

namespace torusrel {

// A multi-homogeneous monomial f = f_1 (x) ... (x) f_n of degree d: an
// n x d matrix of variable indices (0-based into rep->weights). Entry
// (i,j) is the j-th variable of tensor factor i. Canonical form keeps
// each row sorted ascending; order within a row has no algebraic meaning.
struct MultiMonomial {
    std::shared_ptr<const TorusRep> rep;
    long long n = 0;
    long long deg = 0;
    std::vector<int> entries; // row-major, size n*deg

    int at(long long i, long long j) const { return entries[i * deg + j]; }
    int& at(long long i, long long j) { return entries[i * deg + j]; }

    void canonicalize();
    bool is_canonical() const;

    bool operator==(const MultiMonomial& o) const {
        return n == o.n && deg == o.deg && entries == o.entries;
    }
    bool operator<(const MultiMonomial& o) const {
        if (deg != o.deg) return deg < o.deg;
        if (n != o.n) return n < o.n;
        return entries < o.entries;
    }
};

// An n x d matrix of integer vectors of common length dim (r for plain
// weight matrices, 2r for the doubled matrices used in column reduction).
struct WeightMatrix {
    long long rows = 0, cols = 0, dim = 0;
    std::vector<long long> data; // rows*cols*dim, row-major, vector-contiguous

    long long* at(long long i, long long j) { return data.data() + (i * cols + j) * dim; }
    const long long* at(long long i, long long j) const {
        return data.data() + (i * cols + j) * dim;
    }

    Weight col_sum(long long j) const;
    Weight row_sum(long long i) const;
    long long col_sum_norm_sq(long long j) const;

    // True iff the entries of the given rows sum to the zero vector.
    bool rows_zero_sum(const std::vector<long long>& rows_idx) const;
    // True iff the entries of the given columns sum to the zero vector.
    bool cols_zero_sum(const std::vector<long long>& cols_idx) const;
};

// A variable of P_n is an invariant MultiMonomial of degree 1..d0; the
// degree bound is checked where a bound is in scope, not stored here.
using PnVariable = MultiMonomial;

// A monomial of P_n: a canonically sorted multiset of PnVariables. The
// empty product is the identity; n and rep are kept so it stays typed.
struct PnMonomial {
    std::shared_ptr<const TorusRep> rep;
    long long n = 0;
    std::vector<PnVariable> factors;

    long long pn_degree() const { return (long long)factors.size(); }
    long long total_degree() const;
    void canonicalize(); // sorts factors

    bool operator==(const PnMonomial& o) const {
        return n == o.n && factors == o.factors;
    }
    bool operator<(const PnMonomial& o) const {
        if (n != o.n) return n < o.n;
        return factors < o.factors;
    }
};

struct Binomial {
    PnMonomial lhs, rhs;
};

WeightMatrix weight_matrix(const MultiMonomial& f);

bool is_invariant(const MultiMonomial& f);

// Row-wise concatenation of all factors, canonicalized. The empty
// product flattens to the n x 0 identity monomial.
MultiMonomial flatten(const PnMonomial& F);

bool is_relation(const Binomial& b);

// Replaces rows I of m by the corresponding rows of b. Both row blocks
// must be zero-sum and the degrees must match, so the result is again
// invariant of the same degree.
PnVariable row_block_replace(const PnVariable& m, const std::vector<long long>& I,
                             const PnVariable& b);

// All canonical invariant MultiMonomials with the given n and degree in
// 1..dcap, ordered by degree then lexicographically by entry matrix.
// Throws resource_cap_error when more than `cap` would be produced.
std::vector<PnVariable> enumerate_pn_variables(const std::shared_ptr<const TorusRep>& rep,
                                               long long n, long long dcap,
                                               long long cap);

// Multiset product, difference and common-factor reduction on factors.
PnMonomial pn_mul(const PnMonomial& a, const PnMonomial& b);
PnMonomial pn_mul(const PnMonomial& a, const PnVariable& f);
// Multiset difference a \ b; b must be contained in a.
PnMonomial pn_minus(const PnMonomial& a, const PnMonomial& b);
PnMonomial pn_one(const std::shared_ptr<const TorusRep>& rep, long long n);

// Divides out the common factors of both sides; returns the reduced
// binomial and the common part.
std::pair<Binomial, PnMonomial> reduce_common(const Binomial& b);

// Text syntax: tensor factors separated by '|', variables by '*',
// e.g. "x1*x2|x2*x2". P_n-monomials juxtapose parenthesized factors,
// "(x|y)(y|x)"; the empty product is "1". Binomials are "lhs = rhs".
std::string to_text(const MultiMonomial& f);
std::string to_text(const PnMonomial& F);
std::string to_text(const Binomial& b);

MultiMonomial parse_multi_monomial(const std::shared_ptr<const TorusRep>& rep,
                                   const std::string& text);
PnMonomial parse_pn_monomial(const std::shared_ptr<const TorusRep>& rep,
                             const std::string& text, long long n_hint = -1);
Binomial parse_binomial(const std::shared_ptr<const TorusRep>& rep,
                        const std::string& text, long long n_hint = -1);

} // namespace torusrel

#endif
