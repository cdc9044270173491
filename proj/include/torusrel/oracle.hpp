#ifndef TORUSREL_ORACLE_HPP
#define TORUSREL_ORACLE_HPP

#include <vector>

#include "torusrel/monomials.hpp"

namespace torusrel {

// All P_n-monomials sharing one image in R_n.
struct Fiber {
    MultiMonomial value;
    std::vector<PnMonomial> members;
};

// Groups every PnMonomial with at most pn_degree_cap factors (variables
// from enumerate_pn_variables(rep, n, dcap)) by canonical flattening.
// max_total_degree, when >= 0, additionally caps the total
// multi-homogeneous degree; the factor-count cap alone makes the
// universe explode long before the degrees of interest are covered.
std::vector<Fiber> enumerate_fibers(const std::shared_ptr<const TorusRep>& rep,
                                    long long n, long long pn_degree_cap, long long dcap,
                                    long long cap, long long max_total_degree = -1);

// True iff the fiber graph is connected using moves that exchange a
// sub-monomial of total multi-homogeneous degree <= s (edge F ~ F' iff
// the non-common part has degree <= s).
bool fiber_connected_under(const Fiber& fiber, long long s);

// The smallest s such that every fiber is connected under degree-s
// moves: per fiber the minimax bottleneck edge of the gcd-cancellation
// graph, maximized over fibers. 0 when all fibers are singletons.
long long markov_degree_upper(const std::shared_ptr<const TorusRep>& rep, long long n,
                              long long pn_degree_cap, long long dcap, long long cap,
                              long long max_total_degree = -1);

} // namespace torusrel

#endif
