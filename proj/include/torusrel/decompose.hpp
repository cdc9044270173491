#ifndef TORUSREL_DECOMPOSE_HPP
#define TORUSREL_DECOMPOSE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusrel/cones.hpp"
#include "torusrel/rearrange.hpp"

namespace torusrel {

enum class StepKind { column_reduce_F, column_reduce_G, row_swap, recursion_base };

std::string step_kind_name(StepKind k);
StepKind parse_step_kind(const std::string& name);

// One telescoping sub-relation: multiplier * (sub_lhs - sub_rhs). The
// sides flatten to the same monomial and the total degree of sub_lhs is
// within the certificate bound.
struct Step {
    StepKind kind = StepKind::recursion_base;
    PnMonomial multiplier;
    PnMonomial sub_lhs, sub_rhs;
};

struct Certificate {
    Binomial target;
    long long bound = 0; // n0 * d0^2
    std::vector<Step> steps;
    std::optional<Binomial> residual; // always empty for decompose() output
};

// Precomputed cone data shared by all decompositions over one rep.
struct PipelineContext {
    std::shared_ptr<const TorusRep> rep;
    BoundsPipeline pipeline;
    long long rearrange_node_cap = 2000000;
};

// Column reduction: builds the doubled matrix of (lhs, rhs), extracts a
// zero-sum column block, and produces matched variables f, g of equal
// degree <= d0 plus the two reduction steps. `next` is the middle
// binomial carrying f and g. When an equal-degree matched pair already
// exists the steps are empty and next == b.
struct ColumnReduceResult {
    PnVariable f, g;
    std::vector<Step> steps;
    Binomial next;
};
ColumnReduceResult column_reduce(const Binomial& b, const PipelineContext& ctx);

// Row swap chain: partitions the rows of the doubled matrix of (f, g)
// into zero-sum blocks and swaps block by block, emitting one step per
// block. The returned residual has f and g cancelled and strictly
// smaller total degree.
struct RowSwapResult {
    std::vector<Step> steps;
    Binomial residual;
};
RowSwapResult row_swap_chain(const Binomial& b, const PnVariable& f, const PnVariable& g,
                             const PipelineContext& ctx);

Certificate decompose(const Binomial& b, const PipelineContext& ctx);

// Replay check: (a) steps flatten-equal, (b) step degrees within bound,
// (c) formal telescoping reproduces target lhs - rhs, (d) no unresolved
// residual. Returns false with the first failing diagnostic:
// "flatten-mismatch", "degree-bound-exceeded", "telescoping-mismatch",
// "unresolved-residual".
bool verify_certificate(const Certificate& c, std::string* diagnostic = nullptr);

nlohmann::ordered_json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

} // namespace torusrel

#endif
