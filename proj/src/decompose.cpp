#include "torusrel/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "torusrel/errors.hpp"

namespace torusrel {

std::string step_kind_name(StepKind k) {
    switch (k) {
    case StepKind::column_reduce_F: return "column-reduce-F";
    case StepKind::column_reduce_G: return "column-reduce-G";
    case StepKind::row_swap: return "row-swap";
    case StepKind::recursion_base: return "recursion-base";
    }
    return "?";
}

StepKind parse_step_kind(const std::string& name) {
    if (name == "column-reduce-F") return StepKind::column_reduce_F;
    if (name == "column-reduce-G") return StepKind::column_reduce_G;
    if (name == "row-swap") return StepKind::row_swap;
    if (name == "recursion-base") return StepKind::recursion_base;
    throw config_error("unknown step kind '" + name + "'");
}

namespace {

// Sorted variable-index multiset of one row of a canonical monomial.
std::vector<int> row_multiset(const MultiMonomial& m, long long i) {
    return {m.entries.begin() + i * m.deg, m.entries.begin() + (i + 1) * m.deg};
}

std::vector<int> multiset_diff(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void check_step_relation(const Step& s, const char* where) {
    if (flatten(s.sub_lhs) != flatten(s.sub_rhs))
        throw decomposition_error(std::string(where) +
                                  " produced a non-relation step (internal bug)");
}

// Builds the monomial whose columns are the given variable-index columns.
PnVariable monomial_from_columns(const std::shared_ptr<const TorusRep>& rep, long long n,
                                 const std::vector<std::vector<int>>& cols) {
    PnVariable v;
    v.rep = rep;
    v.n = n;
    v.deg = (long long)cols.size();
    v.entries.resize(n * v.deg);
    for (long long j = 0; j < v.deg; ++j)
        for (long long i = 0; i < n; ++i) v.at(i, j) = cols[j][i];
    v.canonicalize();
    return v;
}

// Splits a set of variable-index columns (whose weight column sums are
// already within D) into PnVariables via the zero-sum column partition.
PnMonomial repackage_columns(const std::shared_ptr<const TorusRep>& rep, long long n,
                             const std::vector<std::vector<int>>& cols, long long d0,
                             const HilbertBasis& basisA) {
    PnMonomial out = pn_one(rep, n);
    if (cols.empty()) return out;

    WeightMatrix W;
    W.rows = n;
    W.cols = (long long)cols.size();
    W.dim = rep->rank;
    W.data.resize(W.rows * W.cols * W.dim);
    for (long long j = 0; j < W.cols; ++j)
        for (long long i = 0; i < n; ++i) {
            const Weight& w = rep->weights[cols[j][i]];
            std::copy(w.begin(), w.end(), W.at(i, j));
        }

    auto blocks = zero_sum_column_partition(self_double(W), d0, basisA);
    for (const auto& block : blocks) {
        std::vector<std::vector<int>> sub;
        sub.reserve(block.size());
        for (long long j : block) sub.push_back(cols[j]);
        PnVariable v = monomial_from_columns(rep, n, sub);
        if (!is_invariant(v))
            throw decomposition_error("repackaged block is not invariant (internal bug)");
        out.factors.push_back(std::move(v));
    }
    out.canonicalize();
    return out;
}

PnMonomial factors_at(const PnMonomial& P, const std::vector<size_t>& idx) {
    PnMonomial out = pn_one(P.rep, P.n);
    for (size_t i : idx) out.factors.push_back(P.factors[i]);
    out.canonicalize();
    return out;
}

PnMonomial factors_not_at(const PnMonomial& P, const std::vector<size_t>& idx) {
    PnMonomial out = pn_one(P.rep, P.n);
    std::vector<bool> drop(P.factors.size(), false);
    for (size_t i : idx) drop[i] = true;
    for (size_t i = 0; i < P.factors.size(); ++i)
        if (!drop[i]) out.factors.push_back(P.factors[i]);
    return out; // still sorted: subsequence of a sorted list
}

} // namespace

ColumnReduceResult column_reduce(const Binomial& b, const PipelineContext& ctx) {
    const auto& bounds = ctx.pipeline.bounds;
    const long long d0 = bounds.d0;
    assert(!b.lhs.factors.empty() && !b.rhs.factors.empty());

    ColumnReduceResult res;

    // Fast path: an equal-degree pair already present on both sides. Both
    // factor lists are sorted, so the first hit minimizes (degree, f, g).
    for (const auto& lf : b.lhs.factors) {
        for (const auto& rf : b.rhs.factors) {
            if (rf.deg > lf.deg) break;
            if (rf.deg == lf.deg) {
                res.f = lf;
                res.g = rf;
                res.next = b;
                return res;
            }
        }
    }

    DoubledMatrix M =
        build_doubled_matrix(b.lhs, b.rhs, bounds.D, ctx.rearrange_node_cap);
    std::vector<long long> J = zero_sum_column_block(M.entries, d0, ctx.pipeline.basisA);

    std::vector<std::vector<int>> fcols, gcols;
    for (long long j : J) {
        fcols.push_back(M.fcol[j]);
        gcols.push_back(M.gcol[j]);
    }
    res.f = monomial_from_columns(M.rep, M.n, fcols);
    res.g = monomial_from_columns(M.rep, M.n, gcols);
    if (!is_invariant(res.f) || !is_invariant(res.g))
        throw decomposition_error("column block halves are not invariant (internal bug)");

    // One side's reduction step: the touched factors F1 against f times
    // the repackaging G1 of their remaining columns.
    auto side_step = [&](const PnMonomial& side, const std::vector<ColumnOrigin>& origin,
                         const std::vector<std::vector<int>>& allcols,
                         const PnVariable& matched) {
        std::vector<bool> in_block(allcols.size(), false);
        for (long long j : J) in_block[j] = true;
        std::vector<bool> touched(side.factors.size(), false);
        for (long long j : J) touched[origin[j].factor] = true;

        std::vector<size_t> touched_idx;
        for (size_t i = 0; i < side.factors.size(); ++i)
            if (touched[i]) touched_idx.push_back(i);

        PnMonomial F1 = factors_at(side, touched_idx);
        PnMonomial H1 = factors_not_at(side, touched_idx);

        std::vector<std::vector<int>> rest;
        for (size_t j = 0; j < allcols.size(); ++j)
            if (!in_block[j] && touched[origin[j].factor]) rest.push_back(allcols[j]);
        PnMonomial G1 =
            repackage_columns(side.rep, side.n, rest, d0, ctx.pipeline.basisA);

        if (F1.total_degree() > d0 * d0)
            throw decomposition_error("column reduction step degree " +
                                      std::to_string(F1.total_degree()) +
                                      " exceeds d0^2 = " + std::to_string(d0 * d0));
        return std::tuple<PnMonomial, PnMonomial, PnMonomial>(F1, G1, H1);
    };

    auto [F1, G1, H1] = side_step(b.lhs, M.forigin, M.fcol, res.f);
    auto [F2, G2, H2] = side_step(b.rhs, M.gorigin, M.gcol, res.g);

    Step s1;
    s1.kind = StepKind::column_reduce_F;
    s1.multiplier = H1;
    s1.sub_lhs = F1;
    s1.sub_rhs = pn_mul(G1, res.f);
    check_step_relation(s1, "column_reduce (F side)");
    if (!(s1.sub_lhs == s1.sub_rhs)) res.steps.push_back(std::move(s1));

    Step s2;
    s2.kind = StepKind::column_reduce_G;
    s2.multiplier = H2;
    s2.sub_lhs = pn_mul(G2, res.g);
    s2.sub_rhs = F2;
    check_step_relation(s2, "column_reduce (G side)");
    if (!(s2.sub_lhs == s2.sub_rhs)) res.steps.push_back(std::move(s2));
    res.next.lhs = pn_mul(pn_mul(H1, G1), res.f);
    res.next.rhs = pn_mul(pn_mul(H2, G2), res.g);
    if (flatten(res.next.lhs) != flatten(res.next.rhs))
        throw decomposition_error("column reduction left a non-relation (internal bug)");
    return res;
}

RowSwapResult row_swap_chain(const Binomial& b, const PnVariable& f, const PnVariable& g,
                             const PipelineContext& ctx) {
    const auto& bounds = ctx.pipeline.bounds;
    const auto rep = b.lhs.rep;
    const long long n = b.lhs.n;
    const long long d = f.deg;
    assert(d == g.deg);

    RowSwapResult res;
    auto one = [&](const PnVariable& v) {
        PnMonomial p = pn_one(rep, n);
        p.factors.push_back(v);
        return p;
    };

    if (f == g) {
        res.residual.lhs = pn_minus(b.lhs, one(f));
        res.residual.rhs = pn_minus(b.rhs, one(g));
        return res;
    }
    if (d > bounds.d0)
        throw decomposition_error("matched variables exceed degree d0");

    // Paired matrix of ||f|| and ||g||; rows need no rearrangement.
    WeightMatrix M;
    M.rows = n;
    M.cols = d;
    M.dim = 2 * rep->rank;
    M.data.resize(n * d * M.dim);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < d; ++j) {
            long long* e = M.at(i, j);
            const Weight& wf = rep->weights[f.at(i, j)];
            const Weight& wg = rep->weights[g.at(i, j)];
            std::copy(wf.begin(), wf.end(), e);
            std::copy(wg.begin(), wg.end(), e + rep->rank);
        }

    auto blocks = zero_sum_row_partition(M, bounds.n0, ctx.pipeline.basisB);

    PnMonomial cur = b.lhs;
    PnVariable m_prev = f;
    for (const auto& block : blocks) {
        std::vector<long long> I(block.begin(), block.end());
        PnVariable m_next = row_block_replace(m_prev, I, g);
        if (m_next == m_prev) continue;

        // Entries the swap pulls in at the block rows, per row.
        std::vector<std::vector<int>> needed(n);
        for (long long i : I)
            needed[i] = multiset_diff(row_multiset(g, i), row_multiset(m_prev, i));

        // Locate one instance of m_prev in the current side; the rest are
        // candidates for supplying the needed entries.
        size_t m_idx = SIZE_MAX;
        for (size_t i = 0; i < cur.factors.size(); ++i)
            if (cur.factors[i] == m_prev) {
                m_idx = i;
                break;
            }
        if (m_idx == SIZE_MAX)
            throw decomposition_error("chain variable missing from the relation "
                                      "(internal bug)");

        std::vector<size_t> taken;
        for (size_t i = 0; i < cur.factors.size(); ++i) {
            if (i == m_idx) continue;
            bool all_done = true;
            for (long long r : I)
                if (!needed[r].empty()) all_done = false;
            if (all_done) break;
            const auto& h = cur.factors[i];
            bool contributes = false;
            for (long long r : I) {
                if (needed[r].empty()) continue;
                auto hr = row_multiset(h, r);
                std::vector<int> common;
                std::set_intersection(hr.begin(), hr.end(), needed[r].begin(),
                                      needed[r].end(), std::back_inserter(common));
                if (!common.empty()) contributes = true;
            }
            if (!contributes) continue;
            taken.push_back(i);
            for (long long r : I)
                needed[r] = multiset_diff(needed[r], row_multiset(h, r));
        }
        for (long long r : I)
            if (!needed[r].empty())
                throw decomposition_error("needed entries unavailable in the relation "
                                          "(internal bug)");

        PnMonomial Fl = factors_at(cur, taken);
        std::vector<size_t> removed = taken;
        removed.push_back(m_idx);
        PnMonomial Hl = factors_not_at(cur, removed);

        // Displaced entries: everything of m_prev * Fl not kept by m_next,
        // row by row. Rectangular of width deg(Fl) and zero-sum.
        std::vector<std::vector<int>> disp_rows(n);
        for (long long i = 0; i < n; ++i) {
            std::vector<int> have = row_multiset(m_prev, i);
            for (size_t t : taken) {
                auto hr = row_multiset(cur.factors[t], i);
                have.insert(have.end(), hr.begin(), hr.end());
            }
            std::sort(have.begin(), have.end());
            disp_rows[i] = multiset_diff(have, row_multiset(m_next, i));
            if ((long long)disp_rows[i].size() != Fl.total_degree())
                throw decomposition_error("displaced matrix is ragged (internal bug)");
        }

        PnMonomial Gl = pn_one(rep, n);
        if (Fl.total_degree() > 0) {
            MultiMonomial disp;
            disp.rep = rep;
            disp.n = n;
            disp.deg = Fl.total_degree();
            disp.entries.reserve(n * disp.deg);
            for (long long i = 0; i < n; ++i)
                disp.entries.insert(disp.entries.end(), disp_rows[i].begin(),
                                    disp_rows[i].end());
            WeightMatrix wd = weight_matrix(disp);
            auto perms = steinitz_rearrange(wd, bounds.D, ctx.rearrange_node_cap);
            std::vector<std::vector<int>> cols(disp.deg, std::vector<int>(n));
            for (long long i = 0; i < n; ++i)
                for (long long j = 0; j < disp.deg; ++j)
                    cols[j][i] = disp.at(i, perms[i][j]);
            Gl = repackage_columns(rep, n, cols, bounds.d0, ctx.pipeline.basisA);
        }

        Step s;
        s.kind = StepKind::row_swap;
        s.multiplier = Hl;
        s.sub_lhs = pn_mul(Fl, m_prev);
        s.sub_rhs = pn_mul(Gl, m_next);
        check_step_relation(s, "row_swap_chain");
        if (s.sub_lhs.total_degree() > bounds.d1)
            throw decomposition_error("row swap step degree " +
                                      std::to_string(s.sub_lhs.total_degree()) +
                                      " exceeds the bound " + std::to_string(bounds.d1));
        if (!(s.sub_lhs == s.sub_rhs)) res.steps.push_back(s);

        cur = pn_mul(pn_mul(Hl, Gl), m_next);
        m_prev = m_next;
    }

    if (!(m_prev == g))
        throw decomposition_error("row swap chain did not reach the target variable "
                                  "(internal bug)");
    res.residual.lhs = pn_minus(cur, one(g));
    res.residual.rhs = pn_minus(b.rhs, one(g));
    if (flatten(res.residual.lhs) != flatten(res.residual.rhs))
        throw decomposition_error("row swap residual is not a relation (internal bug)");
    return res;
}

namespace {

void decompose_rec(const Binomial& cur, const PnMonomial& context,
                   const PipelineContext& ctx, std::vector<Step>& steps, long long depth,
                   long long depth_cap) {
    if (depth > depth_cap)
        throw decomposition_error("decomposition recursion exceeded the degree measure "
                                  "(internal bug)");

    auto [red, common] = reduce_common(cur);
    PnMonomial context2 = pn_mul(context, common);
    if (red.lhs == red.rhs) return; // both sides empty after reduction

    const long long bound = ctx.pipeline.bounds.d1;
    if (red.lhs.total_degree() <= bound) {
        Step s;
        s.kind = StepKind::recursion_base;
        s.multiplier = context2;
        s.sub_lhs = red.lhs;
        s.sub_rhs = red.rhs;
        steps.push_back(std::move(s));
        return;
    }

    ColumnReduceResult cr = column_reduce(red, ctx);
    for (Step s : cr.steps) {
        s.multiplier = pn_mul(context2, s.multiplier);
        steps.push_back(std::move(s));
    }
    RowSwapResult rs = row_swap_chain(cr.next, cr.f, cr.g, ctx);
    for (Step s : rs.steps) {
        s.multiplier = pn_mul(context2, s.multiplier);
        steps.push_back(std::move(s));
    }

    PnMonomial context3 = context2;
    context3.factors.insert(
        std::upper_bound(context3.factors.begin(), context3.factors.end(), cr.g), cr.g);
    decompose_rec(rs.residual, context3, ctx, steps, depth + 1, depth_cap);
}

} // namespace

Certificate decompose(const Binomial& b, const PipelineContext& ctx) {
    for (const auto* side : {&b.lhs, &b.rhs}) {
        for (const auto& fac : side->factors) {
            if (fac.deg < 1)
                throw config_error("factors must have positive degree");
            if (fac.deg > ctx.pipeline.bounds.d0)
                throw config_error("factor of degree " + std::to_string(fac.deg) +
                                   " is not a valid variable (d0 = " +
                                   std::to_string(ctx.pipeline.bounds.d0) + ")");
            if (!is_invariant(fac))
                throw not_a_relation_error("factor " + to_text(fac) +
                                           " is not invariant");
        }
    }
    if (b.lhs.n != b.rhs.n || !is_relation(b))
        throw not_a_relation_error("the two sides have different images");

    Certificate cert;
    cert.target = b;
    cert.bound = ctx.pipeline.bounds.d1;
    decompose_rec(b, pn_one(b.lhs.rep, b.lhs.n), ctx, cert.steps, 0,
                  b.lhs.total_degree() + 8);
    return cert;
}

bool verify_certificate(const Certificate& c, std::string* diagnostic) {
    auto fail = [&](const char* d) {
        if (diagnostic) *diagnostic = d;
        return false;
    };
    for (const auto& s : c.steps)
        if (s.sub_lhs.n != s.sub_rhs.n || flatten(s.sub_lhs) != flatten(s.sub_rhs))
            return fail("flatten-mismatch");
    for (const auto& s : c.steps)
        if (s.sub_lhs.total_degree() > c.bound) return fail("degree-bound-exceeded");

    std::map<PnMonomial, long long> formal;
    auto acc = [&](const PnMonomial& m, long long coeff) {
        auto it = formal.emplace(m, 0).first;
        it->second += coeff;
        if (it->second == 0) formal.erase(it);
    };
    for (const auto& s : c.steps) {
        acc(pn_mul(s.multiplier, s.sub_lhs), 1);
        acc(pn_mul(s.multiplier, s.sub_rhs), -1);
    }
    if (c.residual) {
        acc(c.residual->lhs, 1);
        acc(c.residual->rhs, -1);
    }
    acc(c.target.lhs, -1);
    acc(c.target.rhs, 1);
    if (!formal.empty()) return fail("telescoping-mismatch");

    if (c.residual) return fail("unresolved-residual");
    if (diagnostic) diagnostic->clear();
    return true;
}

namespace {

nlohmann::ordered_json monomial_list(const PnMonomial& m) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : m.factors) arr.push_back(to_text(f));
    return arr;
}

PnMonomial monomial_list_from_json(const std::shared_ptr<const TorusRep>& rep,
                                   long long n, const nlohmann::json& arr) {
    if (!arr.is_array()) throw config_error("certificate monomial list must be an array");
    PnMonomial out = pn_one(rep, n);
    for (const auto& t : arr) {
        if (!t.is_string()) throw config_error("certificate monomials must be strings");
        MultiMonomial f = parse_multi_monomial(rep, t.get<std::string>());
        if (f.n != n) throw config_error("certificate monomial with wrong row count");
        out.factors.push_back(std::move(f));
    }
    out.canonicalize();
    return out;
}

} // namespace

nlohmann::ordered_json certificate_to_json(const Certificate& c) {
    const auto& rep = *c.target.lhs.rep;
    nlohmann::ordered_json j;
    j["rep"] = {{"rank", rep.rank}, {"weights", rep.weights}, {"names", rep.names}};
    j["n"] = c.target.lhs.n;
    j["target"] = {{"lhs", monomial_list(c.target.lhs)},
                   {"rhs", monomial_list(c.target.rhs)}};
    j["bound"] = c.bound;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : c.steps) {
        nlohmann::ordered_json js;
        js["kind"] = step_kind_name(s.kind);
        js["multiplier"] = monomial_list(s.multiplier);
        js["sub_lhs"] = monomial_list(s.sub_lhs);
        js["sub_rhs"] = monomial_list(s.sub_rhs);
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    if (c.residual)
        j["residual"] = {{"lhs", monomial_list(c.residual->lhs)},
                         {"rhs", monomial_list(c.residual->rhs)}};
    else
        j["residual"] = nullptr;
    return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rep") || !j.contains("n") ||
        !j.contains("target") || !j.contains("bound") || !j.contains("steps"))
        throw config_error("certificate JSON is missing required fields");
    auto rep = std::make_shared<const TorusRep>(validate_rep(j["rep"]));
    if (!j["n"].is_number_integer()) throw config_error("certificate n must be integer");
    long long n = j["n"].get<long long>();
    if (n < 1) throw config_error("certificate n must be positive");

    Certificate c;
    c.target.lhs = monomial_list_from_json(rep, n, j["target"].at("lhs"));
    c.target.rhs = monomial_list_from_json(rep, n, j["target"].at("rhs"));
    if (!j["bound"].is_number_integer())
        throw config_error("certificate bound must be an integer");
    c.bound = j["bound"].get<long long>();
    for (const auto& js : j["steps"]) {
        Step s;
        s.kind = parse_step_kind(js.at("kind").get<std::string>());
        s.multiplier = monomial_list_from_json(rep, n, js.at("multiplier"));
        s.sub_lhs = monomial_list_from_json(rep, n, js.at("sub_lhs"));
        s.sub_rhs = monomial_list_from_json(rep, n, js.at("sub_rhs"));
        c.steps.push_back(std::move(s));
    }
    if (j.contains("residual") && !j["residual"].is_null()) {
        Binomial r;
        r.lhs = monomial_list_from_json(rep, n, j["residual"].at("lhs"));
        r.rhs = monomial_list_from_json(rep, n, j["residual"].at("rhs"));
        c.residual = std::move(r);
    }
    return c;
}

} // namespace torusrel
