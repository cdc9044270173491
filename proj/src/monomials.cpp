#include "torusrel/monomials.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace torusrel {

void MultiMonomial::canonicalize() {
    for (long long i = 0; i < n; ++i)
        std::sort(entries.begin() + i * deg, entries.begin() + (i + 1) * deg);
}

bool MultiMonomial::is_canonical() const {
    for (long long i = 0; i < n; ++i)
        if (!std::is_sorted(entries.begin() + i * deg, entries.begin() + (i + 1) * deg))
            return false;
    return true;
}

Weight WeightMatrix::col_sum(long long j) const {
    Weight s(dim, 0);
    for (long long i = 0; i < rows; ++i) {
        const long long* e = at(i, j);
        for (long long c = 0; c < dim; ++c) s[c] += e[c];
    }
    return s;
}

Weight WeightMatrix::row_sum(long long i) const {
    Weight s(dim, 0);
    for (long long j = 0; j < cols; ++j) {
        const long long* e = at(i, j);
        for (long long c = 0; c < dim; ++c) s[c] += e[c];
    }
    return s;
}

long long WeightMatrix::col_sum_norm_sq(long long j) const {
    Weight s = col_sum(j);
    long long nsq = 0;
    for (long long c : s) nsq += c * c;
    return nsq;
}

bool WeightMatrix::rows_zero_sum(const std::vector<long long>& rows_idx) const {
    Weight s(dim, 0);
    for (long long i : rows_idx) {
        assert(i >= 0 && i < rows);
        for (long long j = 0; j < cols; ++j) {
            const long long* e = at(i, j);
            for (long long c = 0; c < dim; ++c) s[c] += e[c];
        }
    }
    return std::all_of(s.begin(), s.end(), [](long long v) { return v == 0; });
}

bool WeightMatrix::cols_zero_sum(const std::vector<long long>& cols_idx) const {
    Weight s(dim, 0);
    for (long long j : cols_idx) {
        assert(j >= 0 && j < cols);
        for (long long i = 0; i < rows; ++i) {
            const long long* e = at(i, j);
            for (long long c = 0; c < dim; ++c) s[c] += e[c];
        }
    }
    return std::all_of(s.begin(), s.end(), [](long long v) { return v == 0; });
}

long long PnMonomial::total_degree() const {
    long long s = 0;
    for (const auto& f : factors) s += f.deg;
    return s;
}

void PnMonomial::canonicalize() { std::sort(factors.begin(), factors.end()); }

WeightMatrix weight_matrix(const MultiMonomial& f) {
    assert(f.rep);
    WeightMatrix w;
    w.rows = f.n;
    w.cols = f.deg;
    w.dim = f.rep->rank;
    w.data.resize(w.rows * w.cols * w.dim);
    for (long long i = 0; i < f.n; ++i)
        for (long long j = 0; j < f.deg; ++j) {
            const Weight& wv = f.rep->weights[f.at(i, j)];
            std::copy(wv.begin(), wv.end(), w.at(i, j));
        }
    return w;
}

bool is_invariant(const MultiMonomial& f) {
    assert(f.rep);
    Weight s(f.rep->rank, 0);
    for (int v : f.entries) {
        const Weight& w = f.rep->weights[v];
        for (long long c = 0; c < f.rep->rank; ++c) s[c] += w[c];
    }
    return std::all_of(s.begin(), s.end(), [](long long v) { return v == 0; });
}

MultiMonomial flatten(const PnMonomial& F) {
    MultiMonomial out;
    out.rep = F.rep;
    out.n = F.n;
    out.deg = F.total_degree();
    out.entries.resize(out.n * out.deg);
    for (long long i = 0; i < out.n; ++i) {
        long long pos = 0;
        for (const auto& f : F.factors) {
            assert(f.n == F.n);
            for (long long j = 0; j < f.deg; ++j)
                out.at(i, pos + j) = f.at(i, j);
            pos += f.deg;
        }
    }
    out.canonicalize();
    return out;
}

bool is_relation(const Binomial& b) {
    if (b.lhs.n != b.rhs.n) return false;
    return flatten(b.lhs) == flatten(b.rhs);
}

PnVariable row_block_replace(const PnVariable& m, const std::vector<long long>& I,
                             const PnVariable& b) {
    if (m.deg != b.deg || m.n != b.n)
        throw decomposition_error("row block replacement needs equal shapes");
    for (long long i : I)
        if (i < 0 || i >= m.n)
            throw decomposition_error("row index out of range in block replacement");
    WeightMatrix wm = weight_matrix(m), wb = weight_matrix(b);
    if (!wm.rows_zero_sum(I) || !wb.rows_zero_sum(I))
        throw decomposition_error("row block replacement needs zero-sum blocks");
    PnVariable out = m;
    for (long long i : I)
        for (long long j = 0; j < m.deg; ++j)
            out.at(i, j) = b.at(i, j);
    out.canonicalize();
    assert(is_invariant(out));
    return out;
}

namespace {

// Branch and bound over row-major positions of the n x d entry matrix.
// Rows stay sorted (canonical form), and a branch dies as soon as one
// weight coordinate of the running sum cannot be cancelled by the
// remaining positions.
void enumerate_fixed_degree(const std::shared_ptr<const TorusRep>& rep, long long n,
                            long long d, const Weight& coord_maxabs, long long cap,
                            std::vector<PnVariable>& out) {
    const long long k = rep->num_vars();
    const long long r = rep->rank;
    const long long total = n * d;
    MultiMonomial cur;
    cur.rep = rep;
    cur.n = n;
    cur.deg = d;
    cur.entries.assign(total, 0);
    Weight sum(r, 0);

    auto rec = [&](auto&& self, long long pos) -> void {
        if (pos == total) {
            if (std::all_of(sum.begin(), sum.end(), [](long long v) { return v == 0; })) {
                if ((long long)out.size() >= cap)
                    throw resource_cap_error("variable enumeration exceeded cap of " +
                                             std::to_string(cap));
                out.push_back(cur);
            }
            return;
        }
        long long rem = total - pos - 1;
        int lo = (pos % d == 0) ? 0 : cur.entries[pos - 1];
        for (int v = lo; v < k; ++v) {
            const Weight& w = rep->weights[v];
            bool ok = true;
            for (long long c = 0; c < r && ok; ++c) {
                long long s = sum[c] + w[c];
                if (std::llabs(s) > rem * coord_maxabs[c]) ok = false;
            }
            if (!ok) continue;
            cur.entries[pos] = v;
            for (long long c = 0; c < r; ++c) sum[c] += w[c];
            self(self, pos + 1);
            for (long long c = 0; c < r; ++c) sum[c] -= w[c];
        }
    };
    rec(rec, 0);
}

} // namespace

std::vector<PnVariable> enumerate_pn_variables(const std::shared_ptr<const TorusRep>& rep,
                                               long long n, long long dcap,
                                               long long cap) {
    if (n < 1 || dcap < 1) throw config_error("enumeration needs n >= 1 and dcap >= 1");
    Weight coord_maxabs(rep->rank, 0);
    for (const auto& w : rep->weights)
        for (long long c = 0; c < rep->rank; ++c)
            coord_maxabs[c] = std::max(coord_maxabs[c], std::llabs(w[c]));
    std::vector<PnVariable> out;
    for (long long d = 1; d <= dcap; ++d)
        enumerate_fixed_degree(rep, n, d, coord_maxabs, cap, out);
    return out;
}

PnMonomial pn_mul(const PnMonomial& a, const PnMonomial& b) {
    assert(a.n == b.n);
    PnMonomial out = a;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    out.canonicalize();
    return out;
}

PnMonomial pn_mul(const PnMonomial& a, const PnVariable& f) {
    assert(f.n == a.n);
    PnMonomial out = a;
    out.factors.insert(std::upper_bound(out.factors.begin(), out.factors.end(), f), f);
    return out;
}

PnMonomial pn_minus(const PnMonomial& a, const PnMonomial& b) {
    PnMonomial out;
    out.rep = a.rep;
    out.n = a.n;
    size_t ia = 0, ib = 0;
    while (ia < a.factors.size()) {
        if (ib < b.factors.size() && a.factors[ia] == b.factors[ib]) {
            ++ia;
            ++ib;
        } else if (ib < b.factors.size() && b.factors[ib] < a.factors[ia]) {
            throw decomposition_error("multiset difference: subtrahend not contained");
        } else {
            out.factors.push_back(a.factors[ia++]);
        }
    }
    if (ib != b.factors.size())
        throw decomposition_error("multiset difference: subtrahend not contained");
    return out;
}

PnMonomial pn_one(const std::shared_ptr<const TorusRep>& rep, long long n) {
    PnMonomial out;
    out.rep = rep;
    out.n = n;
    return out;
}

std::pair<Binomial, PnMonomial> reduce_common(const Binomial& b) {
    PnMonomial common = pn_one(b.lhs.rep, b.lhs.n);
    Binomial red;
    red.lhs.rep = b.lhs.rep;
    red.lhs.n = b.lhs.n;
    red.rhs.rep = b.rhs.rep;
    red.rhs.n = b.rhs.n;
    size_t il = 0, ir = 0;
    const auto& L = b.lhs.factors;
    const auto& R = b.rhs.factors;
    while (il < L.size() && ir < R.size()) {
        if (L[il] == R[ir]) {
            common.factors.push_back(L[il]);
            ++il;
            ++ir;
        } else if (L[il] < R[ir]) {
            red.lhs.factors.push_back(L[il++]);
        } else {
            red.rhs.factors.push_back(R[ir++]);
        }
    }
    red.lhs.factors.insert(red.lhs.factors.end(), L.begin() + il, L.end());
    red.rhs.factors.insert(red.rhs.factors.end(), R.begin() + ir, R.end());
    return {red, common};
}

std::string to_text(const MultiMonomial& f) {
    if (f.deg == 0) return "1";
    std::ostringstream os;
    for (long long i = 0; i < f.n; ++i) {
        if (i) os << '|';
        for (long long j = 0; j < f.deg; ++j) {
            if (j) os << '*';
            os << f.rep->names[f.at(i, j)];
        }
    }
    return os.str();
}

std::string to_text(const PnMonomial& F) {
    if (F.factors.empty()) return "1";
    std::ostringstream os;
    for (const auto& f : F.factors) os << '(' << to_text(f) << ')';
    return os.str();
}

std::string to_text(const Binomial& b) {
    return to_text(b.lhs) + " = " + to_text(b.rhs);
}

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

MultiMonomial parse_multi_monomial(const std::shared_ptr<const TorusRep>& rep,
                                   const std::string& text) {
    std::map<std::string, int> index;
    for (size_t i = 0; i < rep->names.size(); ++i) index[rep->names[i]] = (int)i;

    std::vector<std::vector<int>> rows;
    for (const auto& row_text : split(text, '|')) {
        std::vector<int> row;
        for (const auto& var_text : split(row_text, '*')) {
            std::string name = strip(var_text);
            auto it = index.find(name);
            if (it == index.end())
                throw config_error("unknown variable '" + name + "' in monomial '" +
                                   text + "'");
            row.push_back(it->second);
        }
        rows.push_back(std::move(row));
    }
    MultiMonomial out;
    out.rep = rep;
    out.n = (long long)rows.size();
    out.deg = (long long)rows[0].size();
    for (const auto& row : rows)
        if ((long long)row.size() != out.deg)
            throw config_error("ragged monomial '" + text + "': all tensor factors " +
                               "must have the same degree");
    out.entries.reserve(out.n * out.deg);
    for (const auto& row : rows)
        out.entries.insert(out.entries.end(), row.begin(), row.end());
    out.canonicalize();
    return out;
}

PnMonomial parse_pn_monomial(const std::shared_ptr<const TorusRep>& rep,
                             const std::string& text, long long n_hint) {
    std::string s = strip(text);
    PnMonomial out;
    out.rep = rep;
    out.n = n_hint;
    if (s == "1") {
        if (n_hint < 1)
            throw config_error("empty product '1' needs the number of tensor factors "
                               "from context");
        return out;
    }
    size_t pos = 0;
    while (pos < s.size()) {
        if (std::isspace((unsigned char)s[pos])) {
            ++pos;
            continue;
        }
        if (s[pos] != '(')
            throw config_error("expected '(' at position " + std::to_string(pos) +
                               " of '" + text + "'");
        size_t close = s.find(')', pos);
        if (close == std::string::npos)
            throw config_error("unbalanced parentheses in '" + text + "'");
        MultiMonomial f = parse_multi_monomial(rep, s.substr(pos + 1, close - pos - 1));
        if (out.n < 1)
            out.n = f.n;
        else if (f.n != out.n)
            throw config_error("factors with different numbers of tensor factors in '" +
                               text + "'");
        out.factors.push_back(std::move(f));
        pos = close + 1;
    }
    if (out.factors.empty())
        throw config_error("cannot parse monomial '" + text + "'");
    out.canonicalize();
    return out;
}

Binomial parse_binomial(const std::shared_ptr<const TorusRep>& rep,
                        const std::string& text, long long n_hint) {
    auto parts = split(text, '=');
    if (parts.size() != 2)
        throw config_error("binomial must have the form 'lhs = rhs', got '" + text + "'");
    std::string lt = strip(parts[0]), rt = strip(parts[1]);
    Binomial b;
    // Parse the side that determines n first so '1' on the other side
    // picks it up.
    if (lt == "1" && rt != "1") {
        b.rhs = parse_pn_monomial(rep, rt, n_hint);
        b.lhs = parse_pn_monomial(rep, lt, b.rhs.n);
    } else {
        b.lhs = parse_pn_monomial(rep, lt, lt == "1" && n_hint < 1 ? 1 : n_hint);
        b.rhs = parse_pn_monomial(rep, rt, b.lhs.n);
    }
    return b;
}

} // namespace torusrel
