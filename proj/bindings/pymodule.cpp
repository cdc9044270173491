#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusrel/cones.hpp"
#include "torusrel/decompose.hpp"
#include "torusrel/errors.hpp"
#include "torusrel/monomials.hpp"
#include "torusrel/oracle.hpp"
#include "torusrel/rearrange.hpp"
#include "torusrel/repspec.hpp"

namespace py = pybind11;
using namespace torusrel;

namespace {

using RepPtr = std::shared_ptr<const TorusRep>;

py::object json_to_py(const nlohmann::ordered_json& j) {
    using value_t = nlohmann::ordered_json::value_t;
    switch (j.type()) {
        case value_t::null: return py::none();
        case value_t::boolean: return py::bool_(j.get<bool>());
        case value_t::number_integer: return py::int_(j.get<long long>());
        case value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case value_t::number_float: return py::float_(j.get<double>());
        case value_t::string: return py::str(j.get<std::string>());
        case value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

nlohmann::json py_to_json(const py::handle& h) {
    if (h.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
    if (py::isinstance<py::int_>(h)) return h.cast<long long>();
    if (py::isinstance<py::float_>(h)) return h.cast<double>();
    if (py::isinstance<py::str>(h)) return h.cast<std::string>();
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        auto arr = nlohmann::json::array();
        for (auto item : h) arr.push_back(py_to_json(item));
        return arr;
    }
    if (py::isinstance<py::dict>(h)) {
        auto obj = nlohmann::json::object();
        for (auto kv : h.cast<py::dict>())
            obj[kv.first.cast<std::string>()] = py_to_json(kv.second);
        return obj;
    }
    throw config_error("cannot convert this python value to JSON");
}

Rational parse_radius(const std::string& text, const RepPtr& rep) {
    if (text.empty()) return default_D(*rep);
    Rational d = parse_rational(text);
    if (!(Rational(0) < d)) throw config_error("'D' must be positive");
    return d;
}

long long stage_size(const HilbertBasis& basis, bool exact, const SumBound& sb) {
    return exact ? (long long)basis.elements.size() : sb.circuit_count;
}

WeightMatrix matrix_from_indices(const RepPtr& rep,
                                 const std::vector<std::vector<long long>>& rows) {
    if (rows.empty()) throw config_error("matrix needs at least one row");
    const long long d = (long long)rows[0].size();
    if (d == 0) throw config_error("matrix needs at least one column");
    WeightMatrix W;
    W.rows = (long long)rows.size();
    W.cols = d;
    W.dim = rep->rank;
    W.data.resize(W.rows * W.cols * W.dim);
    for (long long i = 0; i < W.rows; ++i) {
        if ((long long)rows[i].size() != d)
            throw config_error("matrix rows must have equal length");
        for (long long j = 0; j < d; ++j) {
            long long idx = rows[i][j];
            if (idx < 0 || idx >= rep->num_vars())
                throw config_error("variable index out of range");
            const Weight& w = rep->weights[idx];
            std::copy(w.begin(), w.end(), W.at(i, j));
        }
    }
    return W;
}

} // namespace

PYBIND11_MODULE(_torusrel, m) {
    m.doc() = "bounded-degree relation certificates for torus-invariant subrings";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<error>(m, "Error");
    py::register_exception<config_error>(m, "ConfigError", base);
    py::register_exception<cone_error>(m, "ConeError", base);
    py::register_exception<resource_cap_error>(m, "ResourceCapError", base);
    py::register_exception<not_a_relation_error>(m, "NotARelationError", base);
    py::register_exception<decomposition_error>(m, "DecompositionError", base);

    py::class_<TorusRep, std::shared_ptr<TorusRep>>(m, "Rep")
        .def_readonly("rank", &TorusRep::rank)
        .def_readonly("weights", &TorusRep::weights)
        .def_readonly("names", &TorusRep::names)
        .def("__repr__", [](const TorusRep& r) {
            return "<torusrel.Rep rank=" + std::to_string(r.rank) + " vars=" +
                   std::to_string(r.num_vars()) + ">";
        });

    m.def(
        "load_rep",
        [](const std::string& path) {
            return std::make_shared<TorusRep>(parse_rep_file(path));
        },
        py::arg("path"), "Load a representation from a JSON file.");

    m.def(
        "make_rep",
        [](long long rank, std::vector<Weight> weights, std::vector<std::string> names) {
            return std::make_shared<TorusRep>(
                torusrel::make_rep(rank, std::move(weights), std::move(names)));
        },
        py::arg("rank"), py::arg("weights"), py::arg("names") = std::vector<std::string>{},
        "Build a representation from rank and integer weight vectors.");

    m.def(
        "default_radius",
        [](std::shared_ptr<TorusRep> rep) { return default_D(*rep).str(); },
        py::arg("rep"), "Default rearrangement radius D as a 'p' or 'p/q' string.");

    m.def(
        "bounds",
        [](std::shared_ptr<TorusRep> rep, const std::string& D, long long hilbert_max_sum,
           long long hilbert_nodes, long long values_cap, long long exact_nodes) {
            RepPtr crep = rep;
            BoundsPipeline p =
                compute_pipeline(*crep, parse_radius(D, crep),
                                 {hilbert_max_sum, hilbert_nodes}, values_cap, exact_nodes);
            py::dict out;
            out["D"] = p.bounds.D.str();
            out["d0"] = p.bounds.d0;
            out["n0"] = p.bounds.n0;
            out["d1"] = p.bounds.d1;
            out["d0_exact"] = p.d0_exact;
            out["n0_exact"] = p.n0_exact;
            out["hilbert_A_size"] = stage_size(p.basisA, p.d0_exact, p.boundA);
            out["hilbert_B_size"] = stage_size(p.basisB, p.n0_exact, p.boundB);
            return out;
        },
        py::arg("rep"), py::arg("D") = "", py::arg("hilbert_max_sum") = 128,
        py::arg("hilbert_nodes") = 20000000, py::arg("values_cap") = 2000000,
        py::arg("exact_nodes") = 300000,
        "Compute the degree bound chain (d0, n0, d1) at radius D.");

    m.def(
        "generators",
        [](std::shared_ptr<TorusRep> rep, long long n, long long dcap, long long cap) {
            std::vector<std::string> out;
            for (const auto& v : enumerate_pn_variables(rep, n, dcap, cap))
                out.push_back(to_text(v));
            return out;
        },
        py::arg("rep"), py::arg("n"), py::arg("dcap"), py::arg("cap") = 500000,
        "List the invariant variables with n rows and degree <= dcap.");

    m.def(
        "decompose",
        [](std::shared_ptr<TorusRep> rep, const std::string& binomial, const std::string& D,
           long long n, long long hilbert_max_sum, long long hilbert_nodes,
           long long values_cap, long long exact_nodes, long long rearrange_nodes) {
            RepPtr crep = rep;
            BoundsPipeline p =
                compute_pipeline(*crep, parse_radius(D, crep),
                                 {hilbert_max_sum, hilbert_nodes}, values_cap, exact_nodes);
            Binomial b = parse_binomial(crep, binomial, n);
            PipelineContext ctx{crep, std::move(p), rearrange_nodes};
            Certificate cert = torusrel::decompose(b, ctx);
            return json_to_py(certificate_to_json(cert));
        },
        py::arg("rep"), py::arg("binomial"), py::arg("D") = "", py::arg("n") = -1,
        py::arg("hilbert_max_sum") = 128, py::arg("hilbert_nodes") = 20000000,
        py::arg("values_cap") = 2000000, py::arg("exact_nodes") = 300000,
        py::arg("rearrange_nodes") = 2000000,
        "Decompose a binomial relation into bounded-degree steps.");

    m.def(
        "verify",
        [](const py::handle& certificate) {
            Certificate c = certificate_from_json(py_to_json(certificate));
            std::string diag;
            bool ok = verify_certificate(c, &diag);
            return py::make_tuple(ok, diag);
        },
        py::arg("certificate"),
        "Replay a certificate; returns (ok, diagnostic).");

    m.def(
        "rearrange",
        [](std::shared_ptr<TorusRep> rep, const std::vector<std::vector<long long>>& rows,
           const std::string& D, long long node_cap) {
            RepPtr crep = rep;
            WeightMatrix W = matrix_from_indices(crep, rows);
            Rational radius = parse_radius(D, crep);
            auto perms = steinitz_rearrange(W, radius, node_cap);
            WeightMatrix R = apply_row_permutations(W, perms);
            long long worst = 0;
            for (long long j = 0; j < R.cols; ++j)
                worst = std::max(worst, R.col_sum_norm_sq(j));
            py::dict out;
            out["perms"] = perms;
            out["max_col_norm_sq"] = worst;
            out["D"] = radius.str();
            return out;
        },
        py::arg("rep"), py::arg("rows"), py::arg("D") = "", py::arg("node_cap") = 2000000,
        "Permute each row of a zero-sum index matrix so every column sum "
        "has norm <= D.");

    m.def(
        "fibers",
        [](std::shared_ptr<TorusRep> rep, long long n, long long pn_cap, long long dcap,
           long long cap, long long total_cap) {
            py::list out;
            for (const auto& f : enumerate_fibers(rep, n, pn_cap, dcap, cap, total_cap)) {
                py::dict d;
                d["value"] = to_text(f.value);
                py::list members;
                for (const auto& mem : f.members) members.append(to_text(mem));
                d["members"] = members;
                out.append(d);
            }
            return out;
        },
        py::arg("rep"), py::arg("n"), py::arg("pn_cap") = 2, py::arg("dcap") = 2,
        py::arg("cap") = 500000, py::arg("total_cap") = -1,
        "Group bounded products of invariant variables by their flattening.");

    m.def(
        "markov_degree",
        [](std::shared_ptr<TorusRep> rep, long long n, long long pn_cap, long long dcap,
           long long cap, long long total_cap) {
            return markov_degree_upper(rep, n, pn_cap, dcap, cap, total_cap);
        },
        py::arg("rep"), py::arg("n"), py::arg("pn_cap") = 2, py::arg("dcap") = 2,
        py::arg("cap") = 500000, py::arg("total_cap") = -1,
        "Largest bottleneck exchange degree over the sampled fibers.");
}
