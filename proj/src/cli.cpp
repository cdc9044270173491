#include "torusrel/cli.hpp"

#include <fstream>
#include <memory>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusrel/config.hpp"
#include "torusrel/decompose.hpp"
#include "torusrel/errors.hpp"
#include "torusrel/oracle.hpp"
#include "torusrel/rearrange.hpp"

namespace torusrel {

namespace {

RunConfig resolve_config(const std::string& config_path, const std::string& rep_path,
                         const std::string& d_text, const std::string& output_path) {
    RunConfig cfg;
    if (!config_path.empty()) {
        cfg = load_config_file(config_path);
        if (!rep_path.empty())
            cfg.rep = std::make_shared<const TorusRep>(parse_rep_file(rep_path));
    } else {
        if (rep_path.empty())
            throw config_error("a representation is required: pass --rep or --config");
        cfg = load_config(nlohmann::json{{"rep_file", rep_path}});
    }
    if (!d_text.empty()) {
        Rational d = parse_rational(d_text);
        if (!(Rational(0) < d)) throw config_error("'D' must be positive");
        cfg.D = d;
    }
    if (!output_path.empty()) cfg.output = output_path;
    return cfg;
}

BoundsPipeline pipeline_for(const RunConfig& cfg) {
    return compute_pipeline(*cfg.rep, cfg.effective_D(), cfg.caps.hilbert(),
                            cfg.caps.cone_values_cap, cfg.caps.pipeline_exact_nodes);
}

// Basis size when the stage completed, count of nonnegative circuits
// backing the certified ceiling otherwise.
long long stage_size(const HilbertBasis& basis, bool exact, const SumBound& sb) {
    return exact ? (long long)basis.elements.size() : sb.circuit_count;
}

// Random zero-sum weight matrices for the rearrangement stress test,
// assembled from cancelling variable pairs so that zero-sum holds by
// construction. The index arithmetic avoids std distributions, which
// are not stable across standard library implementations.
struct ZeroSumSampler {
    std::shared_ptr<const TorusRep> rep;
    std::vector<std::pair<int, int>> pairs;
    std::mt19937_64 rng;

    ZeroSumSampler(std::shared_ptr<const TorusRep> r, unsigned long long seed)
        : rep(std::move(r)), rng(seed) {
        const auto& ws = rep->weights;
        for (size_t i = 0; i < ws.size(); ++i)
            for (size_t j = 0; j < ws.size(); ++j) {
                Weight sum = ws[i];
                bool zero = true;
                for (size_t k = 0; k < sum.size(); ++k) {
                    sum[k] += ws[j][k];
                    if (sum[k] != 0) zero = false;
                }
                if (zero) pairs.emplace_back((int)i, (int)j);
            }
        if (pairs.empty())
            throw config_error("representation has no cancelling variable pairs; "
                               "cannot sample zero-sum matrices");
    }

    long long pick(long long bound) { return (long long)(rng() % (unsigned long long)bound); }

    WeightMatrix sample(long long n, long long d) {
        if ((n * d) % 2 != 0) ++d; // pairs come two entries at a time
        std::vector<int> entries;
        entries.reserve(n * d);
        for (long long k = 0; k < n * d / 2; ++k) {
            auto [a, b] = pairs[pick((long long)pairs.size())];
            entries.push_back(a);
            entries.push_back(b);
        }
        for (size_t i = entries.size(); i > 1; --i)
            std::swap(entries[i - 1], entries[pick((long long)i)]);

        WeightMatrix W;
        W.rows = n;
        W.cols = d;
        W.dim = rep->rank;
        W.data.resize(n * d * W.dim);
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < d; ++j) {
                const Weight& w = rep->weights[entries[i * d + j]];
                std::copy(w.begin(), w.end(), W.at(i, j));
            }
        return W;
    }
};

long long max_rearranged_col_norm_sq(const WeightMatrix& W,
                                     const std::vector<std::vector<long long>>& perms) {
    long long worst = 0;
    for (long long j = 0; j < W.cols; ++j) {
        Weight sum(W.dim, 0);
        for (long long i = 0; i < W.rows; ++i) {
            const long long* e = W.data.data() + (i * W.cols + perms[i][j]) * W.dim;
            for (long long k = 0; k < W.dim; ++k) sum[k] += e[k];
        }
        long long nsq = 0;
        for (long long k = 0; k < W.dim; ++k) nsq += sum[k] * sum[k];
        worst = std::max(worst, nsq);
    }
    return worst;
}

void emit(std::ostream& out, const nlohmann::ordered_json& doc) {
    out << doc.dump(2) << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bounded-degree relation certificates for torus-invariant subrings"};
    app.name("torusrel");
    app.require_subcommand(1);

    std::string config_path, rep_path, d_text, output_path;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--rep", rep_path, "representation JSON file (overrides config)");
    app.add_option("--D", d_text, "rearrangement bound, integer or p/q (overrides config)");
    app.add_option("--output", output_path, "certificate output path (overrides config)");

    int rc = 0;
    auto cfg = [&] { return resolve_config(config_path, rep_path, d_text, output_path); };

    auto* cmd_bounds = app.add_subcommand("bounds", "compute (d0, n0, d1) at the given D");
    cmd_bounds->callback([&] {
        RunConfig c = cfg();
        BoundsPipeline p = pipeline_for(c);
        nlohmann::ordered_json doc;
        doc["D"] = p.bounds.D.str();
        doc["d0"] = p.bounds.d0;
        doc["n0"] = p.bounds.n0;
        doc["d1"] = p.bounds.d1;
        doc["hilbert_A_size"] = stage_size(p.basisA, p.d0_exact, p.boundA);
        doc["hilbert_B_size"] = stage_size(p.basisB, p.n0_exact, p.boundB);
        emit(out, doc);
    });

    auto* cmd_gens = app.add_subcommand("generators", "list invariant variables");
    long long gens_n = 0, gens_dcap = 0;
    cmd_gens->add_option("--n", gens_n, "number of tensor rows")->required();
    cmd_gens->add_option("--dcap", gens_dcap, "degree cap")->required();
    cmd_gens->callback([&] {
        RunConfig c = cfg();
        if (gens_n < 1) throw config_error("--n must be positive");
        if (gens_dcap < 1) throw config_error("--dcap must be positive");
        auto vars = enumerate_pn_variables(c.rep, gens_n, gens_dcap,
                                           c.caps.enumeration_cap);
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& v : vars) doc.push_back(to_text(v));
        emit(out, doc);
    });

    auto* cmd_dec = app.add_subcommand("decompose", "certify one binomial relation");
    std::string binomial_text;
    long long dec_n = -1;
    cmd_dec->add_option("binomial", binomial_text,
                        "relation such as \"(x|y)*(y|x) = (x*y|x*y)\"")
        ->required();
    cmd_dec->add_option("--n", dec_n, "row count, needed only when a side is \"1\"");
    cmd_dec->callback([&] {
        RunConfig c = cfg();
        BoundsPipeline p = pipeline_for(c);
        Binomial b = parse_binomial(c.rep, binomial_text, dec_n);
        PipelineContext ctx{c.rep, std::move(p), c.caps.rearrange_nodes};
        Certificate cert = decompose(b, ctx);
        std::string diag;
        if (!verify_certificate(cert, &diag))
            throw decomposition_error("produced certificate failed verification: " +
                                      diag);

        long long max_deg = 0;
        for (const auto& s : cert.steps)
            max_deg = std::max(max_deg, s.sub_lhs.total_degree());
        nlohmann::ordered_json summary;
        summary["steps"] = (long long)cert.steps.size();
        summary["max_step_degree"] = max_deg;
        summary["bound"] = cert.bound;

        nlohmann::ordered_json doc = certificate_to_json(cert);
        if (c.output.empty()) {
            emit(out, doc);
            emit(err, summary);
        } else {
            std::ofstream f(c.output);
            if (!f) throw config_error("cannot write to '" + c.output + "'");
            f << doc.dump(2) << "\n";
            summary["certificate"] = c.output;
            emit(out, summary);
        }
    });

    auto* cmd_ver = app.add_subcommand("verify", "replay a certificate file");
    std::string cert_path;
    cmd_ver->add_option("certificate", cert_path, "certificate JSON file")->required();
    cmd_ver->callback([&] {
        std::ifstream f(cert_path);
        if (!f) throw config_error("cannot open certificate file '" + cert_path + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(f);
        } catch (const nlohmann::json::parse_error& e) {
            throw config_error("certificate file is not valid JSON: " +
                               std::string(e.what()));
        }
        Certificate cert = certificate_from_json(doc);
        std::string diag;
        bool ok = verify_certificate(cert, &diag);
        nlohmann::ordered_json res;
        res["ok"] = ok;
        if (!ok) res["diagnostic"] = diag;
        emit(out, res);
        if (!ok) rc = 5;
    });

    auto* cmd_re = app.add_subcommand("rearrange", "rearrangement stress test");
    bool re_check = false;
    long long re_count = 100, re_nmax = 5, re_dmax = 10;
    unsigned long long re_seed = 0;
    cmd_re->add_flag("--check", re_check, "sample random zero-sum matrices");
    cmd_re->add_option("--count", re_count, "number of matrices (default 100)");
    cmd_re->add_option("--n-max", re_nmax, "max rows (default 5)");
    cmd_re->add_option("--d-max", re_dmax, "max columns (default 10)");
    cmd_re->add_option("--seed", re_seed, "RNG seed (default 0)");
    cmd_re->callback([&] {
        if (!re_check) throw config_error("rearrange currently only supports --check");
        RunConfig c = cfg();
        if (re_count < 1 || re_nmax < 1 || re_dmax < 1)
            throw config_error("--count, --n-max, --d-max must be positive");
        Rational D = c.effective_D();
        ZeroSumSampler sampler(c.rep, re_seed);
        long long worst = 0;
        for (long long t = 0; t < re_count; ++t) {
            long long n = 1 + sampler.pick(re_nmax);
            long long d = 1 + sampler.pick(re_dmax);
            WeightMatrix W = sampler.sample(n, d);
            auto perms = steinitz_rearrange(W, D, c.caps.rearrange_nodes);
            worst = std::max(worst, max_rearranged_col_norm_sq(W, perms));
        }
        nlohmann::ordered_json doc;
        doc["count"] = re_count;
        doc["D"] = D.str();
        doc["max_col_norm_sq"] = worst;
        doc["ok"] = sq_le(worst, D);
        emit(out, doc);
    });

    auto* cmd_oc = app.add_subcommand("oracle-check",
                                      "compare the Markov degree against d1");
    long long oc_n = 0, oc_pn_cap = 2, oc_dcap = 2, oc_total_cap = -1;
    cmd_oc->add_option("--n", oc_n, "number of tensor rows")->required();
    cmd_oc->add_option("--pn-cap", oc_pn_cap, "max factors per product (default 2)");
    cmd_oc->add_option("--dcap", oc_dcap, "variable degree cap (default 2)");
    cmd_oc->add_option("--total-cap", oc_total_cap,
                       "total degree cap, -1 for none (default -1)");
    cmd_oc->callback([&] {
        RunConfig c = cfg();
        if (oc_n < 1) throw config_error("--n must be positive");
        BoundsPipeline p = pipeline_for(c);
        long long s = markov_degree_upper(c.rep, oc_n, oc_pn_cap, oc_dcap,
                                          c.caps.enumeration_cap, oc_total_cap);
        nlohmann::ordered_json doc;
        doc["n"] = oc_n;
        doc["caps"] = {oc_pn_cap, oc_dcap};
        doc["markov_degree"] = s;
        doc["bound_d1"] = p.bounds.d1;
        doc["ok"] = s <= p.bounds.d1;
        emit(out, doc);
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    }
    return rc;
}

} // namespace torusrel
