#include "torusrel/repspec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace torusrel {

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c == '*' || c == '|' || c == '(' || c == ')' || c == '=' ||
            std::isspace((unsigned char)c))
            return false;
    }
    return true;
}

} // namespace

TorusRep make_rep(long long rank, std::vector<Weight> weights,
                  std::vector<std::string> names) {
    if (rank < 1) throw config_error("rank must be a positive integer");
    if (weights.empty()) throw config_error("weight list must be nonempty");
    for (size_t i = 0; i < weights.size(); ++i) {
        if ((long long)weights[i].size() != rank)
            throw config_error("weight " + std::to_string(i + 1) + " has length " +
                               std::to_string(weights[i].size()) + ", expected rank " +
                               std::to_string(rank));
    }
    if (names.empty()) {
        for (size_t i = 0; i < weights.size(); ++i)
            names.push_back("x" + std::to_string(i + 1));
    }
    if (names.size() != weights.size())
        throw config_error("names list must match the number of weights");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!valid_name(n))
            throw config_error("invalid variable name '" + n + "'");
        if (!seen.insert(n).second)
            throw config_error("duplicate variable name '" + n + "'");
    }
    TorusRep rep;
    rep.rank = rank;
    rep.weights = std::move(weights);
    rep.names = std::move(names);
    return rep;
}

TorusRep validate_rep(const nlohmann::json& raw) {
    if (!raw.is_object()) throw config_error("representation must be a JSON object");
    if (!raw.contains("rank") || !raw["rank"].is_number_integer())
        throw config_error("representation needs an integer \"rank\"");
    if (!raw.contains("weights") || !raw["weights"].is_array())
        throw config_error("representation needs a \"weights\" array");

    long long rank = raw["rank"].get<long long>();
    std::vector<Weight> weights;
    for (const auto& row : raw["weights"]) {
        if (!row.is_array())
            throw config_error("each weight must be an array of integers");
        Weight w;
        for (const auto& v : row) {
            if (!v.is_number_integer())
                throw config_error("weight entries must be exact integers");
            w.push_back(v.get<long long>());
        }
        weights.push_back(std::move(w));
    }

    std::vector<std::string> names;
    if (raw.contains("names")) {
        if (!raw["names"].is_array())
            throw config_error("\"names\" must be an array of strings");
        for (const auto& v : raw["names"]) {
            if (!v.is_string()) throw config_error("\"names\" must be an array of strings");
            names.push_back(v.get<std::string>());
        }
    }
    return make_rep(rank, std::move(weights), std::move(names));
}

TorusRep parse_rep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open representation file: " + path);
    nlohmann::json raw;
    try {
        raw = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error("bad JSON in " + path + ": " + e.what());
    }
    return validate_rep(raw);
}

std::vector<Weight> squared_alphabet(const TorusRep& rep) {
    std::set<Weight> out;
    for (const auto& u : rep.weights) {
        for (const auto& v : rep.weights) {
            Weight c = u;
            c.insert(c.end(), v.begin(), v.end());
            out.insert(std::move(c));
        }
    }
    return {out.begin(), out.end()};
}

long long max_weight_norm_sq(const TorusRep& rep) {
    long long best = 0;
    for (const auto& w : rep.weights) {
        long long s = 0;
        for (long long c : w) s += c * c;
        best = std::max(best, s);
    }
    return best;
}

Rational default_D(const TorusRep& rep) {
    long long nsq = max_weight_norm_sq(rep);
    long long c = (long long)std::ceil(std::sqrt((double)nsq));
    while (c * c < nsq) ++c;
    while (c >= 1 && (c - 1) * (c - 1) >= nsq) --c;
    return Rational(2 * rep.rank * c);
}

} // namespace torusrel
