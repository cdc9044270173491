#ifndef TORUSREL_REPSPEC_HPP
#define TORUSREL_REPSPEC_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "torusrel/rational.hpp"

namespace torusrel {

using Weight = std::vector<long long>;

// A diagonal torus representation: rank r and k integer weight vectors,
// one per variable. Variable identity is the positional index; two
// variables may carry the same weight.
struct TorusRep {
    long long rank = 0;
    std::vector<Weight> weights;
    std::vector<std::string> names;

    long long num_vars() const { return (long long)weights.size(); }
};

// Builds a TorusRep from rank/weights/names, assigning default names
// x1..xk when none are given. Throws config_error on any shape problem.
TorusRep make_rep(long long rank, std::vector<Weight> weights,
                  std::vector<std::string> names = {});

// Parses {"rank": r, "weights": [[..],..], "names": [..]?}. Exact
// integers only; floats are rejected even when integral-valued.
TorusRep validate_rep(const nlohmann::json& raw);

TorusRep parse_rep_file(const std::string& path);

// All concatenations (w_i || w_j) in Z^{2r}, deduplicated by value and
// sorted lexicographically.
std::vector<Weight> squared_alphabet(const TorusRep& rep);

// Largest squared Euclidean norm over the weights of rep.
long long max_weight_norm_sq(const TorusRep& rep);

// Default rearrangement radius: 2 * rank * ceil(max Euclidean weight norm).
Rational default_D(const TorusRep& rep);

} // namespace torusrel

#endif
