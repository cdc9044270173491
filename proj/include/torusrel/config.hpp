#ifndef TORUSREL_CONFIG_HPP
#define TORUSREL_CONFIG_HPP

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "torusrel/cones.hpp"
#include "torusrel/rational.hpp"
#include "torusrel/repspec.hpp"

namespace torusrel {

// Resource limits for one run. TORUSREL_RESOURCE_CAP in the environment
// overrides enumeration_cap.
struct Caps {
    long long hilbert_max_sum = 128;
    long long hilbert_nodes = 20000000;
    long long enumeration_cap = 500000;
    long long cone_values_cap = 2000000;
    long long rearrange_nodes = 2000000;
    long long pipeline_exact_nodes = 300000; // completion attempt per bound stage

    HilbertCaps hilbert() const { return {hilbert_max_sum, hilbert_nodes}; }
};

struct RunConfig {
    std::shared_ptr<const TorusRep> rep;
    std::optional<Rational> D; // default_D(rep) when absent
    Caps caps;
    std::string output; // path for certificate files, empty = stdout only

    Rational effective_D() const { return D ? *D : default_D(*rep); }
};

// Builds a RunConfig from a config JSON object:
//   {"rep": {...} | "rep_file": path, "D": "p/q"?, "caps": {...}?, "output": path?}
// Caps keys match the Caps fields. Environment override applied last.
RunConfig load_config(const nlohmann::json& doc, const std::string& base_dir = "");
RunConfig load_config_file(const std::string& path);

} // namespace torusrel

#endif
