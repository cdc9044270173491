#include "torusrel/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "torusrel/errors.hpp"

namespace torusrel {

namespace {

long long positive_int_field(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number_integer())
        throw config_error("caps entry '" + key + "' must be an integer");
    long long v = j.get<long long>();
    if (v < 1) throw config_error("caps entry '" + key + "' must be positive");
    return v;
}

void apply_env_overrides(Caps& caps) {
    const char* raw = std::getenv("TORUSREL_RESOURCE_CAP");
    if (!raw || !*raw) return;
    char* end = nullptr;
    long long v = std::strtoll(raw, &end, 10);
    if (*end != '\0' || v < 1)
        throw config_error("TORUSREL_RESOURCE_CAP must be a positive integer, got '" +
                           std::string(raw) + "'");
    caps.enumeration_cap = v;
}

} // namespace

RunConfig load_config(const nlohmann::json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw config_error("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "rep" && key != "rep_file" && key != "D" && key != "caps" &&
            key != "output")
            throw config_error("unknown config key '" + key + "'");
    }

    RunConfig cfg;
    const bool has_rep = doc.contains("rep");
    const bool has_rep_file = doc.contains("rep_file");
    if (has_rep == has_rep_file)
        throw config_error("config needs exactly one of 'rep' and 'rep_file'");
    if (has_rep) {
        cfg.rep = std::make_shared<const TorusRep>(validate_rep(doc["rep"]));
    } else {
        if (!doc["rep_file"].is_string())
            throw config_error("'rep_file' must be a path string");
        std::filesystem::path p = doc["rep_file"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        cfg.rep = std::make_shared<const TorusRep>(parse_rep_file(p.string()));
    }

    if (doc.contains("D")) {
        const auto& d = doc["D"];
        if (d.is_number_integer()) {
            long long v = d.get<long long>();
            cfg.D = Rational(v);
        } else if (d.is_string()) {
            cfg.D = parse_rational(d.get<std::string>());
        } else {
            throw config_error("'D' must be an integer or a 'p/q' string");
        }
        if (!(Rational(0) < *cfg.D)) throw config_error("'D' must be positive");
    }

    if (doc.contains("caps")) {
        const auto& c = doc["caps"];
        if (!c.is_object()) throw config_error("'caps' must be an object");
        for (const auto& [key, value] : c.items()) {
            if (key == "hilbert_max_sum")
                cfg.caps.hilbert_max_sum = positive_int_field(value, key);
            else if (key == "hilbert_nodes")
                cfg.caps.hilbert_nodes = positive_int_field(value, key);
            else if (key == "enumeration_cap")
                cfg.caps.enumeration_cap = positive_int_field(value, key);
            else if (key == "cone_values_cap")
                cfg.caps.cone_values_cap = positive_int_field(value, key);
            else if (key == "rearrange_nodes")
                cfg.caps.rearrange_nodes = positive_int_field(value, key);
            else if (key == "pipeline_exact_nodes")
                cfg.caps.pipeline_exact_nodes = positive_int_field(value, key);
            else
                throw config_error("unknown caps entry '" + key + "'");
        }
    }

    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw config_error("'output' must be a string");
        cfg.output = doc["output"].get<std::string>();
    }

    apply_env_overrides(cfg.caps);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_config(doc, std::filesystem::path(path).parent_path().string());
}

} // namespace torusrel
