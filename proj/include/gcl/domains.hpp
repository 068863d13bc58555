// Variable domains: the scope of a constraint, one finite value set per
// variable, in scope order.
//
// JSON file format:
//   {"vars": [{"name": "X1", "domain": ["a", "b"]}, ...]}
#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcl/grammar.hpp"

namespace gcl {

struct VarDomains {
    std::vector<std::string> names;                // may be empty when unnamed
    std::vector<std::set<std::string>> domains;

    VarDomains() = default;
    explicit VarDomains(std::vector<std::set<std::string>> d) : domains(std::move(d)) {}

    int size() const { return static_cast<int>(domains.size()); }

    bool any_empty() const {
        for (const auto& d : domains)
            if (d.empty()) return true;
        return false;
    }

    // Positionwise inclusion; both sides must have equal arity.
    bool contained_in(const VarDomains& other) const {
        if (domains.size() != other.domains.size()) return false;
        for (std::size_t i = 0; i < domains.size(); ++i)
            for (const auto& v : domains[i])
                if (!other.domains[i].count(v)) return false;
        return true;
    }

    friend bool operator==(const VarDomains& a, const VarDomains& b) {
        return a.domains == b.domains;
    }
};

inline VarDomains parse_domains_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("domain file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vars") || !j["vars"].is_array())
        throw Error("domain file: expected object with a \"vars\" array");
    VarDomains vd;
    for (const auto& var : j["vars"]) {
        if (!var.is_object() || !var.contains("domain") || !var["domain"].is_array())
            throw Error("domain file: each var needs a \"domain\" array");
        vd.names.push_back(var.value("name", ""));
        std::set<std::string> dom;
        for (const auto& v : var["domain"]) {
            if (!v.is_string()) throw Error("domain file: domain values must be strings");
            dom.insert(v.get<std::string>());
        }
        vd.domains.push_back(std::move(dom));
    }
    return vd;
}

inline std::string serialize_domains_json(const VarDomains& vd, int indent = 2) {
    nlohmann::json vars = nlohmann::json::array();
    for (std::size_t i = 0; i < vd.domains.size(); ++i) {
        nlohmann::json var;
        var["name"] = i < vd.names.size() && !vd.names[i].empty()
                          ? vd.names[i]
                          : "X" + std::to_string(i + 1);
        var["domain"] = std::vector<std::string>(vd.domains[i].begin(), vd.domains[i].end());
        vars.push_back(std::move(var));
    }
    nlohmann::json j;
    j["vars"] = std::move(vars);
    return j.dump(indent);
}

} // namespace gcl
