// Backtracking solver: depth-first chronological search with propagation to
// mutual fixpoint at every node and seeded random variable/value selection.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gcl/domains.hpp"
#include "gcl/grammar.hpp"
#include "gcl/nfa.hpp"
#include "gcl/propagators.hpp"

namespace gcl {

struct Model {
    struct Constraint {
        enum class Kind { Grammar, WeightedGrammar, Regular };
        Kind kind = Kind::Grammar;
        std::vector<int> scope;  // variable indices; scopes may overlap
        Grammar grammar;         // Chomsky form, for the grammar kinds
        Nfa automaton;           // for Regular
        ZBound z;                // for WeightedGrammar
    };

    int num_vars = 0;
    std::vector<std::string> var_names;
    std::vector<std::set<std::string>> init_domains;
    std::vector<Constraint> constraints;
    // positions of variables shared between overlapping scopes (metadata)
    std::vector<std::pair<int, int>> shared_positions;

    void validate() const {
        if (static_cast<int>(init_domains.size()) != num_vars)
            throw Error("model: one initial domain per variable required");
        for (const auto& c : constraints) {
            if (c.scope.empty()) throw Error("model: empty constraint scope");
            for (int v : c.scope)
                if (v < 0 || v >= num_vars) throw Error("model: scope index out of range");
            switch (c.kind) {
                case Constraint::Kind::Grammar:
                case Constraint::Kind::WeightedGrammar:
                    if (!classify(c.grammar).is_cnf)
                        throw Error("model: grammar constraint payload must be in Chomsky form");
                    if (c.kind == Constraint::Kind::WeightedGrammar && !c.grammar.weighted())
                        throw Error("model: weighted constraint needs a weighted grammar");
                    break;
                case Constraint::Kind::Regular:
                    c.automaton.validate();
                    break;
            }
        }
    }
};

struct BenchResult {
    bool solved = false;
    std::optional<bool> satisfiable;
    long long choice_points = 0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::vector<std::string>> solution;
};

namespace detail {

inline bool propagate_constraint(const Model::Constraint& c,
                                 std::vector<std::set<std::string>>& domains, bool& changed) {
    VarDomains local;
    local.domains.reserve(c.scope.size());
    for (int v : c.scope) local.domains.push_back(domains[v]);

    std::optional<VarDomains> pruned;
    switch (c.kind) {
        case Model::Constraint::Kind::Grammar:
            pruned = cyk_propagate(c.grammar, local);
            break;
        case Model::Constraint::Kind::WeightedGrammar: {
            auto res = weighted_propagate(c.grammar, local, c.z);
            if (res) pruned = std::move(res->domains);
            break;
        }
        case Model::Constraint::Kind::Regular:
            pruned = regular_propagate(c.automaton, local);
            break;
    }
    if (!pruned) return false;
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
        if (pruned->domains[i].size() != domains[c.scope[i]].size()) changed = true;
        domains[c.scope[i]] = std::move(pruned->domains[i]);
    }
    return true;
}

} // namespace detail

// Round-robin over the constraints, in index order, until a full round
// changes nothing. Returns false on disentailment.
inline bool propagate_to_fixpoint(const Model& m, std::vector<std::set<std::string>>& domains) {
    for (const auto& d : domains)
        if (d.empty()) return false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : m.constraints)
            if (!detail::propagate_constraint(c, domains, changed)) return false;
    }
    return true;
}

// Depth-first chronological backtracking. Branches by assigning a uniformly
// random unassigned variable a uniformly random value from its domain; each
// assignment counts one choice point. Deterministic for a fixed seed; the
// timeout only decides whether the run finishes.
inline BenchResult solve(const Model& m, std::uint64_t seed, double timeout_ms) {
    m.validate();
    BenchResult result;
    result.seed = seed;
    std::mt19937_64 rng(seed);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    };

    // nullopt = timed out
    auto search = [&](auto&& self, std::vector<std::set<std::string>> domains)
        -> std::optional<bool> {
        while (true) {
            if (elapsed_ms() > timeout_ms) return std::nullopt;
            if (!propagate_to_fixpoint(m, domains)) return false;

            std::vector<int> unassigned;
            for (int v = 0; v < m.num_vars; ++v)
                if (domains[v].size() > 1) unassigned.push_back(v);
            if (unassigned.empty()) {
                std::vector<std::string> sol(m.num_vars);
                for (int v = 0; v < m.num_vars; ++v) sol[v] = *domains[v].begin();
                result.solution = std::move(sol);
                return true;
            }

            int var = unassigned[rng() % unassigned.size()];
            std::vector<std::string> vals(domains[var].begin(), domains[var].end());
            const std::string val = vals[rng() % vals.size()];
            ++result.choice_points;

            auto child = domains;
            child[var] = {val};
            auto sub = self(self, std::move(child));
            if (!sub || *sub) return sub;
            domains[var].erase(val);  // refuted; re-propagate and re-branch
        }
    };

    auto verdict = search(search, m.init_domains);
    result.wall_time_ms = elapsed_ms();
    result.solved = verdict.has_value();
    if (verdict) result.satisfiable = *verdict;
    return result;
}

} // namespace gcl
