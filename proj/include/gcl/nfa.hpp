// Nondeterministic finite automata over string-labelled transitions.
// Labels are terminal names, shared with the grammars an automaton is
// intersected with.
//
// JSON file format:
//   {"states": 3, "initial": 0, "accepting": [2],
//    "transitions": [[0, "a", 1], [1, "b", 2]]}
#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "gcl/domains.hpp"
#include "gcl/grammar.hpp"

namespace gcl {

struct NfaTransition {
    int from = -1;
    std::string label;
    int to = -1;

    friend bool operator==(const NfaTransition&, const NfaTransition&) = default;
};

struct Nfa {
    int states = 0;
    int initial = 0;
    std::set<int> accepting;
    std::vector<NfaTransition> transitions;

    void validate() const {
        if (states <= 0) throw Error("nfa: needs at least one state");
        if (initial < 0 || initial >= states) throw Error("nfa: initial state out of range");
        for (int a : accepting)
            if (a < 0 || a >= states) throw Error("nfa: accepting state out of range");
        for (const auto& t : transitions) {
            if (t.from < 0 || t.from >= states || t.to < 0 || t.to >= states)
                throw Error("nfa: transition endpoint out of range");
            if (t.label.empty()) throw Error("nfa: empty transition label");
        }
    }

    // Subset simulation.
    bool accepts(std::span<const std::string> tokens) const {
        std::set<int> cur{initial};
        for (const auto& tok : tokens) {
            std::set<int> next;
            for (const auto& t : transitions)
                if (t.label == tok && cur.count(t.from)) next.insert(t.to);
            cur = std::move(next);
            if (cur.empty()) return false;
        }
        return std::any_of(cur.begin(), cur.end(),
                           [&](int q) { return accepting.count(q) > 0; });
    }

    bool accepts_chars(std::string_view s) const {
        std::vector<std::string> tokens;
        tokens.reserve(s.size());
        for (char c : s) tokens.emplace_back(1, c);
        return accepts(tokens);
    }
};

// Accepts the reversal of every string of `a`. When `a` has a single
// accepting state it becomes the new initial state; otherwise a fresh
// initial state is added that mirrors the outgoing edges of all of them.
inline Nfa reverse(const Nfa& a) {
    a.validate();
    Nfa r;
    if (a.accepting.size() == 1) {
        r.states = a.states;
        r.initial = *a.accepting.begin();
        r.accepting = {a.initial};
        for (const auto& t : a.transitions) r.transitions.push_back({t.to, t.label, t.from});
        return r;
    }
    r.states = a.states + 1;
    int fresh = a.states;
    r.initial = fresh;
    r.accepting = {a.initial};
    if (a.accepting.count(a.initial)) r.accepting.insert(fresh);
    for (const auto& t : a.transitions) {
        r.transitions.push_back({t.to, t.label, t.from});
        if (a.accepting.count(t.to)) r.transitions.push_back({fresh, t.label, t.from});
    }
    return r;
}

// Accepts L(first) sentinel L(second): the sentinel symbol is consumed by
// the bridge edges from first's accepting states to second's initial state.
inline Nfa concat_with_sentinel(const Nfa& first, const Nfa& second,
                                const std::string& sentinel) {
    first.validate();
    second.validate();
    Nfa out;
    out.states = first.states + second.states;
    out.initial = first.initial;
    for (const auto& t : first.transitions) out.transitions.push_back(t);
    for (int f : first.accepting)
        out.transitions.push_back({f, sentinel, first.states + second.initial});
    for (const auto& t : second.transitions)
        out.transitions.push_back({first.states + t.from, t.label, first.states + t.to});
    for (int f : second.accepting) out.accepting.insert(first.states + f);
    return out;
}

// Layered automaton of the Cartesian product language of the domains:
// states 0..n, edges (i, a, i+1) for each a in the (i+1)-th domain.
inline Nfa cartesian_nfa(const VarDomains& d) {
    Nfa a;
    a.states = d.size() + 1;
    a.initial = 0;
    a.accepting = {d.size()};
    for (int i = 0; i < d.size(); ++i)
        for (const auto& v : d.domains[i]) a.transitions.push_back({i, v, i + 1});
    return a;
}

// Accepts exactly the given token sequence.
inline Nfa chain_nfa(std::span<const std::string> tokens) {
    Nfa a;
    a.states = static_cast<int>(tokens.size()) + 1;
    a.initial = 0;
    a.accepting = {static_cast<int>(tokens.size())};
    for (std::size_t i = 0; i < tokens.size(); ++i)
        a.transitions.push_back({static_cast<int>(i), tokens[i], static_cast<int>(i) + 1});
    return a;
}

// Pair construction: accepts the intersection of the two languages.
inline Nfa nfa_product(const Nfa& a, const Nfa& b) {
    a.validate();
    b.validate();
    Nfa out;
    out.states = a.states * b.states;
    auto pair = [&](int qa, int qb) { return qa * b.states + qb; };
    out.initial = pair(a.initial, b.initial);
    for (int fa : a.accepting)
        for (int fb : b.accepting) out.accepting.insert(pair(fa, fb));
    for (const auto& ta : a.transitions)
        for (const auto& tb : b.transitions)
            if (ta.label == tb.label)
                out.transitions.push_back({pair(ta.from, tb.from), ta.label,
                                           pair(ta.to, tb.to)});
    return out;
}

// Single-state automaton accepting every string over the given alphabet.
inline Nfa universal_nfa(const std::set<std::string>& alphabet) {
    Nfa a;
    a.states = 1;
    a.initial = 0;
    a.accepting = {0};
    for (const auto& s : alphabet) a.transitions.push_back({0, s, 0});
    return a;
}

inline Nfa parse_nfa_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("automaton file: ") + e.what());
    }
    Nfa a;
    try {
        a.states = j.at("states").get<int>();
        a.initial = j.at("initial").get<int>();
        for (const auto& s : j.at("accepting")) a.accepting.insert(s.get<int>());
        for (const auto& t : j.at("transitions")) {
            if (!t.is_array() || t.size() != 3)
                throw Error("automaton file: transitions must be [from, \"label\", to]");
            a.transitions.push_back(
                {t[0].get<int>(), t[1].get<std::string>(), t[2].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("automaton file: ") + e.what());
    }
    a.validate();
    return a;
}

inline std::string serialize_nfa_json(const Nfa& a, int indent = 2) {
    nlohmann::json j;
    j["states"] = a.states;
    j["initial"] = a.initial;
    j["accepting"] = std::vector<int>(a.accepting.begin(), a.accepting.end());
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : a.transitions) ts.push_back({t.from, t.label, t.to});
    j["transitions"] = std::move(ts);
    return j.dump(indent);
}

} // namespace gcl
