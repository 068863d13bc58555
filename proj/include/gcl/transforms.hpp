// Grammar transformations: trimming, Chomsky and linear normal forms,
// grammar/automaton intersection, and the reductions between membership
// and intersection-emptiness instances.
#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcl/domains.hpp"
#include "gcl/grammar.hpp"
#include "gcl/nfa.hpp"

namespace gcl {

namespace detail {

// Rebuilds on top of a source grammar: terminals (and optionally all
// nonterminals) are interned first, in source order, so carried-over
// symbols keep their ids and fresh names cannot collide.
struct GrammarRewriter {
    GrammarBuilder builder;
    const Grammar& src;

    explicit GrammarRewriter(const Grammar& src_, bool intern_nonterminals = true) : src(src_) {
        for (int t = 0; t < src.terminal_count(); ++t) builder.terminal(src.terminal_name(t));
        if (intern_nonterminals)
            for (int n = 0; n < src.nonterminal_count(); ++n)
                builder.nonterminal(src.nonterminal_name(n));
        builder.weighted(src.weighted());
    }
};

} // namespace detail

inline std::vector<char> productive_nonterminals(const Grammar& g) {
    std::vector<char> productive(g.nonterminal_count(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (productive[p.lhs]) continue;
            bool all = true;
            for (Symbol s : p.rhs)
                if (s.is_nonterminal() && !productive[s.id]) {
                    all = false;
                    break;
                }
            if (all) {
                productive[p.lhs] = 1;
                changed = true;
            }
        }
    }
    return productive;
}

// True iff L(g) is empty, via the productive-symbol fixpoint.
inline bool is_empty(const Grammar& g) {
    if (g.start().id < 0) return true;
    return !productive_nonterminals(g)[g.start().id];
}

// Removes nonproductive and unreachable nonterminals and their productions.
// The terminal alphabet and the start symbol are always kept; the result has
// no productions iff L(g) is empty.
inline Grammar trim(const Grammar& g) {
    auto productive = productive_nonterminals(g);

    std::vector<char> keep(g.productions().size(), 0);
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
        bool all = true;
        for (Symbol s : g.productions()[i].rhs)
            if (s.is_nonterminal() && !productive[s.id]) {
                all = false;
                break;
            }
        keep[i] = all;
    }

    std::vector<char> reachable(g.nonterminal_count(), 0);
    if (g.start().id >= 0) reachable[g.start().id] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < g.productions().size(); ++i) {
            if (!keep[i] || !reachable[g.productions()[i].lhs]) continue;
            for (Symbol s : g.productions()[i].rhs)
                if (s.is_nonterminal() && !reachable[s.id]) {
                    reachable[s.id] = 1;
                    changed = true;
                }
        }
    }

    std::vector<char> survives(g.nonterminal_count(), 0);
    survives[g.start().id] = 1;
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
        if (!keep[i] || !reachable[g.productions()[i].lhs]) continue;
        survives[g.productions()[i].lhs] = 1;
        for (Symbol s : g.productions()[i].rhs)
            if (s.is_nonterminal()) survives[s.id] = 1;
    }

    detail::GrammarRewriter rw(g, /*intern_nonterminals=*/false);
    std::vector<Symbol> nt_map(g.nonterminal_count(), Symbol{SymbolKind::Nonterminal, -1});
    for (int n = 0; n < g.nonterminal_count(); ++n)
        if (survives[n]) nt_map[n] = rw.builder.nonterminal(g.nonterminal_name(n));

    for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const auto& p = g.productions()[i];
        if (!keep[i] || !reachable[p.lhs]) continue;
        std::vector<Symbol> rhs;
        rhs.reserve(p.rhs.size());
        for (Symbol s : p.rhs) rhs.push_back(s.is_terminal() ? s : nt_map[s.id]);
        rw.builder.production(nt_map[p.lhs], std::move(rhs), p.weight);
    }
    rw.builder.start(nt_map[g.start().id]);
    return rw.builder.build();
}

namespace detail {

// Composes chain productions A -> B away, keeping the cheapest chain per
// (lhs, rhs) pair. Operates on productions over g's symbol ids.
inline std::vector<Production> eliminate_unit_productions(int nonterminal_count,
                                                          const std::vector<Production>& prods) {
    struct Edge {
        int from, to;
        Weight w;
    };
    std::vector<Edge> edges;
    std::set<int> unit_sources;
    for (const auto& p : prods)
        if (p.rhs.size() == 1 && p.rhs[0].is_nonterminal()) {
            edges.push_back({p.lhs, p.rhs[0].id, p.weight});
            unit_sources.insert(p.lhs);
        }

    // min-weight unit-chain distances from each source of a unit edge
    std::map<int, std::vector<Weight>> dist;
    for (int a : unit_sources) {
        std::vector<Weight> d(nonterminal_count, kInfWeight);
        d[a] = 0;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& e : edges)
                if (d[e.from] < kInfWeight && d[e.from] + e.w < d[e.to]) {
                    d[e.to] = d[e.from] + e.w;
                    changed = true;
                }
        }
        dist.emplace(a, std::move(d));
    }

    std::vector<Production> out;
    std::map<std::pair<int, std::vector<Symbol>>, std::size_t> index;
    auto emit = [&](int lhs, const std::vector<Symbol>& rhs, Weight w) {
        auto key = std::make_pair(lhs, rhs);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(std::move(key), out.size());
            out.push_back({lhs, rhs, w});
        } else if (w < out[it->second].weight) {
            out[it->second].weight = w;
        }
    };

    for (const auto& p : prods) {
        if (p.rhs.size() == 1 && p.rhs[0].is_nonterminal()) continue;
        emit(p.lhs, p.rhs, p.weight);
    }
    for (const auto& [a, d] : dist)
        for (const auto& p : prods) {
            if (p.rhs.size() == 1 && p.rhs[0].is_nonterminal()) continue;
            if (p.lhs != a && d[p.lhs] < kInfWeight) emit(a, p.rhs, d[p.lhs] + p.weight);
        }
    return out;
}

} // namespace detail

// Chomsky form: every production becomes A -> BC or A -> a. Terminals in
// long right-hand sides are lifted through preterminals, the result is
// binarized, chain productions are composed away, and the grammar is
// trimmed. Minimum derivation weights are preserved: introduced tail
// productions carry weight 0 and chains add their weights.
inline Grammar to_cnf(const Grammar& g) {
    detail::GrammarRewriter rw(g);
    auto& b = rw.builder;

    std::vector<Symbol> preterminal(g.terminal_count(), Symbol{SymbolKind::Nonterminal, -1});
    std::vector<int> preterminal_order;
    auto lift = [&](Symbol t) {
        if (preterminal[t.id].id < 0) {
            preterminal[t.id] = b.fresh_nonterminal("Y_" + g.terminal_name(t.id));
            preterminal_order.push_back(t.id);
        }
        return preterminal[t.id];
    };

    std::vector<Production> prods;
    for (const auto& p : g.productions()) {
        std::vector<Symbol> rhs = p.rhs;
        if (rhs.size() >= 2)
            for (Symbol& s : rhs)
                if (s.is_terminal()) s = lift(s);

        if (rhs.size() <= 2) {
            prods.push_back({p.lhs, std::move(rhs), p.weight});
            continue;
        }
        // binarize: A -> B1 B2 ... Bk
        Symbol cur{SymbolKind::Nonterminal, p.lhs};
        Weight w = p.weight;
        for (std::size_t i = 0; i + 2 < rhs.size(); ++i) {
            Symbol next = b.fresh_nonterminal(g.nonterminal_name(p.lhs));
            prods.push_back({cur.id, {rhs[i], next}, w});
            cur = next;
            w = 0;
        }
        prods.push_back({cur.id, {rhs[rhs.size() - 2], rhs.back()}, w});
    }
    for (int tid : preterminal_order)
        prods.push_back({preterminal[tid].id, {Symbol{SymbolKind::Terminal, tid}}, 0});

    // at this point nonterminal ids in prods agree with the builder's
    int nt_count = 0;
    for (const auto& p : prods) {
        nt_count = std::max(nt_count, p.lhs + 1);
        for (Symbol s : p.rhs)
            if (s.is_nonterminal()) nt_count = std::max(nt_count, s.id + 1);
    }
    for (auto& p : detail::eliminate_unit_productions(nt_count, prods))
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(p.rhs), p.weight);
    b.start(Symbol{SymbolKind::Nonterminal, g.start().id});
    return trim(b.build());
}

// Linear split form: every production becomes A -> aB, A -> Ba or A -> a.
// Chain productions are composed away first; longer right-hand sides are
// peeled one terminal at a time, left side first.
inline Grammar to_linear_split_form(const Grammar& g) {
    if (!classify(g).is_linear) throw Error("to_linear_split_form: grammar is not linear");

    detail::GrammarRewriter rw(g);
    auto& b = rw.builder;

    auto base = detail::eliminate_unit_productions(g.nonterminal_count(), g.productions());

    for (const auto& p : base) {
        const auto& rhs = p.rhs;
        bool short_form =
            (rhs.size() == 1 && rhs[0].is_terminal()) ||
            (rhs.size() == 2 && (rhs[0].is_terminal() != rhs[1].is_terminal()));
        if (short_form) {
            b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, rhs, p.weight);
            continue;
        }

        int nt_pos = -1;
        for (std::size_t i = 0; i < rhs.size(); ++i)
            if (rhs[i].is_nonterminal()) nt_pos = static_cast<int>(i);
        const std::string& base_name = g.nonterminal_name(p.lhs);

        Symbol cur{SymbolKind::Nonterminal, p.lhs};
        Weight w = p.weight;
        if (nt_pos < 0) {
            // A -> a1 ... am, m >= 2
            for (std::size_t i = 0; i + 1 < rhs.size(); ++i) {
                Symbol next = b.fresh_nonterminal(base_name);
                b.production(cur, {rhs[i], next}, w);
                cur = next;
                w = 0;
            }
            b.production(cur, {rhs.back()}, w);
            continue;
        }
        // A -> u B v: peel u left to right, then v right to left
        for (int i = 0; i < nt_pos; ++i) {
            if (i == nt_pos - 1 && nt_pos == static_cast<int>(rhs.size()) - 1) {
                b.production(cur, {rhs[i], rhs[nt_pos]}, w);
                cur = Symbol{};
                break;
            }
            Symbol next = b.fresh_nonterminal(base_name);
            b.production(cur, {rhs[i], next}, w);
            cur = next;
            w = 0;
        }
        if (cur.id < 0) continue;
        for (int j = static_cast<int>(rhs.size()) - 1; j > nt_pos; --j) {
            if (j == nt_pos + 1) {
                b.production(cur, {rhs[nt_pos], rhs[j]}, w);
            } else {
                Symbol next = b.fresh_nonterminal(base_name);
                b.production(cur, {next, rhs[j]}, w);
                cur = next;
                w = 0;
            }
        }
    }
    b.start(Symbol{SymbolKind::Nonterminal, g.start().id});
    return trim(b.build());
}

// Near-Chomsky form for linear grammars: split form with terminals lifted
// through preterminals, so every production is A -> Y_a B, A -> B Y_a,
// Y_a -> a or A -> a. Each binary production fixes its own split point,
// which the propagator exploits.
inline Grammar to_linear_normal_form(const Grammar& g) {
    Grammar split = to_linear_split_form(g);

    detail::GrammarRewriter rw(split);
    auto& b = rw.builder;
    std::vector<Symbol> preterminal(split.terminal_count(),
                                    Symbol{SymbolKind::Nonterminal, -1});
    std::vector<int> preterminal_order;

    for (const auto& p : split.productions()) {
        if (p.rhs.size() == 1) {
            b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, p.rhs, p.weight);
            continue;
        }
        std::vector<Symbol> rhs = p.rhs;
        for (Symbol& s : rhs)
            if (s.is_terminal()) {
                if (preterminal[s.id].id < 0) {
                    preterminal[s.id] =
                        b.fresh_nonterminal("Y_" + split.terminal_name(s.id));
                    preterminal_order.push_back(s.id);
                }
                s = preterminal[s.id];
            }
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(rhs), p.weight);
    }
    for (int tid : preterminal_order)
        b.production(preterminal[tid], {Symbol{SymbolKind::Terminal, tid}}, 0);
    b.start(Symbol{SymbolKind::Nonterminal, split.start().id});
    return trim(b.build());
}

namespace detail {

inline std::string triple_name(const Grammar& g, int nt, int from, int to) {
    return g.nonterminal_name(nt) + "@" + std::to_string(from) + "," + std::to_string(to);
}

inline void check_shared_alphabet(const Grammar& g, const Nfa& r, const char* where) {
    for (const auto& t : r.transitions)
        if (!g.find_terminal(t.label))
            throw Error(std::string(where) + ": alphabet mismatch, automaton label '" +
                        t.label + "' is not a grammar terminal");
}

} // namespace detail

// Intersection of a Chomsky-form grammar with an automaton. Nonterminals of
// the result are triples (state, nonterminal, state); a fresh start symbol
// is wired to (initial, S, f) for each accepting f and the wiring chains are
// composed away so the output is again in Chomsky form. Weights carry over
// from the source productions; wiring weighs nothing. The result is trimmed,
// so it has no productions iff the intersection is empty.
inline Grammar triple_construction(const Grammar& g, const Nfa& r) {
    if (!classify(g).is_cnf) throw Error("triple_construction: grammar must be in Chomsky form");
    r.validate();
    detail::check_shared_alphabet(g, r, "triple_construction");

    GrammarBuilder b;
    for (int t = 0; t < g.terminal_count(); ++t) b.terminal(g.terminal_name(t));
    b.weighted(g.weighted());

    const int q = r.states;
    auto triple = [&](int nt, int from, int to) {
        return b.nonterminal(detail::triple_name(g, nt, from, to));
    };

    std::vector<Production> prods;
    for (const auto& p : g.productions()) {
        if (p.rhs.size() == 1) {
            for (const auto& t : r.transitions)
                if (g.find_terminal(t.label)->id == p.rhs[0].id)
                    prods.push_back({triple(p.lhs, t.from, t.to).id, {p.rhs[0]}, p.weight});
        } else {
            for (int f1 = 0; f1 < q; ++f1)
                for (int f2 = 0; f2 < q; ++f2)
                    for (int f3 = 0; f3 < q; ++f3)
                        prods.push_back({triple(p.lhs, f1, f3).id,
                                         {triple(p.rhs[0].id, f1, f2),
                                          triple(p.rhs[1].id, f2, f3)},
                                         p.weight});
        }
    }
    Symbol z = b.fresh_nonterminal("Z");
    for (int f : r.accepting)
        prods.push_back({z.id, {triple(g.start().id, r.initial, f)}, 0});

    int nt_count = 0;
    for (const auto& p : prods) {
        nt_count = std::max(nt_count, p.lhs + 1);
        for (Symbol s : p.rhs)
            if (s.is_nonterminal()) nt_count = std::max(nt_count, s.id + 1);
    }
    nt_count = std::max(nt_count, z.id + 1);
    for (auto& p : detail::eliminate_unit_productions(nt_count, prods))
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(p.rhs), p.weight);
    b.start(z);
    return trim(b.build());
}

// Intersection specialised to linear split-form grammars: nonterminals stay
// pairs of states around one grammar nonterminal, so the result is linear
// and only quadratic in the automaton size.
inline Grammar triple_construction_linear(const Grammar& g, const Nfa& r) {
    r.validate();
    detail::check_shared_alphabet(g, r, "triple_construction_linear");

    GrammarBuilder b;
    for (int t = 0; t < g.terminal_count(); ++t) b.terminal(g.terminal_name(t));
    b.weighted(g.weighted());

    const int q = r.states;
    auto triple = [&](int nt, int from, int to) {
        return b.nonterminal(detail::triple_name(g, nt, from, to));
    };
    auto label_id = [&](const std::string& label) { return g.find_terminal(label)->id; };

    std::vector<Production> prods;
    for (const auto& p : g.productions()) {
        const auto& rhs = p.rhs;
        if (rhs.size() == 1 && rhs[0].is_terminal()) {
            for (const auto& t : r.transitions)
                if (label_id(t.label) == rhs[0].id)
                    prods.push_back({triple(p.lhs, t.from, t.to).id, {rhs[0]}, p.weight});
        } else if (rhs.size() == 2 && rhs[0].is_terminal() && rhs[1].is_nonterminal()) {
            for (const auto& t : r.transitions)
                if (label_id(t.label) == rhs[0].id)
                    for (int f = 0; f < q; ++f)
                        prods.push_back({triple(p.lhs, t.from, f).id,
                                         {rhs[0], triple(rhs[1].id, t.to, f)},
                                         p.weight});
        } else if (rhs.size() == 2 && rhs[0].is_nonterminal() && rhs[1].is_terminal()) {
            for (const auto& t : r.transitions)
                if (label_id(t.label) == rhs[1].id)
                    for (int f = 0; f < q; ++f)
                        prods.push_back({triple(p.lhs, f, t.to).id,
                                         {triple(rhs[0].id, f, t.from), rhs[1]},
                                         p.weight});
        } else {
            throw Error("triple_construction_linear: grammar not in linear split form");
        }
    }
    Symbol z = b.fresh_nonterminal("Z");
    for (int f : r.accepting)
        prods.push_back({z.id, {triple(g.start().id, r.initial, f)}, 0});

    int nt_count = z.id + 1;
    for (const auto& p : prods) {
        nt_count = std::max(nt_count, p.lhs + 1);
        for (Symbol s : p.rhs)
            if (s.is_nonterminal()) nt_count = std::max(nt_count, s.id + 1);
    }
    for (auto& p : detail::eliminate_unit_productions(nt_count, prods))
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(p.rhs), p.weight);
    b.start(z);
    return trim(b.build());
}

// Membership-to-intersection reduction for Greibach-form grammars. The j-th
// production A -> a alpha is renamed to consume the paired terminal (a,j);
// the domains admit at position i exactly the pairs whose first component is
// s_i. The reduced instance has a support iff s is in L(g), and the result
// grammar is simple.
inline std::pair<Grammar, VarDomains> simple_grammar_reduction(
    const Grammar& g, std::span<const std::string> s) {
    if (!classify(g).is_greibach)
        throw Error("simple_grammar_reduction: grammar must be in Greibach form");
    if (s.empty()) throw Error("simple_grammar_reduction: empty string");
    for (const auto& tok : s)
        if (!g.find_terminal(tok))
            throw Error("simple_grammar_reduction: string symbol '" + tok +
                        "' is not a grammar terminal");

    GrammarBuilder b;
    for (int n = 0; n < g.nonterminal_count(); ++n) b.nonterminal(g.nonterminal_name(n));
    b.weighted(g.weighted());

    std::vector<std::string> pair_names(g.productions().size());
    for (std::size_t j = 0; j < g.productions().size(); ++j) {
        const auto& p = g.productions()[j];
        pair_names[j] =
            "(" + g.terminal_name(p.rhs[0].id) + "," + std::to_string(j + 1) + ")";
        std::vector<Symbol> rhs;
        rhs.push_back(b.terminal(pair_names[j]));
        for (std::size_t i = 1; i < p.rhs.size(); ++i)
            rhs.push_back(Symbol{SymbolKind::Nonterminal, p.rhs[i].id});
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(rhs), p.weight);
    }
    b.start(Symbol{SymbolKind::Nonterminal, g.start().id});
    Grammar reduced = b.build();

    VarDomains d;
    for (std::size_t i = 0; i < s.size(); ++i) {
        d.names.push_back("X" + std::to_string(i + 1));
        std::set<std::string> dom;
        for (std::size_t j = 0; j < g.productions().size(); ++j)
            if (g.terminal_name(g.productions()[j].rhs[0].id) == s[i])
                dom.insert(pair_names[j]);
        d.domains.push_back(std::move(dom));
    }
    return {std::move(reduced), std::move(d)};
}

// Intersection-to-membership reduction. Terminals are indexed 1..|T|; each
// position of the domain sequence becomes a |T|-wide bitmap block in the
// output string, and the grammar is rewritten over {0,1} so that a block
// derived in place of terminal j must carry a 1 at index j. Every terminal
// occurrence is rewritten, so right-hand sides may contain terminals beyond
// the leading one.
inline std::pair<Grammar, std::string> bitmap_reduction(const Grammar& g, const VarDomains& d) {
    for (const auto& p : g.productions())
        if (!p.rhs.front().is_terminal())
            throw Error("bitmap_reduction: every production must start with a terminal");

    const int tcount = g.terminal_count();
    GrammarBuilder b;
    Symbol zero = b.terminal("0");
    Symbol one = b.terminal("1");
    for (int n = 0; n < g.nonterminal_count(); ++n) b.nonterminal(g.nonterminal_name(n));
    b.weighted(g.weighted());

    Symbol bit = b.fresh_nonterminal("B");
    b.production(bit, {zero});
    b.production(bit, {one});
    std::vector<Symbol> block(tcount);
    for (int j = 0; j < tcount; ++j) {
        block[j] = b.fresh_nonterminal("T" + std::to_string(j + 1));
        std::vector<Symbol> rhs;
        for (int k = 0; k < tcount; ++k) rhs.push_back(k == j ? one : bit);
        b.production(block[j], std::move(rhs));
    }
    for (const auto& p : g.productions()) {
        std::vector<Symbol> rhs;
        for (Symbol s : p.rhs)
            rhs.push_back(s.is_terminal() ? block[s.id]
                                          : Symbol{SymbolKind::Nonterminal, s.id});
        b.production(Symbol{SymbolKind::Nonterminal, p.lhs}, std::move(rhs), p.weight);
    }
    b.start(Symbol{SymbolKind::Nonterminal, g.start().id});

    std::string s;
    s.reserve(static_cast<std::size_t>(d.size()) * tcount);
    for (int i = 0; i < d.size(); ++i)
        for (int j = 0; j < tcount; ++j)
            s += d.domains[i].count(g.terminal_name(j)) ? '1' : '0';
    return {b.build(), std::move(s)};
}

} // namespace gcl
