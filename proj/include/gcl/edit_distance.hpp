// Encoding of the EditDistance constraint as a weighted linear grammar over
// sequences laid out as  X_1..X_n # Y_n..Y_1  (second string reversed around
// a sentinel), and its conjunction with Regular constraints on each side.
#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gcl/domains.hpp"
#include "gcl/grammar.hpp"
#include "gcl/nfa.hpp"
#include "gcl/propagators.hpp"
#include "gcl/transforms.hpp"

namespace gcl {

// Matching symbols wrap for free, replacements and one-sided consumption
// cost 1, and the sentinel closes the string: the minimum derivation weight
// of x # reverse(y) is exactly the unit-cost edit distance of x and y.
// Insertion/deletion rules are emitted for the union of the two alphabets so
// this holds for asymmetric alphabets too.
inline Grammar build_edit_grammar(const std::set<std::string>& x_alphabet,
                                  const std::set<std::string>& y_alphabet,
                                  const std::string& sentinel = "#") {
    if (x_alphabet.count(sentinel) || y_alphabet.count(sentinel))
        throw Error("build_edit_grammar: sentinel collides with the alphabet");

    std::set<std::string> all;
    all.insert(x_alphabet.begin(), x_alphabet.end());
    all.insert(y_alphabet.begin(), y_alphabet.end());

    GrammarBuilder b;
    b.weighted(true);
    Symbol s = b.nonterminal("S");
    for (const auto& d : all) {
        Symbol t = b.terminal(d);
        b.production(s, {t, s, t}, 0);
    }
    for (const auto& d1 : x_alphabet)
        for (const auto& d2 : y_alphabet)
            if (d1 != d2) b.production(s, {b.terminal(d1), s, b.terminal(d2)}, 1);
    for (const auto& d : all) {
        Symbol t = b.terminal(d);
        b.production(s, {t, s}, 1);
        b.production(s, {s, t}, 1);
    }
    b.production(s, {b.terminal(sentinel)}, 0);
    b.start(s);
    return b.build();
}

struct EditInstance {
    int n = 0;                        // both sequences have this length
    std::set<std::string> x_alphabet;
    std::set<std::string> y_alphabet;
    Weight max_distance = 0;
    std::string sentinel = "#";
};

// Lays out the 2n+1 constraint scope: X domains, the sentinel, then the Y
// domains in reverse, with Z bounded by [0, max_distance].
inline std::pair<VarDomains, ZBound> encode_edit_instance(const EditInstance& inst,
                                                          const VarDomains& dx,
                                                          const VarDomains& dy) {
    if (dx.size() != inst.n || dy.size() != inst.n)
        throw Error("encode_edit_instance: domain sequences must both have length n");

    VarDomains z;
    for (int i = 0; i < inst.n; ++i) {
        z.names.push_back("Z" + std::to_string(i + 1));
        z.domains.push_back(dx.domains[i]);
    }
    z.names.push_back("Z" + std::to_string(inst.n + 1));
    z.domains.push_back({inst.sentinel});
    for (int i = inst.n - 1; i >= 0; --i) {
        z.names.push_back("Z" + std::to_string(2 * inst.n + 1 - i));
        z.domains.push_back(dy.domains[i]);
    }
    return {std::move(z), ZBound{0, inst.max_distance}};
}

// Grammar for the conjunction of the edit-distance encoding with
// Regular(X, r1) and Regular(Y, r2): intersects the linear grammar with the
// automaton for L(r1) sentinel L(r2)^R. The result is again weighted linear,
// trimmed, with minimum derivation weights preserved on every string.
inline Grammar build_conjunction_grammar(const Nfa& r1, const Nfa& r2, const Grammar& g_ed,
                                         const std::string& sentinel = "#") {
    Nfa combined = concat_with_sentinel(r1, reverse(r2), sentinel);
    return triple_construction_linear(to_linear_split_form(g_ed), combined);
}

} // namespace gcl
