// Domain-consistency propagators: CYK-based filtering for Chomsky-form
// grammars (with a fixed-split fast path for linear normal forms), the
// weighted min-derivation variant, layered-automaton filtering for Regular,
// and brute-force reference propagators.
#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcl/domains.hpp"
#include "gcl/grammar.hpp"
#include "gcl/nfa.hpp"

namespace gcl {

// Bounds on the derivation-weight variable Z. lb > ub means disentailed.
struct ZBound {
    Weight lb = 0;
    Weight ub = kInfWeight;

    friend bool operator==(const ZBound&, const ZBound&) = default;
};

struct CykOptions {
    // When a side of a binary production can only derive single terminals,
    // use the one split point it admits instead of scanning all of them.
    // Off forces the general split loop; results are identical either way.
    bool fixed_splits = true;
};

namespace detail {

// allowed[i][t]: may terminal t appear at position i
inline std::vector<std::vector<char>> terminal_masks(const Grammar& g, const VarDomains& d) {
    std::vector<std::vector<char>> allowed(d.size(), std::vector<char>(g.terminal_count(), 0));
    for (int i = 0; i < d.size(); ++i)
        for (const auto& v : d.domains[i])
            if (auto t = g.find_terminal(v)) allowed[i][t->id] = 1;
    return allowed;
}

inline std::vector<std::vector<char>> token_masks(const Grammar& g,
                                                  std::span<const std::string> tokens) {
    std::vector<std::vector<char>> allowed(tokens.size(),
                                           std::vector<char>(g.terminal_count(), 0));
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (auto t = g.find_terminal(tokens[i])) allowed[i][t->id] = 1;
    return allowed;
}

inline std::vector<std::string> chars_to_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    tokens.reserve(s.size());
    for (char c : s) tokens.emplace_back(1, c);
    return tokens;
}

} // namespace detail

// The CYK dynamic-programming table over cells (i, l): position i (1-based)
// and substring length l. In unweighted mode it tracks derivable (bottom-up)
// and reachable (top-down) flags per nonterminal; in weighted mode the
// minimum inside and outside derivation weights, where a cell is derivable
// iff its inside weight is finite.
class CykTable {
public:
    CykTable(const Grammar& g, const std::vector<std::vector<char>>& allowed, bool weighted,
             CykOptions opts = {})
        : g_(g),
          n_(static_cast<int>(allowed.size())),
          nts_(g.nonterminal_count()),
          weighted_(weighted) {
        if (!classify(g).is_cnf) throw Error("cyk: grammar must be in Chomsky form");
        if (weighted_ && !g.weighted()) throw Error("cyk: weighted mode needs a weighted grammar");

        prepare_productions(opts);
        if (weighted_) {
            inside_.assign(cells(), kInfWeight);
            outside_.assign(cells(), kInfWeight);
        } else {
            derivable_.assign(cells(), 0);
            reachable_.assign(cells(), 0);
        }
        bottom_up(allowed);
    }

    int length() const { return n_; }

    bool derivable(int nt, int i, int l) const {
        return weighted_ ? inside_[at(i - 1, l, nt)] < kInfWeight
                         : derivable_[at(i - 1, l, nt)] != 0;
    }
    bool reachable(int nt, int i, int l) const {
        return weighted_ ? outside_[at(i - 1, l, nt)] < kInfWeight
                         : reachable_[at(i - 1, l, nt)] != 0;
    }
    Weight inside(int nt, int i, int l) const { return inside_[at(i - 1, l, nt)]; }
    Weight outside(int nt, int i, int l) const { return outside_[at(i - 1, l, nt)]; }

    bool root_derivable() const { return derivable(g_.start().id, 1, n_); }
    Weight root_inside() const { return inside_[at(0, n_, g_.start().id)]; }

    // Top-down pass; call once after construction.
    void top_down() {
        if (weighted_)
            outside_[at(0, n_, g_.start().id)] = 0;
        else
            reachable_[at(0, n_, g_.start().id)] = 1;

        for (int l = n_; l >= 2; --l) {
            for (int i = 0; i + l <= n_; ++i) {
                for (const auto& bp : binary_) {
                    if (weighted_) {
                        Weight out = outside_[at(i, l, bp.lhs)];
                        if (out >= kInfWeight) continue;
                        auto [k_lo, k_hi] = split_range(bp, l);
                        for (int k = k_lo; k <= k_hi; ++k) {
                            Weight in_b = inside_[at(i, k, bp.left)];
                            Weight in_c = inside_[at(i + k, l - k, bp.right)];
                            if (in_b >= kInfWeight || in_c >= kInfWeight) continue;
                            Weight& out_b = outside_[at(i, k, bp.left)];
                            out_b = std::min(out_b, out + bp.weight + in_c);
                            Weight& out_c = outside_[at(i + k, l - k, bp.right)];
                            out_c = std::min(out_c, out + bp.weight + in_b);
                        }
                    } else {
                        if (!reachable_[at(i, l, bp.lhs)]) continue;
                        auto [k_lo, k_hi] = split_range(bp, l);
                        for (int k = k_lo; k <= k_hi; ++k) {
                            if (!derivable_[at(i, k, bp.left)] ||
                                !derivable_[at(i + k, l - k, bp.right)])
                                continue;
                            reachable_[at(i, k, bp.left)] = 1;
                            reachable_[at(i + k, l - k, bp.right)] = 1;
                        }
                    }
                }
            }
        }
    }

    // Cheapest complete derivation that uses terminal t at position i
    // (1-based); infinite when no reachable preterminal produces t there.
    Weight best_through_terminal(int t, int i) const {
        Weight best = kInfWeight;
        for (const auto& tp : term_)
            if (tp.terminal == t) {
                Weight out = outside_[at(i - 1, 1, tp.lhs)];
                if (out < kInfWeight) best = std::min(best, out + tp.weight);
            }
        return best;
    }

    // Unweighted analogue: is some reachable preterminal producing t at i.
    bool supported_terminal(int t, int i) const {
        for (const auto& tp : term_)
            if (tp.terminal == t && reachable_[at(i - 1, 1, tp.lhs)]) return true;
        return false;
    }

private:
    struct TerminalProd {
        int lhs, terminal;
        Weight weight;
    };
    struct BinaryProd {
        int lhs, left, right;
        Weight weight;
        bool left_fixed, right_fixed;
    };

    std::size_t cells() const { return static_cast<std::size_t>(n_) * n_ * nts_; }
    std::size_t at(int i, int l, int nt) const {
        return (static_cast<std::size_t>(l - 1) * n_ + i) * nts_ + nt;
    }

    void prepare_productions(CykOptions opts) {
        // a nonterminal all of whose productions are single terminals can
        // only ever cover one position
        std::vector<char> preterminal(nts_, 1);
        std::vector<char> has_prod(nts_, 0);
        for (const auto& p : g_.productions()) {
            has_prod[p.lhs] = 1;
            if (!(p.rhs.size() == 1 && p.rhs[0].is_terminal())) preterminal[p.lhs] = 0;
        }
        for (int a = 0; a < nts_; ++a)
            if (!has_prod[a]) preterminal[a] = 0;

        for (const auto& p : g_.productions()) {
            if (p.rhs.size() == 1) {
                term_.push_back({p.lhs, p.rhs[0].id, p.weight});
            } else {
                bool lf = opts.fixed_splits && preterminal[p.rhs[0].id];
                bool rf = opts.fixed_splits && preterminal[p.rhs[1].id];
                binary_.push_back({p.lhs, p.rhs[0].id, p.rhs[1].id, p.weight, lf, rf});
            }
        }
    }

    std::pair<int, int> split_range(const BinaryProd& bp, int l) const {
        if (bp.left_fixed) return {1, 1};
        if (bp.right_fixed) return {l - 1, l - 1};
        return {1, l - 1};
    }

    void bottom_up(const std::vector<std::vector<char>>& allowed) {
        for (int i = 0; i < n_; ++i)
            for (const auto& tp : term_) {
                if (!allowed[i][tp.terminal]) continue;
                if (weighted_) {
                    Weight& w = inside_[at(i, 1, tp.lhs)];
                    w = std::min(w, tp.weight);
                } else {
                    derivable_[at(i, 1, tp.lhs)] = 1;
                }
            }
        for (int l = 2; l <= n_; ++l) {
            for (int i = 0; i + l <= n_; ++i) {
                for (const auto& bp : binary_) {
                    auto [k_lo, k_hi] = split_range(bp, l);
                    if (weighted_) {
                        Weight& cell = inside_[at(i, l, bp.lhs)];
                        for (int k = k_lo; k <= k_hi; ++k) {
                            Weight in_b = inside_[at(i, k, bp.left)];
                            Weight in_c = inside_[at(i + k, l - k, bp.right)];
                            if (in_b >= kInfWeight || in_c >= kInfWeight) continue;
                            cell = std::min(cell, bp.weight + in_b + in_c);
                        }
                    } else {
                        char& cell = derivable_[at(i, l, bp.lhs)];
                        if (cell) continue;
                        for (int k = k_lo; k <= k_hi; ++k)
                            if (derivable_[at(i, k, bp.left)] &&
                                derivable_[at(i + k, l - k, bp.right)]) {
                                cell = 1;
                                break;
                            }
                    }
                }
            }
        }
    }

    const Grammar& g_;
    int n_, nts_;
    bool weighted_;
    std::vector<TerminalProd> term_;
    std::vector<BinaryProd> binary_;
    std::vector<char> derivable_, reachable_;
    std::vector<Weight> inside_, outside_;
};

// Membership test; foreign tokens make it false, not an error.
inline bool cyk_parse(const Grammar& g, std::span<const std::string> tokens) {
    if (tokens.empty()) return false;
    CykTable table(g, detail::token_masks(g, tokens), /*weighted=*/false);
    return table.root_derivable();
}

inline bool cyk_parse(const Grammar& g, std::string_view s) {
    auto tokens = detail::chars_to_tokens(s);
    return cyk_parse(g, std::span<const std::string>(tokens));
}

// Minimum derivation weight of the token string, or nullopt when it is not
// in the language.
inline std::optional<Weight> min_weight_parse(const Grammar& g,
                                              std::span<const std::string> tokens) {
    if (!g.weighted()) throw Error("min_weight_parse: grammar is not weighted");
    if (tokens.empty()) return std::nullopt;
    CykTable table(g, detail::token_masks(g, tokens), /*weighted=*/true);
    Weight w = table.root_inside();
    if (w >= kInfWeight) return std::nullopt;
    return w;
}

inline std::optional<Weight> min_weight_parse(const Grammar& g, std::string_view s) {
    auto tokens = detail::chars_to_tokens(s);
    return min_weight_parse(g, std::span<const std::string>(tokens));
}

// Domain-consistency filtering for Grammar(g) on the given domains: a value
// survives at position i iff some string of L(g) within the domains uses it
// at i. Returns nullopt on disentailment; never grows a domain.
inline std::optional<VarDomains> cyk_propagate(const Grammar& g, const VarDomains& d,
                                               CykOptions opts = {}) {
    if (d.size() == 0) throw Error("cyk_propagate: empty scope");
    if (d.any_empty()) return std::nullopt;

    CykTable table(g, detail::terminal_masks(g, d), /*weighted=*/false, opts);
    if (!table.root_derivable()) return std::nullopt;
    table.top_down();

    VarDomains out;
    out.names = d.names;
    out.domains.resize(d.size());
    for (int i = 0; i < d.size(); ++i)
        for (const auto& v : d.domains[i]) {
            auto t = g.find_terminal(v);
            if (t && table.supported_terminal(t->id, i + 1)) out.domains[i].insert(v);
        }
    return out;
}

struct WeightedPropagateResult {
    VarDomains domains;
    ZBound z;

    friend bool operator==(const WeightedPropagateResult&,
                           const WeightedPropagateResult&) = default;
};

// Weighted variant: a value survives iff some string within the domains uses
// it and has minimum derivation weight at most ub(Z). Tightens lb(Z) to the
// cheapest supported string; never loosens it.
inline std::optional<WeightedPropagateResult> weighted_propagate(const Grammar& g,
                                                                 const VarDomains& d, ZBound z,
                                                                 CykOptions opts = {}) {
    if (d.size() == 0) throw Error("weighted_propagate: empty scope");
    if (z.lb > z.ub) return std::nullopt;
    if (d.any_empty()) return std::nullopt;

    CykTable table(g, detail::terminal_masks(g, d), /*weighted=*/true, opts);
    Weight best = table.root_inside();
    if (best > z.ub) return std::nullopt;
    table.top_down();

    WeightedPropagateResult res;
    res.domains.names = d.names;
    res.domains.domains.resize(d.size());
    for (int i = 0; i < d.size(); ++i)
        for (const auto& v : d.domains[i]) {
            auto t = g.find_terminal(v);
            if (t && table.best_through_terminal(t->id, i + 1) <= z.ub)
                res.domains.domains[i].insert(v);
        }
    res.z = ZBound{std::max(z.lb, best), z.ub};
    return res;
}

// Domain-consistency filtering for Regular(r): forward-reachable and
// backward-coreachable state sets per layer; a value survives iff one of its
// transitions lies on an accepting path through that layer.
inline std::optional<VarDomains> regular_propagate(const Nfa& r, const VarDomains& d) {
    r.validate();
    const int n = d.size();
    if (n == 0) {
        if (r.accepting.count(r.initial)) return d;
        return std::nullopt;
    }
    if (d.any_empty()) return std::nullopt;

    std::vector<std::vector<char>> fwd(n + 1, std::vector<char>(r.states, 0));
    std::vector<std::vector<char>> bwd(n + 1, std::vector<char>(r.states, 0));
    fwd[0][r.initial] = 1;
    for (int i = 0; i < n; ++i)
        for (const auto& t : r.transitions)
            if (fwd[i][t.from] && d.domains[i].count(t.label)) fwd[i + 1][t.to] = 1;
    for (int q : r.accepting) bwd[n][q] = 1;
    for (int i = n - 1; i >= 0; --i)
        for (const auto& t : r.transitions)
            if (bwd[i + 1][t.to] && d.domains[i].count(t.label)) bwd[i][t.from] = 1;

    VarDomains out;
    out.names = d.names;
    out.domains.resize(n);
    for (int i = 0; i < n; ++i)
        for (const auto& t : r.transitions)
            if (fwd[i][t.from] && bwd[i + 1][t.to] && d.domains[i].count(t.label))
                out.domains[i].insert(t.label);
    for (int i = 0; i < n; ++i)
        if (out.domains[i].empty()) return std::nullopt;
    return out;
}

namespace detail {

// Enumerates all assignments within the domains, with a search-space guard.
template <typename Fn>
void for_each_assignment(const VarDomains& d, Fn&& fn) {
    long long space = 1;
    for (const auto& dom : d.domains) {
        space *= static_cast<long long>(dom.size());
        if (space > 2'000'000) throw Error("brute force: search space guard exceeded");
        if (space == 0) return;
    }
    std::vector<std::vector<std::string>> vals;
    for (const auto& dom : d.domains) vals.emplace_back(dom.begin(), dom.end());
    std::vector<std::size_t> idx(d.size(), 0);
    std::vector<std::string> assignment(d.size());
    while (true) {
        for (int i = 0; i < d.size(); ++i) assignment[i] = vals[i][idx[i]];
        fn(const_cast<const std::vector<std::string>&>(assignment));
        int i = d.size() - 1;
        while (i >= 0 && ++idx[i] == vals[i].size()) idx[i--] = 0;
        if (i < 0) break;
    }
}

} // namespace detail

// Reference propagator: enumerate every assignment and keep the values that
// occur in some member of L(g).
inline std::optional<VarDomains> brute_force_propagate(const Grammar& g, const VarDomains& d) {
    if (d.size() == 0) throw Error("brute_force_propagate: empty scope");
    VarDomains out;
    out.names = d.names;
    out.domains.resize(d.size());
    bool any = false;
    detail::for_each_assignment(d, [&](const std::vector<std::string>& a) {
        if (!cyk_parse(g, std::span<const std::string>(a))) return;
        any = true;
        for (int i = 0; i < d.size(); ++i) out.domains[i].insert(a[i]);
    });
    if (!any) return std::nullopt;
    return out;
}

// Weighted reference propagator: keeps values occurring in some member of
// L(g) whose minimum derivation weight is within ub(Z).
inline std::optional<WeightedPropagateResult> brute_force_propagate(const Grammar& g,
                                                                    const VarDomains& d,
                                                                    ZBound z) {
    if (d.size() == 0) throw Error("brute_force_propagate: empty scope");
    if (z.lb > z.ub) return std::nullopt;
    WeightedPropagateResult res;
    res.domains.names = d.names;
    res.domains.domains.resize(d.size());
    Weight best = kInfWeight;
    detail::for_each_assignment(d, [&](const std::vector<std::string>& a) {
        auto w = min_weight_parse(g, std::span<const std::string>(a));
        if (!w) return;
        best = std::min(best, *w);
        if (*w > z.ub) return;
        for (int i = 0; i < d.size(); ++i) res.domains.domains[i].insert(a[i]);
    });
    if (best > z.ub) return std::nullopt;
    res.z = ZBound{std::max(z.lb, best), z.ub};
    return res;
}

} // namespace gcl
