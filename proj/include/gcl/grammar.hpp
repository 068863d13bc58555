// Grammar data model: interned symbols, productions, grammar classes.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gcl {

using Weight = long long;

// +infinity sentinel for min-plus arithmetic; large enough that sums of
// desk-scale derivation weights never reach it, small enough not to wrap.
inline constexpr Weight kInfWeight = std::numeric_limits<Weight>::max() / 4;

// Parse-time guard: production weights above this are rejected.
inline constexpr Weight kMaxWeight = (Weight{1} << 31);

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class SymbolKind : std::uint8_t { Terminal, Nonterminal };

// Reference to an interned symbol. Ids are dense 0..k-1 within each kind
// of a particular grammar; a Symbol is only meaningful together with the
// grammar that interned it.
struct Symbol {
    SymbolKind kind = SymbolKind::Terminal;
    int id = -1;

    bool is_terminal() const { return kind == SymbolKind::Terminal; }
    bool is_nonterminal() const { return kind == SymbolKind::Nonterminal; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// lhs -> rhs with an optional weight. rhs is never empty. The production's
// index is its position in the grammar's production list.
struct Production {
    int lhs = -1;
    std::vector<Symbol> rhs;
    Weight weight = 0;

    friend bool operator==(const Production&, const Production&) = default;
};

class GrammarBuilder;

class Grammar {
public:
    Grammar() = default;

    int terminal_count() const { return static_cast<int>(term_names_.size()); }
    int nonterminal_count() const { return static_cast<int>(nonterm_names_.size()); }

    const std::string& terminal_name(int id) const { return term_names_.at(id); }
    const std::string& nonterminal_name(int id) const { return nonterm_names_.at(id); }

    const std::string& name(Symbol s) const {
        return s.is_terminal() ? terminal_name(s.id) : nonterminal_name(s.id);
    }

    std::optional<Symbol> find_terminal(std::string_view name) const {
        auto it = term_ids_.find(std::string(name));
        if (it == term_ids_.end()) return std::nullopt;
        return Symbol{SymbolKind::Terminal, it->second};
    }

    std::optional<Symbol> find_nonterminal(std::string_view name) const {
        auto it = nonterm_ids_.find(std::string(name));
        if (it == nonterm_ids_.end()) return std::nullopt;
        return Symbol{SymbolKind::Nonterminal, it->second};
    }

    const std::vector<Production>& productions() const { return productions_; }
    Symbol start() const { return start_; }
    bool weighted() const { return weighted_; }

    // sum over productions of (1 + |rhs|)
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& p : productions_) n += 1 + p.rhs.size();
        return n;
    }

    // Productions indexed by lhs nonterminal.
    const std::vector<std::vector<int>>& productions_by_lhs() const { return by_lhs_; }

    friend bool operator==(const Grammar& a, const Grammar& b) {
        return a.term_names_ == b.term_names_ && a.nonterm_names_ == b.nonterm_names_ &&
               a.productions_ == b.productions_ && a.start_ == b.start_ &&
               a.weighted_ == b.weighted_;
    }

private:
    friend class GrammarBuilder;

    std::vector<std::string> term_names_;
    std::vector<std::string> nonterm_names_;
    std::unordered_map<std::string, int> term_ids_;
    std::unordered_map<std::string, int> nonterm_ids_;
    std::vector<Production> productions_;
    std::vector<std::vector<int>> by_lhs_;
    Symbol start_{SymbolKind::Nonterminal, -1};
    bool weighted_ = false;
};

namespace detail {

inline bool valid_symbol_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name)
        if (c == '\'' || c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
    return true;
}

inline bool uppercase_start(std::string_view name) {
    return !name.empty() && name[0] >= 'A' && name[0] <= 'Z';
}

} // namespace detail

// Incrementally interns symbols and accumulates productions; build()
// validates and freezes the result. Nonterminal names must start with an
// uppercase letter so that serialized grammars parse back to the same kinds.
class GrammarBuilder {
public:
    Symbol terminal(std::string_view name) {
        if (!detail::valid_symbol_name(name))
            throw Error("invalid terminal name: '" + std::string(name) + "'");
        auto [it, inserted] = g_.term_ids_.try_emplace(std::string(name), g_.terminal_count());
        if (inserted) g_.term_names_.emplace_back(name);
        return Symbol{SymbolKind::Terminal, it->second};
    }

    Symbol nonterminal(std::string_view name) {
        if (!detail::valid_symbol_name(name) || !detail::uppercase_start(name))
            throw Error("invalid nonterminal name (must start with A-Z): '" + std::string(name) +
                        "'");
        auto [it, inserted] =
            g_.nonterm_ids_.try_emplace(std::string(name), g_.nonterminal_count());
        if (inserted) g_.nonterm_names_.emplace_back(name);
        return Symbol{SymbolKind::Nonterminal, it->second};
    }

    // A nonterminal whose name does not collide with anything interned yet.
    Symbol fresh_nonterminal(std::string base) {
        if (!detail::uppercase_start(base)) base = "N" + base;
        std::string candidate = base;
        int suffix = 1;
        while (g_.nonterm_ids_.count(candidate)) candidate = base + "_" + std::to_string(suffix++);
        return nonterminal(candidate);
    }

    GrammarBuilder& production(Symbol lhs, std::vector<Symbol> rhs, Weight w = 0) {
        if (!lhs.is_nonterminal()) throw Error("production lhs must be a nonterminal");
        if (rhs.empty()) throw Error("empty right-hand side");
        if (w < 0 || w > kMaxWeight) throw Error("production weight out of range");
        g_.productions_.push_back(Production{lhs.id, std::move(rhs), w});
        return *this;
    }

    void start(Symbol s) {
        if (!s.is_nonterminal()) throw Error("start symbol must be a nonterminal");
        start_ = s;
    }

    void weighted(bool w) { g_.weighted_ = w; }

    Grammar build() {
        if (start_) {
            g_.start_ = *start_;
        } else if (!g_.productions_.empty()) {
            g_.start_ = Symbol{SymbolKind::Nonterminal, g_.productions_.front().lhs};
        } else {
            throw Error("grammar has no productions and no explicit start symbol");
        }
        for (const auto& p : g_.productions_) {
            if (p.lhs < 0 || p.lhs >= g_.nonterminal_count())
                throw Error("undeclared production lhs");
            for (Symbol s : p.rhs) {
                int limit = s.is_terminal() ? g_.terminal_count() : g_.nonterminal_count();
                if (s.id < 0 || s.id >= limit) throw Error("undeclared symbol in rhs");
            }
            if (!g_.weighted_ && p.weight != 0)
                throw Error("nonzero weight in unweighted grammar");
        }
        g_.by_lhs_.assign(g_.nonterminal_count(), {});
        for (int i = 0; i < static_cast<int>(g_.productions_.size()); ++i)
            g_.by_lhs_[g_.productions_[i].lhs].push_back(i);
        return std::move(g_);
    }

private:
    Grammar g_;
    std::optional<Symbol> start_;
};

// Syntactic class flags of a grammar; see classify().
struct GrammarClass {
    bool is_regular = false;
    bool is_linear = false;
    bool is_greibach = false;
    bool is_simple = false;
    bool is_cnf = false;
    // (l, r): every production with a nonterminal is A -> u B w, |u| = l, |w| = r.
    std::optional<std::pair<int, int>> fixed_growth;
};

inline GrammarClass classify(const Grammar& g) {
    GrammarClass c;
    c.is_regular = true;
    c.is_linear = true;
    c.is_greibach = true;
    c.is_cnf = true;

    bool growth_possible = true;
    std::optional<std::pair<int, int>> growth;
    bool has_recursive = false;

    for (const auto& p : g.productions()) {
        const auto& rhs = p.rhs;
        int nt_count = 0;
        for (Symbol s : rhs)
            if (s.is_nonterminal()) ++nt_count;

        if (nt_count > 1) c.is_linear = false;

        // regular: A -> w or A -> wB, w in T+
        bool regular_shape = false;
        if (nt_count == 0) {
            regular_shape = true;
        } else if (nt_count == 1 && rhs.back().is_nonterminal() && rhs.size() >= 2) {
            regular_shape = true;
        }
        if (!regular_shape) c.is_regular = false;

        // greibach: A -> a alpha, alpha nonterminal-only
        bool greibach_shape = rhs.front().is_terminal();
        for (std::size_t i = 1; greibach_shape && i < rhs.size(); ++i)
            if (rhs[i].is_terminal()) greibach_shape = false;
        if (!greibach_shape) c.is_greibach = false;

        bool cnf_shape = (rhs.size() == 1 && rhs[0].is_terminal()) ||
                         (rhs.size() == 2 && rhs[0].is_nonterminal() && rhs[1].is_nonterminal());
        if (!cnf_shape) c.is_cnf = false;

        if (nt_count >= 2) {
            growth_possible = false;
        } else if (nt_count == 1) {
            has_recursive = true;
            int pos = 0;
            while (rhs[pos].is_terminal()) ++pos;
            int l = pos;
            int r = static_cast<int>(rhs.size()) - 1 - pos;
            if (l + r < 1) {
                growth_possible = false; // unit production A -> B
            } else if (!growth) {
                growth = std::make_pair(l, r);
            } else if (*growth != std::make_pair(l, r)) {
                growth_possible = false;
            }
        }
    }

    if (growth_possible && has_recursive) c.fixed_growth = growth;

    if (c.is_greibach) {
        // simple: at most one production per (lhs, leading terminal)
        std::set<std::pair<int, int>> seen;
        c.is_simple = true;
        for (const auto& p : g.productions()) {
            if (!seen.insert({p.lhs, p.rhs.front().id}).second) {
                c.is_simple = false;
                break;
            }
        }
    }
    return c;
}

// All strings of L(g) with length <= max_len, as terminal-name sequences.
// Breadth-first leftmost derivation with length pruning; since rhs are
// nonempty, any sentential form longer than max_len can be discarded.
inline std::set<std::vector<std::string>> enumerate_language_tokens(const Grammar& g,
                                                                    int max_len) {
    if (max_len > 12) throw Error("enumerate_language: max_len exceeds guard (12)");
    std::set<std::vector<std::string>> out;
    if (max_len < 1 || g.start().id < 0) return out;

    std::set<std::vector<Symbol>> visited;
    std::vector<std::vector<Symbol>> frontier{{g.start()}};
    visited.insert(frontier.front());
    std::size_t expanded = 0;

    while (!frontier.empty()) {
        std::vector<std::vector<Symbol>> next;
        for (const auto& form : frontier) {
            auto nt_pos = std::find_if(form.begin(), form.end(),
                                       [](Symbol s) { return s.is_nonterminal(); });
            if (nt_pos == form.end()) {
                std::vector<std::string> tokens;
                tokens.reserve(form.size());
                for (Symbol s : form) tokens.push_back(g.terminal_name(s.id));
                out.insert(std::move(tokens));
                continue;
            }
            int nt = nt_pos->id;
            for (int pi : g.productions_by_lhs().at(nt)) {
                const auto& p = g.productions()[pi];
                std::vector<Symbol> expandedForm;
                expandedForm.reserve(form.size() - 1 + p.rhs.size());
                expandedForm.insert(expandedForm.end(), form.begin(), nt_pos);
                expandedForm.insert(expandedForm.end(), p.rhs.begin(), p.rhs.end());
                expandedForm.insert(expandedForm.end(), nt_pos + 1, form.end());
                if (expandedForm.size() > static_cast<std::size_t>(max_len)) continue;
                if (visited.insert(expandedForm).second) next.push_back(std::move(expandedForm));
            }
            if (++expanded > 2'000'000) throw Error("enumerate_language: expansion blow-up");
        }
        frontier = std::move(next);
    }
    return out;
}

// Convenience for single-character terminal alphabets: tokens joined as-is.
inline std::set<std::string> enumerate_language(const Grammar& g, int max_len) {
    std::set<std::string> out;
    for (const auto& tokens : enumerate_language_tokens(g, max_len)) {
        std::string s;
        for (const auto& t : tokens) s += t;
        out.insert(std::move(s));
    }
    return out;
}

} // namespace gcl
