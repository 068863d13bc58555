// Text format for grammars.
//
//   # comment
//   start: S            (optional; default is the first production's lhs)
//   S -> a S b [2]      (trailing [w] is an optional weight)
//
// Tokens starting with an uppercase letter are nonterminals, quoted tokens
// ('#', '(') are always terminals, everything else is a terminal.
#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gcl/grammar.hpp"

namespace gcl {

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

inline bool weight_shaped(const std::string& tok) {
    if (tok.size() < 3 || tok.front() != '[' || tok.back() != ']') return false;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    return true;
}

inline bool bare_terminal_ok(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

} // namespace detail

inline Grammar parse_grammar(std::string_view text) {
    GrammarBuilder b;
    bool weighted = false;
    bool have_start = false;
    std::string start_name;
    int start_line = 0;

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++lineno;

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        if (line[first] == '#') continue;

        auto tokens = detail::split_ws(line);

        if (tokens[0] == "start:" || (tokens[0].rfind("start:", 0) == 0 && tokens.size() == 1)) {
            std::string name;
            if (tokens[0] == "start:") {
                if (tokens.size() != 2) throw ParseError(lineno, "expected 'start: NAME'");
                name = tokens[1];
            } else {
                name = tokens[0].substr(6);
            }
            if (have_start) throw ParseError(lineno, "duplicate start: header");
            if (!detail::uppercase_start(name))
                throw ParseError(lineno, "start symbol must be a nonterminal (uppercase)");
            have_start = true;
            start_name = name;
            start_line = lineno;
            continue;
        }

        if (tokens.size() < 2 || tokens[1] != "->")
            throw ParseError(lineno, "expected 'LHS -> symbols...'");
        if (!detail::uppercase_start(tokens[0]))
            throw ParseError(lineno, "left-hand side must be a nonterminal (uppercase)");

        std::size_t end = tokens.size();
        Weight w = 0;
        bool has_weight = false;
        if (end > 2 && detail::weight_shaped(tokens[end - 1])) {
            has_weight = true;
            --end;
            const std::string& tok = tokens[end];
            for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
                w = w * 10 + (tok[i] - '0');
                if (w > kMaxWeight)
                    throw ParseError(lineno, "production weight exceeds the 2^31 guard");
            }
        }
        if (end <= 2) throw ParseError(lineno, "empty right-hand side");

        std::vector<Symbol> rhs;
        for (std::size_t i = 2; i < end; ++i) {
            const std::string& tok = tokens[i];
            try {
                if (tok.size() >= 2 && tok.front() == '\'' && tok.back() == '\'') {
                    if (tok.size() == 2) throw Error("empty quoted terminal");
                    rhs.push_back(b.terminal(tok.substr(1, tok.size() - 2)));
                } else if (detail::uppercase_start(tok)) {
                    rhs.push_back(b.nonterminal(tok));
                } else {
                    rhs.push_back(b.terminal(tok));
                }
            } catch (const Error& e) {
                throw ParseError(lineno, e.what());
            }
        }
        weighted = weighted || has_weight;
        b.production(b.nonterminal(tokens[0]), std::move(rhs), w);
    }

    if (have_start) {
        try {
            b.start(b.nonterminal(start_name));
        } catch (const Error& e) {
            throw ParseError(start_line, e.what());
        }
    }
    b.weighted(weighted);
    try {
        return b.build();
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

inline std::string render_symbol(const Grammar& g, Symbol s) {
    const std::string& name = g.name(s);
    if (s.is_nonterminal()) return name;
    if (detail::bare_terminal_ok(name)) return name;
    return "'" + name + "'";
}

inline std::string render_production(const Grammar& g, const Production& p) {
    std::string out = g.nonterminal_name(p.lhs) + " ->";
    for (Symbol s : p.rhs) {
        out += ' ';
        out += render_symbol(g, s);
    }
    if (g.weighted()) out += " [" + std::to_string(p.weight) + "]";
    return out;
}

inline std::string serialize_grammar(const Grammar& g) {
    std::string out;
    bool start_implied =
        !g.productions().empty() && g.productions().front().lhs == g.start().id;
    if (!start_implied) out += "start: " + g.nonterminal_name(g.start().id) + "\n";
    for (const auto& p : g.productions()) {
        out += render_production(g, p);
        out += '\n';
    }
    return out;
}

} // namespace gcl
