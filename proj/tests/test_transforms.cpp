#include <doctest.h>

#include "gcl/grammar_io.hpp"
#include "gcl/propagators.hpp"
#include "gcl/transforms.hpp"
#include "test_support.hpp"

using namespace gcl;
using testsupport::Rng;

namespace {

const char* kParens = "S -> S S\nS -> '(' S ')'\nS -> '(' ')'\n";

bool language_equal(const Grammar& a, const Grammar& b, int max_len) {
    return enumerate_language_tokens(a, max_len) == enumerate_language_tokens(b, max_len);
}

} // namespace

TEST_CASE("to_cnf: terminal lifting") {
    Grammar g = to_cnf(parse_grammar("S -> a b"));
    CHECK(classify(g).is_cnf);
    REQUIRE(g.productions().size() == 3);
    const auto& top = g.productions()[0];
    CHECK(top.rhs.size() == 2);
    CHECK(top.rhs[0].is_nonterminal());
    CHECK(top.rhs[1].is_nonterminal());
    CHECK(enumerate_language(g, 4) == std::set<std::string>{"ab"});
}

TEST_CASE("to_cnf: language preserved") {
    Grammar g = parse_grammar("S -> a S a\nS -> b");
    Grammar cnf = to_cnf(g);
    CHECK(classify(cnf).is_cnf);
    CHECK(language_equal(g, cnf, 7));
}

TEST_CASE("to_cnf: chain productions composed away") {
    Grammar g = to_cnf(parse_grammar("S -> A\nA -> a"));
    CHECK(g == parse_grammar("S -> a"));
}

TEST_CASE("to_cnf: language preserved on random grammars") {
    Rng rng(90210);
    for (int round = 0; round < 60; ++round) {
        Grammar g = round % 2 ? testsupport::random_linear_grammar(rng, false)
                              : testsupport::random_leading_terminal_grammar(rng);
        Grammar cnf = to_cnf(g);
        CHECK(classify(cnf).is_cnf);
        CHECK(language_equal(g, cnf, 6));
    }
}

TEST_CASE("to_cnf: chain weights add up") {
    Grammar g = parse_grammar("S -> A [2]\nA -> a [3]");
    Grammar cnf = to_cnf(g);
    REQUIRE(cnf.productions().size() == 1);
    CHECK(cnf.productions()[0].weight == 5);
}

TEST_CASE("to_cnf and to_linear_normal_form: min weights preserved") {
    Rng rng(5150);
    int checked = 0;
    for (int round = 0; round < 40; ++round) {
        Grammar g = testsupport::random_linear_grammar(rng, true);
        Grammar cnf = to_cnf(g);
        Grammar nf = to_linear_normal_form(g);
        for (const auto& tokens : enumerate_language_tokens(g, 5)) {
            auto expected = testsupport::min_weight_derivation_bfs(g, tokens);
            REQUIRE(expected);
            auto via_cnf = min_weight_parse(cnf, std::span<const std::string>(tokens));
            auto via_nf = min_weight_parse(nf, std::span<const std::string>(tokens));
            REQUIRE(via_cnf);
            REQUIRE(via_nf);
            CHECK(*via_cnf == *expected);
            CHECK(*via_nf == *expected);
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("to_linear_split_form: examples") {
    Grammar g = to_linear_split_form(parse_grammar("A -> a b B c\nB -> b"));
    // A -> a A_1, A_1 -> b A_2, A_2 -> B c, B -> b
    REQUIRE(g.productions().size() == 4);
    for (const auto& p : g.productions()) {
        bool unary = p.rhs.size() == 1 && p.rhs[0].is_terminal();
        bool binary = p.rhs.size() == 2 && (p.rhs[0].is_terminal() != p.rhs[1].is_terminal());
        CHECK((unary || binary));
    }
    CHECK(language_equal(g, parse_grammar("A -> a b B c\nB -> b"), 6));

    Grammar split = to_linear_split_form(parse_grammar("S -> a S b\nS -> c"));
    CHECK(split.productions().size() == 3);
    CHECK(language_equal(split, parse_grammar("S -> a S b\nS -> c"), 6));
}

TEST_CASE("to_linear_split_form: already split is identity") {
    Grammar g = parse_grammar("S -> a S\nS -> a");
    CHECK(to_linear_split_form(g) == g);
}

TEST_CASE("to_linear_split_form: rejects non-linear input") {
    CHECK_THROWS_AS(to_linear_split_form(parse_grammar("S -> S S\nS -> a")), Error);
}

TEST_CASE("to_linear_normal_form: near-Chomsky output, language preserved") {
    Rng rng(61);
    for (int round = 0; round < 40; ++round) {
        Grammar g = testsupport::random_linear_grammar(rng, false);
        Grammar nf = to_linear_normal_form(g);
        CHECK(classify(nf).is_cnf);
        CHECK(language_equal(g, nf, 6));
    }
}

TEST_CASE("trim: nonproductive and unreachable symbols") {
    Grammar nonproductive = parse_grammar("S -> A B\nA -> a");
    Grammar trimmed = trim(nonproductive);
    CHECK(trimmed.productions().empty());
    CHECK(is_empty(nonproductive));

    Grammar unreachable = trim(parse_grammar("S -> a\nB -> b"));
    REQUIRE(unreachable.productions().size() == 1);
    CHECK(unreachable.nonterminal_count() == 1);
    CHECK(unreachable.terminal_count() == 2);  // alphabet is kept
    CHECK(enumerate_language(unreachable, 3) == std::set<std::string>{"a"});
    CHECK(!is_empty(unreachable));

    Grammar once = trim(parse_grammar(kParens));
    CHECK(trim(once) == once);
}

TEST_CASE("trim: idempotent on random grammars") {
    Rng rng(777);
    for (int round = 0; round < 50; ++round) {
        Grammar g = testsupport::random_cnf_grammar(rng);
        Grammar once = trim(g);
        CHECK(trim(once) == once);
        CHECK(is_empty(g) == once.productions().empty());
        CHECK(language_equal(g, once, 5));
    }
}

TEST_CASE("is_empty: examples") {
    CHECK(is_empty(parse_grammar("S -> A B\nA -> a")));
    CHECK(!is_empty(parse_grammar("S -> a")));
}

TEST_CASE("triple_construction: singleton intersection") {
    Grammar g = to_cnf(parse_grammar("S -> a"));
    VarDomains d;
    d.domains.push_back({"a"});
    Grammar inter = triple_construction(g, cartesian_nfa(d));
    CHECK(!inter.productions().empty());
    CHECK(enumerate_language(inter, 3) == std::set<std::string>{"a"});
}

TEST_CASE("triple_construction: parens against four-variable product") {
    Grammar cnf = to_cnf(parse_grammar(kParens));
    VarDomains d;
    for (int i = 0; i < 4; ++i) d.domains.push_back({"(", ")"});
    Grammar inter = triple_construction(cnf, cartesian_nfa(d));
    CHECK(enumerate_language(inter, 5) == std::set<std::string>{"(())", "()()"});
}

TEST_CASE("triple_construction: empty after trim") {
    Grammar cnf = to_cnf(parse_grammar(kParens));
    std::vector<std::string> tokens{")", "("};
    Grammar inter = triple_construction(cnf, chain_nfa(tokens));
    CHECK(inter.productions().empty());
    CHECK(is_empty(inter));
}

TEST_CASE("triple_construction: alphabet mismatch rejected") {
    Grammar cnf = to_cnf(parse_grammar("S -> a"));
    std::vector<std::string> tokens{"z"};
    CHECK_THROWS_AS(triple_construction(cnf, chain_nfa(tokens)), Error);
}

TEST_CASE("triple_construction: language equals intersection on random inputs") {
    Rng rng(1003);
    for (int round = 0; round < 50; ++round) {
        Grammar g = testsupport::random_cnf_grammar(rng, 4, 8, 2);
        Nfa r = testsupport::random_nfa(rng, g);
        Grammar inter = triple_construction(g, r);
        bool cnf_or_empty = classify(inter).is_cnf || inter.productions().empty();
        CHECK(cnf_or_empty);

        auto expected = enumerate_language_tokens(g, 5);
        std::erase_if(expected, [&](const std::vector<std::string>& s) {
            return !r.accepts(std::span<const std::string>(s));
        });
        CHECK(enumerate_language_tokens(inter, 5) == expected);
    }
}

TEST_CASE("triple_construction: weights preserved on intersection members") {
    Rng rng(3333);
    int checked = 0;
    for (int round = 0; round < 100; ++round) {
        Grammar g = testsupport::random_linear_grammar(rng, true);
        Grammar cnf = to_cnf(g);
        Nfa r = testsupport::random_nfa(rng, cnf);
        Grammar inter = triple_construction(cnf, r);
        for (const auto& tokens : enumerate_language_tokens(inter, 4)) {
            auto through = min_weight_parse(inter, std::span<const std::string>(tokens));
            auto direct = min_weight_parse(cnf, std::span<const std::string>(tokens));
            REQUIRE(through);
            REQUIRE(direct);
            CHECK(*through == *direct);
            ++checked;
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("triple_construction_linear: matches the general construction") {
    Rng rng(2217);
    for (int round = 0; round < 40; ++round) {
        Grammar g = testsupport::random_linear_grammar(rng, false);
        Nfa r = testsupport::random_nfa(rng, g);
        Grammar split = to_linear_split_form(g);
        Grammar lin = triple_construction_linear(split, r);
        CHECK(classify(lin).is_linear);
        Grammar gen = triple_construction(to_cnf(g), r);
        CHECK(enumerate_language_tokens(lin, 5) == enumerate_language_tokens(gen, 5));
    }
}

TEST_CASE("simple_grammar_reduction: supported and unsupported strings") {
    Grammar g = parse_grammar("S -> a S\nS -> b");

    auto [reduced, domains] = simple_grammar_reduction(g, testsupport::to_tokens("ab"));
    CHECK(classify(reduced).is_simple);
    REQUIRE(reduced.productions().size() == 2);
    CHECK(reduced.terminal_name(reduced.productions()[0].rhs[0].id) == "(a,1)");
    CHECK(reduced.terminal_name(reduced.productions()[1].rhs[0].id) == "(b,2)");
    CHECK(domains.domains[0] == std::set<std::string>{"(a,1)"});
    CHECK(domains.domains[1] == std::set<std::string>{"(b,2)"});
    CHECK(!is_empty(triple_construction(to_cnf(reduced), cartesian_nfa(domains))));

    auto [reduced2, domains2] = simple_grammar_reduction(g, testsupport::to_tokens("ba"));
    CHECK(is_empty(triple_construction(to_cnf(reduced2), cartesian_nfa(domains2))));

    auto [reduced3, domains3] = simple_grammar_reduction(parse_grammar("S -> a"),
                                                         testsupport::to_tokens("a"));
    CHECK(reduced3.productions().size() == 1);
    CHECK(domains3.domains[0] == std::set<std::string>{"(a,1)"});
}

TEST_CASE("simple_grammar_reduction: input validation") {
    Grammar not_greibach = parse_grammar("S -> A a\nA -> a");
    CHECK_THROWS_AS(simple_grammar_reduction(not_greibach, testsupport::to_tokens("a")), Error);
    Grammar g = parse_grammar("S -> a");
    CHECK_THROWS_AS(simple_grammar_reduction(g, testsupport::to_tokens("z")), Error);
    CHECK_THROWS_AS(simple_grammar_reduction(g, {}), Error);
}

TEST_CASE("simple_grammar_reduction: reduction support iff membership") {
    Rng rng(31337);
    int positives = 0;
    for (int round = 0; round < 60; ++round) {
        Grammar g = testsupport::random_greibach_grammar(rng);
        std::vector<std::string> s;
        if (round % 2) {
            auto lang = enumerate_language_tokens(g, 6);
            if (!lang.empty()) {
                auto it = lang.begin();
                std::advance(it, testsupport::randint(rng, 0, static_cast<int>(lang.size()) - 1));
                s = *it;
            }
        }
        if (s.empty()) {
            std::string alphabet;
            for (int t = 0; t < g.terminal_count(); ++t) alphabet += g.terminal_name(t);
            s = testsupport::to_tokens(
                testsupport::random_string(rng, alphabet, testsupport::randint(rng, 1, 8)));
        }
        bool member = cyk_parse(to_cnf(g), std::span<const std::string>(s));
        positives += member;
        auto [reduced, domains] = simple_grammar_reduction(g, s);
        bool support =
            !is_empty(trim(triple_construction(to_cnf(reduced), cartesian_nfa(domains))));
        CHECK(support == member);
    }
    CHECK(positives > 5);
}

TEST_CASE("bitmap_reduction: examples") {
    // two terminals so each position becomes a 2-bit block
    Grammar g = parse_grammar("S -> a\nA -> b\nS -> a A");
    VarDomains d;
    d.domains.push_back({"a"});
    auto [reduced, bitmap] = bitmap_reduction(parse_grammar("S -> a\nA -> b\nS -> a A"), d);
    CHECK(bitmap == "10");
    CHECK(cyk_parse(to_cnf(reduced), bitmap));

    VarDomains d2;
    d2.domains.push_back({"b"});
    auto [reduced2, bitmap2] = bitmap_reduction(parse_grammar("S -> a\nA -> b\nS -> a A"), d2);
    CHECK(bitmap2 == "01");
    CHECK(!cyk_parse(to_cnf(reduced2), bitmap2));

    VarDomains d3;
    d3.domains.push_back({"a", "b"});
    d3.domains.push_back({"b"});
    auto [reduced3, bitmap3] = bitmap_reduction(parse_grammar("S -> a S\nS -> b"), d3);
    CHECK(bitmap3 == "1101");
    CHECK(cyk_parse(to_cnf(reduced3), bitmap3));
}

TEST_CASE("bitmap_reduction: block productions") {
    Grammar g = parse_grammar("S -> a\nA -> b\nS -> a A");
    VarDomains d;
    d.domains.push_back({"a"});
    auto [reduced, bitmap] = bitmap_reduction(g, d);
    std::string text = serialize_grammar(reduced);
    CHECK(text.find("B -> 0") != std::string::npos);
    CHECK(text.find("B -> 1") != std::string::npos);
    CHECK(text.find("T1 -> 1 B") != std::string::npos);
    CHECK(text.find("T2 -> B 1") != std::string::npos);
    CHECK(text.find("S -> T1") != std::string::npos);
}

TEST_CASE("bitmap_reduction: rejects non-leading-terminal productions") {
    CHECK_THROWS_AS(bitmap_reduction(parse_grammar("S -> A a\nA -> a"), VarDomains{}), Error);
}

TEST_CASE("bitmap_reduction: membership iff intersection nonempty") {
    Rng rng(9091);
    int nonempty = 0;
    for (int round = 0; round < 60; ++round) {
        Grammar g = testsupport::random_leading_terminal_grammar(rng);
        VarDomains d = testsupport::random_domains(rng, g, testsupport::randint(rng, 1, 5));
        auto [reduced, bitmap] = bitmap_reduction(g, d);
        bool member = cyk_parse(to_cnf(reduced), bitmap);
        bool intersect = !is_empty(trim(triple_construction(to_cnf(g), cartesian_nfa(d))));
        CHECK(member == intersect);
        nonempty += intersect;
    }
    CHECK(nonempty > 5);
}
