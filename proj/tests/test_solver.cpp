#include <doctest.h>

#include "gcl/bench.hpp"
#include "gcl/grammar_io.hpp"
#include "gcl/solver.hpp"
#include "gcl/transforms.hpp"
#include "test_support.hpp"

using namespace gcl;
using testsupport::Rng;

namespace {

Model tiny_grammar_model(const char* text, std::vector<std::set<std::string>> domains) {
    Model m;
    m.num_vars = static_cast<int>(domains.size());
    m.init_domains = std::move(domains);
    Model::Constraint c;
    c.kind = Model::Constraint::Kind::Grammar;
    c.grammar = to_cnf(parse_grammar(text));
    for (int i = 0; i < m.num_vars; ++i) c.scope.push_back(i);
    m.constraints.push_back(std::move(c));
    return m;
}

} // namespace

TEST_CASE("solve: propagation alone fixes a unique support") {
    Model m = tiny_grammar_model("S -> a b", {{"a", "b"}, {"a", "b"}});
    BenchResult r = solve(m, 7, 10000);
    REQUIRE(r.solved);
    CHECK(*r.satisfiable);
    CHECK(r.choice_points <= 2);
    REQUIRE(r.solution);
    CHECK(*r.solution == std::vector<std::string>{"a", "b"});
}

TEST_CASE("solve: disentailed at the root") {
    Model m = tiny_grammar_model("S -> a b", {{"b"}, {"a"}});
    BenchResult r = solve(m, 7, 10000);
    REQUIRE(r.solved);
    CHECK(!*r.satisfiable);
    CHECK(r.choice_points == 0);
}

TEST_CASE("solve: deterministic for a fixed seed") {
    auto inst = generate_instance(4, 1, 99);
    BenchResult a = solve(inst.dec, 12345, 60000);
    BenchResult b = solve(inst.dec, 12345, 60000);
    REQUIRE(a.solved);
    REQUIRE(b.solved);
    CHECK(a.satisfiable == b.satisfiable);
    CHECK(a.choice_points == b.choice_points);
    CHECK(a.solution == b.solution);
}

TEST_CASE("solve: timeout reports unsolved with elapsed time") {
    auto inst = generate_instance(12, 2, 4);
    BenchResult r = solve(inst.dec, 5, 0.0);  // zero budget
    CHECK(!r.solved);
    CHECK(!r.satisfiable);
    CHECK(r.wall_time_ms >= 0.0);
}

TEST_CASE("model validation") {
    Model m;
    m.num_vars = 1;
    m.init_domains = {{"a"}};
    Model::Constraint c;
    c.kind = Model::Constraint::Kind::Grammar;
    c.grammar = parse_grammar("S -> a b c");  // not CNF
    c.scope = {0};
    m.constraints.push_back(c);
    CHECK_THROWS_AS(m.validate(), Error);
    m.constraints[0].grammar = to_cnf(parse_grammar("S -> a"));
    m.constraints[0].scope = {3};
    CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("generate_instance: shapes and shared variables") {
    auto inst = generate_instance(15, 2, 1);
    CHECK(inst.seq_vars[0].size() == 31);
    CHECK(inst.seq_vars[1].size() == 31);
    CHECK(inst.shared_x_positions.size() == 3);  // ceil(0.15 * 15)
    CHECK(inst.conj.num_vars == 2 * 31 - 3);
    CHECK(inst.dec.num_vars == inst.conj.num_vars);
    CHECK(inst.conj.constraints.size() == 2);
    CHECK(inst.dec.constraints.size() == 6);
    for (int pos : inst.shared_x_positions)
        CHECK(inst.seq_vars[0][pos] == inst.seq_vars[1][pos]);
    CHECK(inst.conj.shared_positions.size() == 3);
    CHECK(inst.y[0].size() == 15);
    CHECK(inst.y[1].size() == 15);

    auto inst20 = generate_instance(20, 2, 2);
    CHECK(inst20.seq_vars[0].size() == 41);
    CHECK(inst20.shared_x_positions.size() == 3);  // ceil(0.15 * 20)

    CHECK_THROWS_AS(generate_instance(1, 1, 0), Error);
}

TEST_CASE("generate_instance: both models agree and report sound solutions") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        int n = 4 + static_cast<int>(seed % 2);
        auto inst = generate_instance(n, 1 + static_cast<int>(seed % 2), seed * 31 + 7);
        BenchResult conj = solve(inst.conj, seed, 60000);
        BenchResult dec = solve(inst.dec, seed, 60000);
        REQUIRE(conj.solved);
        REQUIRE(dec.solved);
        CHECK(*conj.satisfiable == *dec.satisfiable);

        for (const BenchResult* r : {&conj, &dec}) {
            if (!*r->satisfiable) continue;
            REQUIRE(r->solution);
            const auto& sol = *r->solution;
            for (int s = 0; s < 2; ++s) {
                std::string x, y_rev;
                for (int i = 0; i < n; ++i) x += sol[inst.seq_vars[s][i]];
                CHECK(sol[inst.seq_vars[s][n]] == "#");
                for (int i = n + 1; i <= 2 * n; ++i) y_rev += sol[inst.seq_vars[s][i]];
                std::string y(y_rev.rbegin(), y_rev.rend());
                CHECK(y == inst.y[s]);
                CHECK(testsupport::wagner_fischer(x, y) <=
                      static_cast<int>(inst.max_dist));
                CHECK(x.find("111") == std::string::npos);
            }
            for (int pos : inst.shared_x_positions)
                CHECK(sol[inst.seq_vars[0][pos]] == sol[inst.seq_vars[1][pos]]);
        }
    }
}

TEST_CASE("generate_instance: whole-sequence run-of-ones switch") {
    auto inst = generate_instance(5, 2, 11, /*r1_spans_sequence=*/true);
    BenchResult conj = solve(inst.conj, 3, 60000);
    BenchResult dec = solve(inst.dec, 3, 60000);
    REQUIRE(conj.solved);
    REQUIRE(dec.solved);
    CHECK(*conj.satisfiable == *dec.satisfiable);
}

TEST_CASE("run_bench: records, csv and markdown") {
    BenchConfig config;
    config.rows = {{3, 1}, {4, 1}};
    config.instances = 2;
    config.timeout_ms = 60000;
    config.seed = 5;
    BenchReport report = run_bench(config);
    CHECK(report.records.size() == 2 * 2 * 2);

    std::string csv = report.csv();
    CHECK(csv.rfind("n,N,seed,model,solved,satisfiable,choice_points,time_ms\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

    std::string md = report.markdown();
    CHECK(md.find("| n | N |") != std::string::npos);
    CHECK(md.find("TOTALS") != std::string::npos);
    CHECK(md.find("| 3 | 1 |") != std::string::npos);

    BenchReport again = run_bench(config);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        CHECK(report.records[i].result.choice_points ==
              again.records[i].result.choice_points);
        CHECK(report.records[i].result.satisfiable == again.records[i].result.satisfiable);
    }

    BenchConfig empty;
    CHECK(run_bench(empty).records.empty());
}
