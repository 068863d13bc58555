// Random-instance generator and benchmark harness comparing the monolithic
// conjunction encoding against the decomposed model on pairs of coupled
// edit-distance sequences.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcl/edit_distance.hpp"
#include "gcl/grammar.hpp"
#include "gcl/nfa.hpp"
#include "gcl/solver.hpp"
#include "gcl/transforms.hpp"

namespace gcl {

// Automaton over {0,1} rejecting three consecutive ones: states count the
// current run of 1s, all states accept.
inline Nfa at_most_two_ones_nfa() {
    Nfa a;
    a.states = 3;
    a.initial = 0;
    a.accepting = {0, 1, 2};
    for (int q = 0; q < 3; ++q) a.transitions.push_back({q, "0", 0});
    a.transitions.push_back({0, "1", 1});
    a.transitions.push_back({1, "1", 2});
    return a;
}

// One generated benchmark instance: two sequences X#(Y)^R and X'#(Y')^R over
// {0,1}, same length 2n+1, with Y and Y' pinned to random strings, the
// run-of-ones automaton on the X halves, and 15% of the X positions shared
// between the sequences. `conj` encodes each sequence with one weighted
// grammar constraint over the intersection grammar; `dec` keeps the
// edit-distance grammar and the Regular constraints separate. Both models
// range over the same variables and are satisfiability-equivalent.
struct GeneratedInstance {
    Model conj;
    Model dec;
    int n = 0;
    Weight max_dist = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> y;            // target strings, one per sequence
    std::vector<int> shared_x_positions;   // 0-based positions within X
    std::vector<std::vector<int>> seq_vars; // variable ids per sequence, scope order
};

// `r1_spans_sequence` flips the run-of-ones constraint from the X half to
// the whole 2n+1 sequence (the sentinel and Y symbols reset the run).
inline GeneratedInstance generate_instance(int n, Weight max_dist, std::uint64_t seed,
                                           bool r1_spans_sequence = false) {
    if (n < 2) throw Error("generate_instance: n must be at least 2");
    std::mt19937_64 rng(seed);

    GeneratedInstance inst;
    inst.n = n;
    inst.max_dist = max_dist;
    inst.seed = seed;

    for (int s = 0; s < 2; ++s) {
        std::string y;
        for (int i = 0; i < n; ++i) y += rng() % 2 ? '1' : '0';
        inst.y.push_back(std::move(y));
    }

    const int shared_count = static_cast<int>(std::ceil(0.15 * n));
    std::vector<int> positions(n);
    for (int i = 0; i < n; ++i) positions[i] = i;
    for (int i = 0; i < shared_count; ++i)
        std::swap(positions[i], positions[i + rng() % (n - i)]);
    positions.resize(shared_count);
    std::sort(positions.begin(), positions.end());
    inst.shared_x_positions = positions;

    // variables: full first sequence, second sequence reuses shared X vars
    Model base;
    auto add_var = [&](const std::string& name, std::set<std::string> dom) {
        base.var_names.push_back(name);
        base.init_domains.push_back(std::move(dom));
        return base.num_vars++;
    };
    const std::set<std::string> bits{"0", "1"};
    inst.seq_vars.assign(2, {});
    for (int s = 0; s < 2; ++s) {
        std::string prefix = s == 0 ? "A" : "B";
        for (int i = 0; i < 2 * n + 1; ++i) {
            if (s == 1 && i < n &&
                std::binary_search(positions.begin(), positions.end(), i)) {
                inst.seq_vars[1].push_back(inst.seq_vars[0][i]);
                continue;
            }
            std::set<std::string> dom = i == n ? std::set<std::string>{"#"} : bits;
            inst.seq_vars[s].push_back(add_var(prefix + std::to_string(i + 1), std::move(dom)));
        }
    }
    for (int i = 0; i < shared_count; ++i)
        base.shared_positions.emplace_back(positions[i], positions[i]);

    Grammar g_ed = build_edit_grammar(bits, bits);
    Grammar g_ed_nf = to_linear_normal_form(g_ed);
    Nfa r1 = at_most_two_ones_nfa();

    Nfa r1_whole = r1;
    if (r1_spans_sequence)
        for (int q = 0; q < 3; ++q) r1_whole.transitions.push_back({q, "#", 0});

    inst.conj = base;
    inst.dec = base;
    for (int s = 0; s < 2; ++s) {
        std::vector<std::string> y_tokens;
        for (char c : inst.y[s]) y_tokens.emplace_back(1, c);
        Nfa r2 = chain_nfa(y_tokens);

        Grammar g_and;
        if (!r1_spans_sequence) {
            g_and = build_conjunction_grammar(r1, r2, g_ed);
        } else {
            Nfa pinned = concat_with_sentinel(universal_nfa(bits), reverse(r2), "#");
            g_and = triple_construction_linear(to_linear_split_form(g_ed),
                                               nfa_product(pinned, r1_whole));
        }

        Model::Constraint conj_c;
        conj_c.kind = Model::Constraint::Kind::WeightedGrammar;
        conj_c.scope = inst.seq_vars[s];
        conj_c.grammar = to_linear_normal_form(g_and);
        conj_c.z = ZBound{0, max_dist};
        inst.conj.constraints.push_back(std::move(conj_c));

        Model::Constraint ed_c;
        ed_c.kind = Model::Constraint::Kind::WeightedGrammar;
        ed_c.scope = inst.seq_vars[s];
        ed_c.grammar = g_ed_nf;
        ed_c.z = ZBound{0, max_dist};
        inst.dec.constraints.push_back(std::move(ed_c));

        Model::Constraint r1_c;
        r1_c.kind = Model::Constraint::Kind::Regular;
        if (!r1_spans_sequence) {
            r1_c.scope.assign(inst.seq_vars[s].begin(), inst.seq_vars[s].begin() + n);
            r1_c.automaton = r1;
        } else {
            r1_c.scope = inst.seq_vars[s];
            r1_c.automaton = r1_whole;
        }
        inst.dec.constraints.push_back(std::move(r1_c));

        Model::Constraint r2_c;
        r2_c.kind = Model::Constraint::Kind::Regular;
        for (int i = 2 * n; i >= n + 1; --i) r2_c.scope.push_back(inst.seq_vars[s][i]);
        r2_c.automaton = std::move(r2);
        inst.dec.constraints.push_back(std::move(r2_c));
    }
    return inst;
}

struct BenchRow {
    int n = 0;
    Weight max_dist = 0;
};

struct BenchConfig {
    std::vector<BenchRow> rows;
    int instances = 20;
    double timeout_ms = 60000;
    std::uint64_t seed = 42;
    bool run_conj = true;
    bool run_dec = true;
    bool r1_spans_sequence = false;
};

struct BenchRecord {
    int n = 0;
    Weight max_dist = 0;
    std::uint64_t seed = 0;
    std::string model;  // "conj" or "dec"
    BenchResult result;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRecord> records;

    std::string markdown() const;
    std::string csv() const;
};

inline BenchReport run_bench(const BenchConfig& config) {
    BenchReport report;
    report.config = config;
    for (std::size_t row = 0; row < config.rows.size(); ++row) {
        for (int i = 0; i < config.instances; ++i) {
            std::uint64_t inst_seed = config.seed + 100000 * row + static_cast<std::uint64_t>(i);
            auto inst = generate_instance(config.rows[row].n, config.rows[row].max_dist,
                                          inst_seed, config.r1_spans_sequence);
            if (config.run_conj)
                report.records.push_back({inst.n, inst.max_dist, inst_seed, "conj",
                                          solve(inst.conj, inst_seed, config.timeout_ms)});
            if (config.run_dec)
                report.records.push_back({inst.n, inst.max_dist, inst_seed, "dec",
                                          solve(inst.dec, inst_seed, config.timeout_ms)});
        }
    }
    return report;
}

namespace detail {

struct RowStats {
    int solved = 0;
    int total = 0;
    double cp_sum = 0;
    double time_sum = 0;

    void add(const BenchResult& r) {
        ++total;
        if (r.solved) {
            ++solved;
            cp_sum += static_cast<double>(r.choice_points);
            time_sum += r.wall_time_ms;
        }
    }
    double mean_cp() const { return solved ? cp_sum / solved : 0.0; }
    double mean_time_ms() const { return solved ? time_sum / solved : 0.0; }
};

inline std::string format_double(double v, int precision) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

} // namespace detail

inline std::string BenchReport::markdown() const {
    std::map<std::pair<int, Weight>, std::pair<detail::RowStats, detail::RowStats>> rows;
    std::vector<std::pair<int, Weight>> order;
    for (const auto& rec : records) {
        auto key = std::make_pair(rec.n, rec.max_dist);
        if (!rows.count(key)) order.push_back(key);
        auto& entry = rows[key];
        (rec.model == "dec" ? entry.first : entry.second).add(rec.result);
    }
    std::sort(order.begin(), order.end());

    std::string out;
    out += "| n | N | Dec solved | Dec choice points | Dec time (s) | "
           "Conj solved | Conj choice points | Conj time (s) |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    detail::RowStats dec_total, conj_total;
    for (const auto& key : order) {
        const auto& [dec, conj] = rows[key];
        out += "| " + std::to_string(key.first) + " | " + std::to_string(key.second) + " | " +
               std::to_string(dec.solved) + "/" + std::to_string(dec.total) + " | " +
               detail::format_double(dec.mean_cp(), 1) + " | " +
               detail::format_double(dec.mean_time_ms() / 1000.0, 3) + " | " +
               std::to_string(conj.solved) + "/" + std::to_string(conj.total) + " | " +
               detail::format_double(conj.mean_cp(), 1) + " | " +
               detail::format_double(conj.mean_time_ms() / 1000.0, 3) + " |\n";
        dec_total.solved += dec.solved;
        dec_total.total += dec.total;
        dec_total.cp_sum += dec.cp_sum;
        dec_total.time_sum += dec.time_sum;
        conj_total.solved += conj.solved;
        conj_total.total += conj.total;
        conj_total.cp_sum += conj.cp_sum;
        conj_total.time_sum += conj.time_sum;
    }
    out += "\nTOTALS\n";
    out += "- solved/total: dec " + std::to_string(dec_total.solved) + "/" +
           std::to_string(dec_total.total) + ", conj " + std::to_string(conj_total.solved) +
           "/" + std::to_string(conj_total.total) + "\n";
    out += "- avg time for solved (s): dec " +
           detail::format_double(dec_total.mean_time_ms() / 1000.0, 3) + ", conj " +
           detail::format_double(conj_total.mean_time_ms() / 1000.0, 3) + "\n";
    out += "- avg choice points for solved: dec " +
           detail::format_double(dec_total.mean_cp(), 1) + ", conj " +
           detail::format_double(conj_total.mean_cp(), 1) + "\n";
    return out;
}

inline std::string BenchReport::csv() const {
    std::string out = "n,N,seed,model,solved,satisfiable,choice_points,time_ms\n";
    for (const auto& rec : records) {
        out += std::to_string(rec.n) + "," + std::to_string(rec.max_dist) + "," +
               std::to_string(rec.seed) + "," + rec.model + "," +
               (rec.result.solved ? "1" : "0") + ",";
        if (rec.result.satisfiable)
            out += *rec.result.satisfiable ? "1" : "0";
        out += "," + std::to_string(rec.result.choice_points) + "," +
               detail::format_double(rec.result.wall_time_ms, 3) + "\n";
    }
    return out;
}

} // namespace gcl
