// gcl command line: grammar transforms, reductions, propagation, the
// edit-distance encoding and the benchmark harness.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcl/gcl.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gcl::Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gcl::Error("cannot write file: " + path);
    out << content;
}

gcl::Grammar load_grammar(const std::string& path) { return gcl::parse_grammar(read_file(path)); }
gcl::VarDomains load_domains(const std::string& path) {
    return gcl::parse_domains_json(read_file(path));
}
gcl::Nfa load_nfa(const std::string& path) { return gcl::parse_nfa_json(read_file(path)); }

nlohmann::json domains_to_json(const gcl::VarDomains& vd) {
    return nlohmann::json::parse(gcl::serialize_domains_json(vd));
}

// Normalizes a grammar for the CYK propagator, honoring the fast-path
// choice: "auto" uses the linear pipeline when the grammar is linear, "on"
// requires it, "off" uses the general pipeline and full split scans.
struct PreparedGrammar {
    gcl::Grammar cnf;
    gcl::CykOptions opts;
};

PreparedGrammar prepare(const gcl::Grammar& g, const std::string& fast_path) {
    PreparedGrammar prep;
    bool linear = gcl::classify(g).is_linear;
    if (fast_path == "on" && !linear)
        throw gcl::Error("--linear-fast-path on: grammar is not linear");
    if (fast_path == "off") {
        prep.cnf = gcl::classify(g).is_cnf ? g : gcl::to_cnf(g);
        prep.opts.fixed_splits = false;
    } else if (linear) {
        prep.cnf = gcl::to_linear_normal_form(g);
        prep.opts.fixed_splits = true;
    } else {
        prep.cnf = gcl::classify(g).is_cnf ? g : gcl::to_cnf(g);
        prep.opts.fixed_splits = true;
    }
    return prep;
}

int run_transform(const std::string& grammar_path, const std::string& target) {
    gcl::Grammar g = load_grammar(grammar_path);
    gcl::Grammar out;
    if (target == "cnf")
        out = gcl::to_cnf(g);
    else if (target == "linear-nf")
        out = gcl::to_linear_normal_form(g);
    else if (target == "trim")
        out = gcl::trim(g);
    else
        throw gcl::Error("unknown transform target: " + target);
    std::cout << gcl::serialize_grammar(out);
    return 0;
}

int run_reduce(const std::string& grammar_path, const std::string& mode,
               const std::string& string_arg, const std::string& domains_path) {
    gcl::Grammar g = load_grammar(grammar_path);
    if (mode == "thm1") {
        if (string_arg.empty()) throw gcl::Error("reduce --mode thm1 needs --string");
        std::vector<std::string> tokens;
        for (char c : string_arg) tokens.emplace_back(1, c);
        auto [reduced, domains] = gcl::simple_grammar_reduction(g, tokens);
        std::cout << gcl::serialize_grammar(reduced);
        std::cout << gcl::serialize_domains_json(domains) << "\n";
        return 0;
    }
    if (mode == "thm2") {
        if (domains_path.empty()) throw gcl::Error("reduce --mode thm2 needs --domains");
        auto [reduced, bitmap] = gcl::bitmap_reduction(g, load_domains(domains_path));
        std::cout << gcl::serialize_grammar(reduced);
        std::cout << bitmap << "\n";
        return 0;
    }
    throw gcl::Error("unknown reduce mode: " + mode);
}

int run_propagate(const std::string& grammar_path, const std::string& domains_path,
                  std::optional<long long> ub_z, const std::string& fast_path) {
    gcl::Grammar g = load_grammar(grammar_path);
    gcl::VarDomains d = load_domains(domains_path);
    PreparedGrammar prep = prepare(g, fast_path);

    nlohmann::json out;
    if (g.weighted()) {
        gcl::ZBound z{0, ub_z ? *ub_z : gcl::kInfWeight};
        auto res = gcl::weighted_propagate(prep.cnf, d, z, prep.opts);
        if (!res) {
            out["status"] = "disentailed";
        } else {
            out = domains_to_json(res->domains);
            out["status"] = "ok";
            out["lb_z"] = res->z.lb;
        }
    } else {
        if (ub_z) throw gcl::Error("--ub-z requires a weighted grammar");
        auto res = gcl::cyk_propagate(prep.cnf, d, prep.opts);
        if (!res) {
            out["status"] = "disentailed";
        } else {
            out = domains_to_json(*res);
            out["status"] = "ok";
        }
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_editdist(const std::string& x_path, const std::string& y_path, long long max_dist,
                 const std::string& r1_path, const std::string& r2_path,
                 const std::string& mode) {
    gcl::VarDomains dx = load_domains(x_path);
    gcl::VarDomains dy = load_domains(y_path);
    if (dx.size() != dy.size())
        throw gcl::Error("editdist: the two domain sequences must have the same length");

    gcl::EditInstance inst;
    inst.n = dx.size();
    for (const auto& dom : dx.domains) inst.x_alphabet.insert(dom.begin(), dom.end());
    for (const auto& dom : dy.domains) inst.y_alphabet.insert(dom.begin(), dom.end());
    inst.max_distance = max_dist;

    gcl::Grammar g_ed = gcl::build_edit_grammar(inst.x_alphabet, inst.y_alphabet);
    auto [z_domains, z] = gcl::encode_edit_instance(inst, dx, dy);

    gcl::Nfa r1 = r1_path.empty() ? gcl::universal_nfa(inst.x_alphabet) : load_nfa(r1_path);
    gcl::Nfa r2 = r2_path.empty() ? gcl::universal_nfa(inst.y_alphabet) : load_nfa(r2_path);

    std::optional<gcl::WeightedPropagateResult> res;
    if (mode == "conj") {
        gcl::Grammar g_and = gcl::build_conjunction_grammar(r1, r2, g_ed);
        res = gcl::weighted_propagate(gcl::to_linear_normal_form(g_and), z_domains, z);
    } else if (mode == "dec") {
        // fixpoint of the edit-distance propagator and the two Regular filters
        gcl::Grammar g_ed_nf = gcl::to_linear_normal_form(g_ed);
        const int n = inst.n;
        gcl::VarDomains cur = z_domains;
        bool failed = false;
        bool changed = true;
        gcl::Weight lb = z.lb;
        while (changed && !failed) {
            changed = false;
            auto w = gcl::weighted_propagate(g_ed_nf, cur, gcl::ZBound{lb, z.ub});
            if (!w) {
                failed = true;
                break;
            }
            if (!(w->domains == cur)) changed = true;
            cur = std::move(w->domains);
            lb = w->z.lb;

            gcl::VarDomains x_part;
            for (int i = 0; i < n; ++i) x_part.domains.push_back(cur.domains[i]);
            auto rx = gcl::regular_propagate(r1, x_part);
            if (!rx) {
                failed = true;
                break;
            }
            for (int i = 0; i < n; ++i) {
                if (rx->domains[i].size() != cur.domains[i].size()) changed = true;
                cur.domains[i] = rx->domains[i];
            }

            gcl::VarDomains y_part;  // scope order: Y_1..Y_n = reversed tail
            for (int i = 2 * n; i >= n + 1; --i) y_part.domains.push_back(cur.domains[i]);
            auto ry = gcl::regular_propagate(r2, y_part);
            if (!ry) {
                failed = true;
                break;
            }
            for (int i = 0; i < n; ++i) {
                auto& dst = cur.domains[2 * n - i];
                if (ry->domains[i].size() != dst.size()) changed = true;
                dst = ry->domains[i];
            }
        }
        if (!failed) res = gcl::WeightedPropagateResult{std::move(cur), gcl::ZBound{lb, z.ub}};
    } else {
        throw gcl::Error("unknown editdist mode: " + mode);
    }

    nlohmann::json out;
    if (!res) {
        out["status"] = "disentailed";
    } else {
        const int n = inst.n;
        gcl::VarDomains x_out, y_out;
        for (int i = 0; i < n; ++i) {
            x_out.names.push_back("X" + std::to_string(i + 1));
            x_out.domains.push_back(res->domains.domains[i]);
        }
        for (int i = 0; i < n; ++i) {
            y_out.names.push_back("Y" + std::to_string(i + 1));
            y_out.domains.push_back(res->domains.domains[2 * n - i]);
        }
        out["status"] = "ok";
        out["lb_z"] = res->z.lb;
        out["x"] = domains_to_json(x_out);
        out["y"] = domains_to_json(y_out);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_bench_cmd(const std::string& rows_arg, int instances, double timeout_ms,
                  std::uint64_t seed, const std::string& models, const std::string& out_path,
                  std::string csv_path, bool r1_whole) {
    gcl::BenchConfig config;
    config.instances = instances;
    config.timeout_ms = timeout_ms;
    config.seed = seed;
    config.r1_spans_sequence = r1_whole;
    config.run_conj = models.find("conj") != std::string::npos;
    config.run_dec = models.find("dec") != std::string::npos;
    if (!config.run_conj && !config.run_dec)
        throw gcl::Error("--models must mention conj and/or dec");

    std::stringstream rows(rows_arg);
    std::string item;
    while (std::getline(rows, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw gcl::Error("--rows expects n:N pairs");
        config.rows.push_back(
            {std::stoi(item.substr(0, colon)), std::stoll(item.substr(colon + 1))});
    }

    gcl::BenchReport report = gcl::run_bench(config);
    std::string table = report.markdown();
    if (out_path.empty()) {
        std::cout << table;
    } else {
        write_file(out_path, table);
        if (csv_path.empty()) {
            auto dot = out_path.find_last_of('.');
            csv_path = (dot == std::string::npos ? out_path : out_path.substr(0, dot)) + ".csv";
        }
    }
    if (!csv_path.empty()) write_file(csv_path, report.csv());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar constraint toolkit"};
    app.require_subcommand(1);

    std::string grammar_path, target, mode, string_arg, domains_path;
    auto* transform = app.add_subcommand("transform", "convert a grammar between forms");
    transform->add_option("--grammar", grammar_path, "grammar file")->required();
    transform->add_option("--to", target, "cnf | linear-nf | trim")->required();

    std::string red_grammar, red_mode = "thm1", red_string, red_domains;
    auto* reduce = app.add_subcommand("reduce", "rewrite an instance between membership and "
                                                "intersection form");
    reduce->add_option("--grammar", red_grammar, "grammar file")->required();
    reduce->add_option("--mode", red_mode, "thm1 | thm2")->required();
    reduce->add_option("--string", red_string, "input string (thm1)");
    reduce->add_option("--domains", red_domains, "domain JSON file (thm2)");

    std::string prop_grammar, prop_domains, fast_path = "auto";
    long long ub_z_val = -1;
    bool ub_z_set = false;
    auto* propagate = app.add_subcommand("propagate", "prune domains to the supported values");
    propagate->add_option("--grammar", prop_grammar, "grammar file")->required();
    propagate->add_option("--domains", prop_domains, "domain JSON file")->required();
    auto* ubz_opt = propagate->add_option("--ub-z", ub_z_val, "weight bound for weighted grammars");
    propagate->add_option("--linear-fast-path", fast_path, "auto | on | off")
        ->check(CLI::IsMember({"auto", "on", "off"}));

    std::string x_path, y_path, r1_path, r2_path, ed_mode = "conj";
    long long max_dist = 0;
    auto* editdist = app.add_subcommand("editdist", "propagate an edit-distance constraint");
    editdist->add_option("--x-domains", x_path, "domain JSON for the first sequence")->required();
    editdist->add_option("--y-domains", y_path, "domain JSON for the second sequence")->required();
    editdist->add_option("--max-dist", max_dist, "distance bound N")->required();
    editdist->add_option("--r1", r1_path, "automaton JSON constraining X");
    editdist->add_option("--r2", r2_path, "automaton JSON constraining Y");
    editdist->add_option("--mode", ed_mode, "conj | dec")
        ->check(CLI::IsMember({"conj", "dec"}));

    std::string rows = "15:2,20:2,25:3", models = "conj,dec", out_path, csv_path;
    int instances = 20;
    double timeout_ms = 60000;
    std::uint64_t seed = 42;
    bool r1_whole = false;
    auto* bench = app.add_subcommand("bench", "run the random-instance benchmark");
    bench->add_option("--rows", rows, "comma-separated n:N pairs");
    bench->add_option("--instances", instances, "instances per row");
    bench->add_option("--timeout-ms", timeout_ms, "per-instance timeout");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--models", models, "conj,dec");
    bench->add_option("--out", out_path, "write the markdown table here");
    bench->add_option("--csv", csv_path, "write per-instance results here");
    bench->add_flag("--r1-whole-sequence", r1_whole,
                    "apply the run-of-ones constraint to the whole sequence");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(transform)) return run_transform(grammar_path, target);
        if (app.got_subcommand(reduce))
            return run_reduce(red_grammar, red_mode, red_string, red_domains);
        if (app.got_subcommand(propagate)) {
            ub_z_set = ubz_opt->count() > 0;
            return run_propagate(prop_grammar, prop_domains,
                                 ub_z_set ? std::optional<long long>(ub_z_val) : std::nullopt,
                                 fast_path);
        }
        if (app.got_subcommand(editdist))
            return run_editdist(x_path, y_path, max_dist, r1_path, r2_path, ed_mode);
        if (app.got_subcommand(bench))
            return run_bench_cmd(rows, instances, timeout_ms, seed, models, out_path, csv_path,
                                 r1_whole);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
