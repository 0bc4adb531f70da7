// wdeg: command-line front end for the degree calculus and the finite model.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wdeg/engine.hpp"
#include "wdeg/finmodel.hpp"
#include "wdeg/ideal.hpp"
#include "wdeg/kb.hpp"
#include "wdeg/parse.hpp"

using json = nlohmann::ordered_json;
using namespace wdeg;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUnknown = 2, kError = 3 };

struct Options {
    std::string facts;  // empty: default seed
    bool json = false;
};

KnowledgeBase load_kb(const Options& o) {
    return KnowledgeBase::load(o.facts.empty() ? KnowledgeBase::default_seed_path() : o.facts);
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Proved: return kOk;
        case Verdict::Refuted: return kNegative;
        case Verdict::Unknown: return kUnknown;
    }
    return kError;
}

// Raised for parse failures so main can print the caret rendering.
struct InputError {
    std::string text;
    ParseError err;
};

template <class F>
auto parsing(const std::string& text, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw InputError{text, e};
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

json trace_json(const Trace& t) { return t ? json::parse(trace_to_json(t, -1)) : json(nullptr); }

json witness_json(const fin::Witness& w) {
    json j;
    j["strong"] = w.strong;
    j["H"] = json::array();
    for (auto [x, v] : w.H) j["H"].push_back({{"x", x}, {"value", v}});
    j["K"] = json::array();
    for (auto [x, y, v] : w.K) {
        if (w.strong) j["K"].push_back({{"y", y}, {"value", v}});
        else j["K"].push_back({{"x", x}, {"y", y}, {"value", v}});
    }
    return j;
}

// ---------------------------------------------------------------- commands

int cmd_simplify(const Options& o, const std::string& text) {
    KnowledgeBase kb = load_kb(o);
    Expr e = parsing(text, [&] { return parse_expr(text, {&kb.catalog(), false}); });
    if (o.json) std::cout << json{{"status", "simplified"}, {"input", text}, {"result", print_expr(e)}}.dump(2) << "\n";
    else std::cout << print_expr(e) << "\n";
    return kOk;
}

int cmd_prove(const Options& o, const std::string& text, std::optional<long> budget_nodes) {
    KnowledgeBase kb = load_kb(o);
    Statement st = parsing(text, [&] { return parse_statement(text, {&kb.catalog(), false}); });
    Engine eng(kb);
    Budget b = Budget::defaults();
    if (budget_nodes) b.nodes = *budget_nodes;

    std::vector<Judgment> js;
    Expr prev = st.first;
    for (const auto& [rel, rhs] : st.chain) {
        js.push_back(eng.derive(rel, prev, rhs, b));
        prev = rhs;
    }
    Verdict overall = Verdict::Proved;
    for (const auto& j : js) {
        if (j.verdict == Verdict::Refuted) overall = Verdict::Refuted;
        else if (j.verdict == Verdict::Unknown && overall == Verdict::Proved) overall = Verdict::Unknown;
    }
    if (o.json) {
        json out;
        out["status"] = verdict_name(overall);
        out["statement"] = text;
        out["steps"] = json::array();
        for (const auto& j : js) out["steps"].push_back(json::parse(judgment_to_json(j, -1)));
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << verdict_name(overall) << "\n";
        for (const auto& j : js) {
            std::cout << "\n" << print_relation(j.relation, j.lhs, j.rhs) << " : " << verdict_name(j.verdict) << " (" << j.nodes
                      << " nodes)\n";
            if (j.trace) std::cout << trace_to_text(j.trace);
        }
    }
    return verdict_exit(overall);
}

int cmd_refute(const Options& o, const std::string& text, const std::string& cands, std::optional<long> budget_nodes) {
    KnowledgeBase kb = load_kb(o);
    LawTemplate t = parsing(text, [&] { return parse_template(text, &kb.catalog()); });
    std::vector<Expr> pool;
    if (cands.empty()) {
        pool = default_candidates(kb);
    } else {
        for (const auto& c : split_list(cands)) pool.push_back(parsing(c, [&] { return parse_expr(c, {&kb.catalog(), false}); }));
    }
    Engine eng(kb);
    Budget b = Budget::defaults();
    if (budget_nodes) b.nodes = *budget_nodes;
    auto cx = eng.refute_template(t, pool, b);
    if (o.json) {
        json out;
        out["status"] = cx ? "refuted" : "unknown";
        out["template"] = print_template(t);
        if (cx) {
            json a = json::object();
            for (const auto& [v, e] : cx->assignment) a[v] = print_expr(e);
            out["assignment"] = a;
            out["instance"] = {{"lhs", print_expr(cx->lhs)}, {"relation", "<="}, {"rhs", print_expr(cx->rhs)}};
            out["trace"] = trace_json(cx->trace);
        }
        std::cout << out.dump(2) << "\n";
    } else if (cx) {
        std::cout << "refuted\n";
        for (const auto& [v, e] : cx->assignment) std::cout << "  ?" << v << " = " << print_expr(e) << "\n";
        std::cout << "instance: " << print_expr(cx->lhs) << " !<= " << print_expr(cx->rhs) << "\n" << trace_to_text(cx->trace);
    } else {
        std::cout << "unknown: no counterexample among " << pool.size() << " candidates\n";
    }
    return cx ? kNegative : kUnknown;
}

int cmd_facts(const Options& o, const std::string& file, const std::string& action) {
    Options oo = o;
    if (!file.empty()) oo.facts = file;
    KnowledgeBase kb = load_kb(oo);
    if (action == "list") {
        if (o.json) {
            json out = json::array();
            for (const auto& f : kb.stated())
                out.push_back({{"relation", print_relation(f.relation, f.lhs, f.rhs)}, {"citation", f.citation}, {"line", f.line}});
            std::cout << out.dump(2) << "\n";
        } else {
            for (const auto& f : kb.stated()) std::cout << print_relation(f.relation, f.lhs, f.rhs) << "  @ \"" << f.citation << "\"\n";
            std::cout << kb.stated().size() << " stated, " << kb.expanded().size() << " expanded, "
                      << kb.catalog().names().size() << " atoms\n";
        }
        return kOk;
    }
    Engine eng(kb);
    ConsistencyReport r = eng.check_consistency();
    bool ok = r.conflicts.empty() && r.prover_conflicts.empty();
    if (o.json) {
        json c = json::array(), p = json::array();
        for (const auto& [s, t] : r.conflicts) c.push_back({print_expr(s), print_expr(t)});
        for (const auto& [s, t] : r.prover_conflicts) p.push_back({print_expr(s), print_expr(t)});
        std::cout << json{{"status", ok ? "consistent" : "inconsistent"}, {"terms", r.terms}, {"leq_pairs", r.leq_pairs},
                          {"nleq_facts", r.nleq_facts}, {"conflicts", c}, {"prover_conflicts", p}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << (ok ? "consistent" : "inconsistent") << ": " << r.terms << " terms, " << r.leq_pairs << " derived <= pairs, "
                  << r.nleq_facts << " !<= facts\n";
        for (const auto& [s, t] : r.conflicts) std::cout << "  conflict: " << print_expr(s) << " <= " << print_expr(t) << " derived, KB says !<=\n";
        for (const auto& [s, t] : r.prover_conflicts)
            std::cout << "  prover conflict: " << print_expr(s) << " <= " << print_expr(t) << "\n";
    }
    return ok ? kOk : kNegative;
}

int cmd_model_reduce(const Options& o, const std::string& file, const std::string& lhs, const std::string& rhs,
                     const std::string& spec, bool strong) {
    fin::ProblemFile pf = fin::load_problem_file(file);
    fin::Structure E = !spec.empty() ? fin::Structure::parse(spec) : pf.structure.value_or(fin::Structure::comb());
    auto get = [&](const std::string& n) {
        auto it = pf.problems.find(n);
        if (it == pf.problems.end()) throw std::invalid_argument("no problem named '" + n + "' in " + file);
        return it->second;
    };
    auto w = fin::reduces(get(lhs), get(rhs), E, strong);
    if (o.json) {
        json out{{"status", w ? "found" : "not-found"}, {"lhs", lhs}, {"rhs", rhs}, {"structure", E.to_string()}, {"strong", strong}};
        if (w) out["witness"] = witness_json(*w);
        std::cout << out.dump(2) << "\n";
    } else if (w) {
        std::cout << "found: " << lhs << (strong ? " <=sW " : " <=W ") << rhs << " in " << E.to_string() << "\n  H:";
        for (auto [x, v] : w->H) std::cout << " " << x << "->" << v;
        std::cout << "\n  K:";
        for (auto [x, y, v] : w->K) {
            if (strong) std::cout << " " << y << "->" << v;
            else std::cout << " (" << x << "," << y << ")->" << v;
        }
        std::cout << "\n";
    } else {
        std::cout << "not-found: no witness in " << E.to_string() << "\n";
    }
    return w ? kOk : kNegative;
}

int cmd_model_law(const Options& o, const std::string& law, const std::string& size, const std::string& spec) {
    LawTemplate t = parsing(law, [&] { return parse_template(law, nullptr); });
    fin::SizeSpec s = fin::SizeSpec::parse(size);
    fin::Structure E = spec.empty() ? fin::Structure::comb() : fin::Structure::parse(spec);
    auto U = fin::universe(s);
    auto rep = fin::check_law(t, U, E);
    bool ok = rep.violations == 0;
    if (o.json) {
        json out{{"status", ok ? "found" : "not-found"},  {"law", print_template(t)},     {"universe", U.size()},
                 {"structure", E.to_string()},            {"assignments", rep.assignments}, {"skipped", rep.skipped},
                 {"violations", rep.violations}};
        if (rep.first_violation) {
            json v = json::object();
            for (const auto& [k, i] : *rep.first_violation) v[k] = U[i].describe();
            out["first_violation"] = v;
            out["direction"] = rep.first_direction;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (ok ? "holds" : "violated") << ": " << rep.assignments << " assignments over " << U.size() << " problems in "
                  << E.to_string() << ", " << rep.skipped << " skipped, " << rep.violations << " violations\n";
        if (rep.first_violation) {
            std::cout << "first violation (" << rep.first_direction << "):\n";
            for (const auto& [k, i] : *rep.first_violation) std::cout << "  ?" << k << " = " << U[i].describe() << "\n";
        }
    }
    return ok ? kOk : kNegative;
}

int cmd_quotient(const Options& o, const std::string& ideal, const std::string& text, std::optional<long> budget_nodes) {
    KnowledgeBase kb = load_kb(o);
    std::vector<Expr> gens;
    for (const auto& g : split_list(ideal)) gens.push_back(parsing(g, [&] { return parse_expr(g, {&kb.catalog(), false}); }));
    Statement st = parsing(text, [&] { return parse_statement(text, {&kb.catalog(), false}); });
    if (st.chain.size() != 1 || st.chain[0].first != Relation::Leq) throw std::invalid_argument("quotient expects 'A <= B'");
    Engine eng(kb);
    IdealPresentation A = IdealPresentation::of(gens, &kb.catalog());
    if (budget_nodes) A.budget.nodes = *budget_nodes;
    QuotientResult r = quotient_leq(eng, st.first, st.chain[0].second, A);
    if (o.json) {
        json out{{"status", answer_name(r.answer)}, {"lhs", print_expr(st.first)}, {"rhs", print_expr(st.chain[0].second)}};
        json g = json::array();
        for (const auto& e : A.generators) g.push_back(print_expr(e));
        out["ideal"] = g;
        if (r.witness) out["witness"] = print_expr(*r.witness);
        if (!r.reason.empty()) out["reason"] = r.reason;
        out["trace"] = trace_json(r.trace);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << answer_name(r.answer);
        if (r.witness) std::cout << ": c = " << print_expr(*r.witness);
        if (!r.reason.empty()) std::cout << " (" << r.reason << ")";
        std::cout << "\n";
        if (r.trace) std::cout << trace_to_text(r.trace);
    }
    return r.answer == Answer::Yes ? kOk : r.answer == Answer::No ? kNegative : kUnknown;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wdeg: symbolic calculus for Weihrauch degrees with a finite-model oracle"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--facts", opt.facts, "fact file (default: shipped seed; WDEG_FACTS overrides it)");
    app.add_flag("--json", opt.json, "machine-readable output");

    std::string expr, stmt, tmpl, cands, file, action = "list", lhs, rhs, spec, law, size, ideal;
    std::optional<long> budget;
    bool strong = false, exhaustive = false;

    auto* simplify = app.add_subcommand("simplify", "canonical form of an expression");
    simplify->add_option("EXPR", expr)->required();

    auto* prove = app.add_subcommand("prove", "prove or refute a statement");
    prove->add_option("STATEMENT", stmt)->required();
    prove->add_option("--budget", budget, "node limit per relation")->check(CLI::PositiveNumber);
    prove->add_flag("--json", opt.json);

    auto* refute = app.add_subcommand("refute", "search counterexamples to a law template");
    refute->add_option("TEMPLATE", tmpl)->required();
    refute->add_option("--candidates", cands, "comma-separated ground expressions");
    refute->add_option("--budget", budget)->check(CLI::PositiveNumber);
    refute->add_flag("--json", opt.json);

    auto* facts = app.add_subcommand("facts", "inspect or check a fact file");
    facts->add_option("--file", file);
    facts->add_option("ACTION", action)->check(CLI::IsMember({"list", "check"}));
    facts->add_flag("--json", opt.json);

    auto* model = app.add_subcommand("model", "finite-model queries");
    model->require_subcommand(1);
    auto* reduce = model->add_subcommand("reduce", "search a reduction witness");
    reduce->add_option("--problems", file)->required();
    reduce->add_option("--lhs", lhs)->required();
    reduce->add_option("--rhs", rhs)->required();
    reduce->add_option("--structure", spec, "full | comb:D[:constants=LIST]");
    reduce->add_flag("--strong", strong);
    reduce->add_flag("--json", opt.json);
    auto* mlaw = model->add_subcommand("law", "check a law over a whole universe");
    mlaw->add_option("--law", law)->required();
    mlaw->add_option("--size", size, "in=N,out=M,sol=K")->required();
    mlaw->add_option("--structure", spec);
    mlaw->add_flag("--exhaustive", exhaustive, "check every assignment (the only mode)");
    mlaw->add_flag("--json", opt.json);

    auto* quot = app.add_subcommand("quotient", "decide A <= B modulo an ideal");
    quot->add_option("--ideal", ideal, "comma-separated generators")->required();
    quot->add_option("STATEMENT", stmt)->required();
    quot->add_option("--budget", budget)->check(CLI::PositiveNumber);
    quot->add_flag("--json", opt.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*simplify) return cmd_simplify(opt, expr);
        if (*prove) return cmd_prove(opt, stmt, budget);
        if (*refute) return cmd_refute(opt, tmpl, cands, budget);
        if (*facts) return cmd_facts(opt, file, action);
        if (*reduce) return cmd_model_reduce(opt, file, lhs, rhs, spec, strong);
        if (*mlaw) return cmd_model_law(opt, law, size, spec);
        if (*quot) return cmd_quotient(opt, ideal, stmt, budget);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.err.what() << "\n" << render_error(e.text, e.err) << "\n";
        return kError;
    } catch (const fin::ProblemFileError& e) {
        std::cerr << "error: line " << e.line << ": " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
