#pragma once

#include <chrono>
#include <sstream>
#include <string>

#include "law_items.hpp"
#include "wdeg/engine.hpp"
#include "wdeg/parse.hpp"

namespace wdeg::testing {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ProveOutcome {
    bool ok = true;
    double seconds = 0;
    long nodes = 0;
    std::string detail;  // first failure
};

// Every link of every statement must be proved with a replaying trace.
inline ProveOutcome prove_item(const Engine& E, const items::ProveItem& item, const Budget& budget = Budget::defaults()) {
    ProveOutcome out;
    ParseOptions opts{&E.kb().catalog(), true};
    auto t0 = std::chrono::steady_clock::now();
    for (const char* text : item.statements) {
        Statement s = parse_statement(text, opts);
        Expr prev = s.first;
        for (const auto& [rel, next] : s.chain) {
            Judgment j = E.derive(rel, prev, next, budget);
            out.nodes += j.nodes;
            std::string why;
            if (j.verdict != Verdict::Proved) {
                if (out.ok) out.detail = print_relation(rel, prev, next) + ": " + verdict_name(j.verdict);
                out.ok = false;
            } else if (!E.replay(j.trace, &why)) {
                if (out.ok) out.detail = print_relation(rel, prev, next) + ": replay failed: " + why;
                out.ok = false;
            }
            prev = next;
        }
    }
    out.seconds = seconds_since(t0);
    return out;
}

inline std::string assignment_text(const Assignment& a) {
    std::string s;
    for (const auto& [k, v] : a) s += (s.empty() ? "" : ", ") + k + "=" + print_expr(v);
    return s;
}

struct RefuteOutcome {
    bool ok = false;
    bool reference_match = false;
    double seconds = 0;
    std::string assignment;
    std::string detail;
};

// "a=LPO, b=c_p" with each value canonicalized
inline Assignment parse_assignment(const std::string& text, const AtomOracle* atoms) {
    Assignment a;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto eq = part.find('=');
        std::string k = part.substr(0, eq);
        k.erase(0, k.find_first_not_of(' '));
        a[k] = parse_expr(part.substr(eq + 1), ParseOptions{atoms, false});
    }
    return a;
}

inline RefuteOutcome refute_item(const Engine& E, const items::RefuteItem& item, const Budget& budget = Budget::defaults()) {
    RefuteOutcome out;
    const Catalog* atoms = &E.kb().catalog();
    LawTemplate t = parse_template(item.law, atoms);
    std::vector<Expr> pool;
    for (const char* p : item.pool) pool.push_back(parse_expr(p, ParseOptions{atoms, false}));
    auto t0 = std::chrono::steady_clock::now();
    auto cx = E.refute_template(t, pool, budget);
    out.seconds = seconds_since(t0);
    if (!cx) {
        out.detail = "no counterexample in the pool";
        return out;
    }
    out.assignment = assignment_text(cx->assignment);
    std::string why;
    if (!E.replay(cx->trace, &why)) {
        out.detail = "trace does not replay: " + why;
        return out;
    }
    out.ok = true;
    if (*item.reference) {
        // the reference may leave a variable unconstrained; compare what it names
        Assignment want = parse_assignment(item.reference, atoms);
        out.reference_match = true;
        for (const auto& [k, v] : want) {
            auto it = cx->assignment.find(k);
            if (it == cx->assignment.end() || !(it->second == v)) out.reference_match = false;
        }
    }
    return out;
}

}  // namespace wdeg::testing
