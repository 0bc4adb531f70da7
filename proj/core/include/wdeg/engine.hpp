#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdeg/kb.hpp"
#include "wdeg/term.hpp"

namespace wdeg {

// depth: iterative-deepening limit; nodes: judgment nodes expanded per call.
struct Budget {
    int depth = 12;
    long nodes = 50000;
    int size_cap = 48;  // largest term a rewrite may produce

    static Budget defaults();  // honours WDEG_BUDGET (node limit)
};

// One law of the rule table. Equalities are used in both directions.
struct Rule {
    std::string id;
    std::string citation;
    std::string text;
    LawTemplate law;
};

const std::vector<Rule>& rule_table();
const Rule* find_rule(const std::string& id);

// Structural rules used by the prover, with their citations.
struct StructuralRule {
    const char* id;
    const char* citation;
};
const std::vector<StructuralRule>& structural_rules();
const char* structural_citation(const std::string& id);

struct TraceNode;
using Trace = std::shared_ptr<const TraceNode>;

struct TraceNode {
    std::string rule;
    std::string citation;
    Relation relation = Relation::Leq;
    Expr lhs;
    Expr rhs;
    std::vector<int> path;   // rewrite position, operand indices from the root
    std::string detail;      // "up"/"down" for rewrites, fact text for kb leaves
    std::optional<Expr> aux; // residuation: the split-off antecedent
    std::vector<Trace> premises;
};

enum class Verdict { Proved, Refuted, Unknown };
const char* verdict_name(Verdict v);

struct Judgment {
    Verdict verdict = Verdict::Unknown;
    Relation relation = Relation::Leq;
    Expr lhs;
    Expr rhs;
    Trace trace;  // null when Unknown
    long nodes = 0;
};

struct Counterexample {
    Assignment assignment;
    Relation direction = Relation::Leq;  // always a <= instance
    Expr lhs;                            // the refuted instance lhs <= rhs
    Expr rhs;
    Trace trace;
};

struct FlagResult {
    bool holds = false;
    Trace trace;
};

struct ConsistencyReport {
    std::size_t terms = 0;
    std::size_t leq_pairs = 0;
    std::size_t nleq_facts = 0;
    std::vector<std::pair<Expr, Expr>> conflicts;  // (s,t) with both sat LEQ and KB NLEQ
    std::vector<std::pair<Expr, Expr>> prover_conflicts;
};

class Engine {
public:
    explicit Engine(const KnowledgeBase& kb);
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const KnowledgeBase& kb() const { return kb_; }

    // Accepts non-canonical input; a "fold" node records the canonicalization.
    // Throws std::invalid_argument when budget.nodes or budget.depth is <= 0.
    Judgment derive(Relation r, const Expr& lhs, const Expr& rhs, const Budget& budget = Budget::defaults()) const;

    // Assignments are tried in order of the largest candidate index used,
    // then lexicographically; the first refuted instance is returned.
    std::optional<Counterexample> refute_template(const LawTemplate& t, const std::vector<Expr>& candidates,
                                                  const Budget& budget = Budget::defaults()) const;

    FlagResult prove_pointed(const Expr& e, const Budget& budget = Budget::defaults()) const;

    // Cylinder/fractal/total fractal propagation through o and ->.
    FlagResult derive_flag(const Expr& e, Flag f) const;

    // Checks every node against the rule table; on failure *why names the node.
    bool replay(const Trace& t, std::string* why = nullptr) const;

    // Forward closure over the subterms of the KB; computed once.
    ConsistencyReport check_consistency(const Budget& spot_budget = Budget{6, 3000, 48}) const;
    std::size_t saturation_size() const;

    // Syntactic pointedness used to discharge side conditions.
    bool pointed_closure(const Expr& e) const;

    struct Impl;

private:
    const KnowledgeBase& kb_;
    std::unique_ptr<Impl> impl_;
};

std::vector<Expr> default_candidates(const KnowledgeBase& kb);

std::string trace_to_text(const Trace& t);
std::string trace_to_json(const Trace& t, int indent = 2);
std::string judgment_to_json(const Judgment& j, int indent = 2);

}  // namespace wdeg
