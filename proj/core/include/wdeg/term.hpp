#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace wdeg {

enum class Kind : std::uint8_t { Zero, One, Top, Atom, Sup, Inf, Prod, Comp, Impl, FinPar, OmegaPar };

const char* kind_name(Kind k);

// Immutable shared expression node. Copies are cheap.
class Expr {
public:
    Expr();  // Zero

    static Expr zero();
    static Expr one();
    static Expr top();
    static Expr atom(std::string name);
    static Expr var(std::string_view name);  // stored as atom "?name"

    // Raw constructors: no canonicalization. Operand counts are not checked;
    // canonicalize() produces well-formed terms.
    static Expr nary(Kind k, std::vector<Expr> ops);
    static Expr sup(std::vector<Expr> ops) { return nary(Kind::Sup, std::move(ops)); }
    static Expr inf(std::vector<Expr> ops) { return nary(Kind::Inf, std::move(ops)); }
    static Expr prod(std::vector<Expr> ops) { return nary(Kind::Prod, std::move(ops)); }
    static Expr comp(std::vector<Expr> ops) { return nary(Kind::Comp, std::move(ops)); }
    static Expr impl(Expr antecedent, Expr consequent);
    static Expr finpar(Expr e);
    static Expr omegapar(Expr e);

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<Expr>& operands() const { return node_->ops; }
    const Expr& operand(std::size_t i) const { return node_->ops[i]; }
    const Expr& antecedent() const { return node_->ops[0]; }
    const Expr& consequent() const { return node_->ops[1]; }

    std::size_t hash() const { return node_->hash; }
    std::size_t size() const { return node_->size; }
    bool has_var() const { return node_->has_var; }
    bool has_top() const { return node_->has_top; }

    bool is(Kind k) const { return kind() == k; }
    bool is_var() const { return kind() == Kind::Atom && !name().empty() && name()[0] == '?'; }
    bool is_nary() const;  // Sup, Inf, Prod, Comp
    bool is_ac() const;    // Sup, Inf, Prod
    bool same_node(const Expr& o) const { return node_ == o.node_; }

    friend bool operator==(const Expr& a, const Expr& b);
    friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Expr> ops;
        std::size_t hash = 0;
        std::size_t size = 1;
        bool has_var = false;
        bool has_top = false;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Kind k, std::string name, std::vector<Expr> ops);

    std::shared_ptr<const Node> node_;
};

int compare(const Expr& a, const Expr& b);

struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Per-atom information the term layer needs: catalog membership for the
// parser, and the nonempty-domain flag for the "a != 0" discharge.
class AtomOracle {
public:
    virtual ~AtomOracle() = default;
    virtual bool is_known(const std::string& name) const = 0;
    virtual bool nonempty_domain(const std::string& name) const = 0;
};

// Syntactic discharge of "a != TOP": no TOP leaf and no variable.
bool discharge_not_top(const Expr& e);
// Syntactic discharge of "a != 0".
bool discharge_nonzero(const Expr& e, const AtomOracle* atoms);

Expr canonicalize(const Expr& e, const AtomOracle* atoms = nullptr);

// Canonical constructors: operands are assumed canonical already.
Expr make_canonical(Kind k, std::vector<Expr> ops, const AtomOracle* atoms = nullptr);

// Replace operand i of a node and renormalize that node (children already canonical).
Expr with_operand(const Expr& e, std::size_t i, Expr replacement, const AtomOracle* atoms = nullptr);

void collect_subterms(const Expr& e, std::vector<Expr>& out);
void collect_vars(const Expr& e, std::vector<std::string>& out);
void collect_atoms(const Expr& e, std::vector<std::string>& out);

enum class Relation { Leq, Lt, Equiv, Incomp, Nleq };
const char* relation_token(Relation r);

enum class SideCondition { Pointed, NotTop, NotZero };
const char* side_condition_name(SideCondition c);

struct LawTemplate {
    Expr lhs;
    Relation relation = Relation::Leq;  // Leq or Equiv
    Expr rhs;
    std::vector<std::string> variables;  // without the '?'
    std::map<std::string, std::vector<SideCondition>> side_conditions;

    // Throws std::invalid_argument if a variable is undeclared or a side
    // condition names an unknown variable.
    void validate() const;
};

struct Obligation {
    SideCondition condition;
    Expr subject;
    friend bool operator==(const Obligation&, const Obligation&) = default;
};

struct Instance {
    Expr lhs;
    Expr rhs;
    std::vector<Obligation> obligations;
};

using Assignment = std::map<std::string, Expr>;

// Replace variables (names without '?') and canonicalize. Variables not in
// the assignment are left in place.
Expr substitute_expr(const Expr& e, const Assignment& a, const AtomOracle* atoms = nullptr);

// Throws std::invalid_argument when the assignment misses a declared variable.
Instance substitute(const LawTemplate& t, const Assignment& a, const AtomOracle* atoms = nullptr);

}  // namespace wdeg

template <>
struct std::hash<wdeg::Expr> {
    std::size_t operator()(const wdeg::Expr& e) const noexcept { return e.hash(); }
};
