#include "wdeg/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace wdeg {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Zero: return "zero";
        case Kind::One: return "one";
        case Kind::Top: return "top";
        case Kind::Atom: return "atom";
        case Kind::Sup: return "sup";
        case Kind::Inf: return "inf";
        case Kind::Prod: return "prod";
        case Kind::Comp: return "comp";
        case Kind::Impl: return "impl";
        case Kind::FinPar: return "finpar";
        case Kind::OmegaPar: return "omegapar";
    }
    return "?";
}

Expr Expr::make(Kind k, std::string name, std::vector<Expr> ops) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->ops = std::move(ops);
    std::size_t h = mix(static_cast<std::size_t>(k) * 1315423911u, std::hash<std::string>{}(n->name));
    for (const auto& c : n->ops) {
        h = mix(h, c.hash());
        n->size += c.size();
        n->has_var = n->has_var || c.has_var();
        n->has_top = n->has_top || c.has_top();
    }
    n->hash = h;
    if (k == Kind::Top) n->has_top = true;
    if (k == Kind::Atom && !n->name.empty() && n->name[0] == '?') n->has_var = true;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Expr() : Expr(zero()) {}

Expr Expr::zero() {
    static const Expr z = make(Kind::Zero, "", {});
    return z;
}
Expr Expr::one() {
    static const Expr o = make(Kind::One, "", {});
    return o;
}
Expr Expr::top() {
    static const Expr t = make(Kind::Top, "", {});
    return t;
}
Expr Expr::atom(std::string name) { return make(Kind::Atom, std::move(name), {}); }
Expr Expr::var(std::string_view name) {
    std::string n = "?";
    n += name;
    return make(Kind::Atom, std::move(n), {});
}
Expr Expr::nary(Kind k, std::vector<Expr> ops) { return make(k, "", std::move(ops)); }
Expr Expr::impl(Expr g, Expr f) { return make(Kind::Impl, "", {std::move(g), std::move(f)}); }
Expr Expr::finpar(Expr e) { return make(Kind::FinPar, "", {std::move(e)}); }
Expr Expr::omegapar(Expr e) { return make(Kind::OmegaPar, "", {std::move(e)}); }

bool Expr::is_nary() const {
    Kind k = kind();
    return k == Kind::Sup || k == Kind::Inf || k == Kind::Prod || k == Kind::Comp;
}
bool Expr::is_ac() const {
    Kind k = kind();
    return k == Kind::Sup || k == Kind::Inf || k == Kind::Prod;
}

int compare(const Expr& a, const Expr& b) {
    if (a.same_node(b)) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.kind() == Kind::Atom) {
        int c = a.name().compare(b.name());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    const auto& x = a.operands();
    const auto& y = b.operands();
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
    }
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    return compare(a, b) == 0;
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
    int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool discharge_not_top(const Expr& e) { return !e.has_top() && !e.has_var(); }

bool discharge_nonzero(const Expr& e, const AtomOracle* atoms) {
    switch (e.kind()) {
        case Kind::Zero: return false;
        case Kind::One:
        case Kind::Top:
        case Kind::FinPar: return true;
        case Kind::Atom:
            if (e.is_var()) return false;
            return atoms != nullptr && atoms->nonempty_domain(e.name());
        case Kind::Sup:
            return std::any_of(e.operands().begin(), e.operands().end(),
                               [&](const Expr& c) { return discharge_nonzero(c, atoms); });
        case Kind::Inf:
        case Kind::Prod:
        case Kind::Comp:
            return std::all_of(e.operands().begin(), e.operands().end(),
                               [&](const Expr& c) { return discharge_nonzero(c, atoms); });
        case Kind::Impl: return discharge_nonzero(e.consequent(), atoms);
        case Kind::OmegaPar: return discharge_nonzero(e.operand(0), atoms);
    }
    return false;
}

namespace {

void flatten_into(Kind k, const std::vector<Expr>& ops, std::vector<Expr>& out) {
    for (const auto& c : ops) {
        if (c.kind() == k)
            out.insert(out.end(), c.operands().begin(), c.operands().end());
        else
            out.push_back(c);
    }
}

bool others_not_top(const std::vector<Expr>& ops) {
    return std::all_of(ops.begin(), ops.end(),
                       [](const Expr& c) { return c.is(Kind::Zero) || discharge_not_top(c); });
}

}  // namespace

Expr make_canonical(Kind k, std::vector<Expr> ops, const AtomOracle* atoms) {
    switch (k) {
        case Kind::Zero: return Expr::zero();
        case Kind::One: return Expr::one();
        case Kind::Top: return Expr::top();
        case Kind::Atom: throw std::invalid_argument("make_canonical: atom");
        case Kind::Sup:
        case Kind::Inf: {
            std::vector<Expr> flat;
            flatten_into(k, ops, flat);
            Kind unit = k == Kind::Sup ? Kind::Zero : Kind::Top;
            std::vector<Expr> kept;
            for (auto& c : flat) {
                if (c.is(unit)) continue;
                if (k == Kind::Sup && c.is(Kind::Top)) return Expr::top();
                kept.push_back(std::move(c));
            }
            std::sort(kept.begin(), kept.end());
            kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
            if (kept.empty()) return k == Kind::Sup ? Expr::zero() : Expr::top();
            if (kept.size() == 1) return kept[0];
            return Expr::nary(k, std::move(kept));
        }
        case Kind::Prod:
        case Kind::Comp: {
            std::vector<Expr> flat;
            flatten_into(k, ops, flat);
            std::vector<Expr> kept;
            bool zero = false;
            for (auto& c : flat) {
                if (c.is(Kind::One)) continue;
                if (c.is(Kind::Top)) return Expr::top();
                if (c.is(Kind::Zero)) zero = true;
                kept.push_back(std::move(c));
            }
            if (zero && others_not_top(kept)) return Expr::zero();
            if (k == Kind::Prod) std::sort(kept.begin(), kept.end());
            if (kept.empty()) return Expr::one();
            if (kept.size() == 1) return kept[0];
            return Expr::nary(k, std::move(kept));
        }
        case Kind::Impl: {
            const Expr& g = ops.at(0);
            const Expr& f = ops.at(1);
            if (g.is(Kind::Top)) return Expr::zero();
            if (f.is(Kind::Zero)) return Expr::zero();
            if (g.is(Kind::Zero) && discharge_nonzero(f, atoms)) return Expr::top();
            if (f.is(Kind::Top) && discharge_not_top(g)) return Expr::top();
            return Expr::impl(g, f);
        }
        case Kind::FinPar: {
            const Expr& a = ops.at(0);
            if (a.is(Kind::Zero) || a.is(Kind::One)) return Expr::one();
            if (a.is(Kind::Top)) return Expr::top();
            return Expr::finpar(a);
        }
        case Kind::OmegaPar: {
            const Expr& a = ops.at(0);
            if (a.is(Kind::Zero) || a.is(Kind::One) || a.is(Kind::Top)) return a;
            return Expr::omegapar(a);
        }
    }
    return Expr::zero();
}

Expr canonicalize(const Expr& e, const AtomOracle* atoms) {
    switch (e.kind()) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Top:
        case Kind::Atom: return e;
        default: break;
    }
    std::vector<Expr> ops;
    ops.reserve(e.operands().size());
    for (const auto& c : e.operands()) ops.push_back(canonicalize(c, atoms));
    return make_canonical(e.kind(), std::move(ops), atoms);
}

Expr with_operand(const Expr& e, std::size_t i, Expr replacement, const AtomOracle* atoms) {
    std::vector<Expr> ops = e.operands();
    ops.at(i) = std::move(replacement);
    return make_canonical(e.kind(), std::move(ops), atoms);
}

void collect_subterms(const Expr& e, std::vector<Expr>& out) {
    out.push_back(e);
    for (const auto& c : e.operands()) collect_subterms(c, out);
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
    if (!e.has_var()) return;
    if (e.is_var()) {
        std::string n = e.name().substr(1);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
        return;
    }
    for (const auto& c : e.operands()) collect_vars(c, out);
}

void collect_atoms(const Expr& e, std::vector<std::string>& out) {
    if (e.is(Kind::Atom)) {
        if (!e.is_var() && std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
        return;
    }
    for (const auto& c : e.operands()) collect_atoms(c, out);
}

const char* relation_token(Relation r) {
    switch (r) {
        case Relation::Leq: return "<=";
        case Relation::Lt: return "<";
        case Relation::Equiv: return "==";
        case Relation::Incomp: return "><";
        case Relation::Nleq: return "!<=";
    }
    return "?";
}

const char* side_condition_name(SideCondition c) {
    switch (c) {
        case SideCondition::Pointed: return "pointed";
        case SideCondition::NotTop: return "nontop";
        case SideCondition::NotZero: return "nonzero";
    }
    return "?";
}

void LawTemplate::validate() const {
    std::vector<std::string> used;
    collect_vars(lhs, used);
    collect_vars(rhs, used);
    for (const auto& v : used)
        if (std::find(variables.begin(), variables.end(), v) == variables.end())
            throw std::invalid_argument("undeclared variable ?" + v);
    for (const auto& [v, conds] : side_conditions)
        if (std::find(variables.begin(), variables.end(), v) == variables.end())
            throw std::invalid_argument("side condition on undeclared variable ?" + v);
}

Expr substitute_expr(const Expr& e, const Assignment& a, const AtomOracle* atoms) {
    if (!e.has_var()) return e;
    if (e.is_var()) {
        auto it = a.find(e.name().substr(1));
        return it == a.end() ? e : it->second;
    }
    std::vector<Expr> ops;
    ops.reserve(e.operands().size());
    for (const auto& c : e.operands()) ops.push_back(substitute_expr(c, a, atoms));
    return make_canonical(e.kind(), std::move(ops), atoms);
}

Instance substitute(const LawTemplate& t, const Assignment& a, const AtomOracle* atoms) {
    for (const auto& v : t.variables)
        if (!a.count(v)) throw std::invalid_argument("assignment misses variable ?" + v);
    Instance inst;
    inst.lhs = canonicalize(substitute_expr(t.lhs, a, atoms), atoms);
    inst.rhs = canonicalize(substitute_expr(t.rhs, a, atoms), atoms);
    for (const auto& v : t.variables) {
        auto it = t.side_conditions.find(v);
        if (it == t.side_conditions.end()) continue;
        for (SideCondition c : it->second) inst.obligations.push_back({c, canonicalize(a.at(v), atoms)});
    }
    return inst;
}

}  // namespace wdeg
