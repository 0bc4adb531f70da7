#include "wdeg/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "wdeg/parse.hpp"

namespace wdeg {

// ---------------------------------------------------------------- budget

Budget Budget::defaults() {
    Budget b;
    if (const char* env = std::getenv("WDEG_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) b.nodes = v;
    }
    return b;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Proved: return "proved";
        case Verdict::Refuted: return "refuted";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

// ---------------------------------------------------------------- rule table

namespace {

struct RuleSpec {
    const char* id;
    const char* citation;
    const char* text;
};

// Order matters: rewrites are generated in this order.
const RuleSpec kRuleSpecs[] = {
    {"lat-dist-1", "Thm distributive lattice", "?a /\\ (?b \\/ ?c) == (?a /\\ ?b) \\/ (?a /\\ ?c)"},
    {"lat-dist-2", "Thm distributive lattice", "?a \\/ (?b /\\ ?c) == (?a \\/ ?b) /\\ (?a \\/ ?c)"},
    {"const-3", "Obs constants (3)", "1 -> ?a == ?a"},
    {"const-9", "Obs constants (9)", "?a -> ?a <= 1"},
    {"order-inf-prod", "Prop order of operations", "?a /\\ ?b <= ?a x ?b"},
    {"order-prod-comp", "Prop order of operations", "?a x ?b <= ?a o ?b"},
    {"unary-1a", "Prop unary operators (1)", "?a <= ?a^*"},
    {"unary-1b", "Prop unary operators (1)", "?a^*^* <= ?a^*"},
    {"unary-1c", "Prop unary operators (1)", "?a <= ?a^w"},
    {"unary-1d", "Prop unary operators (1)", "?a^w^w <= ?a^w"},
    {"unary-2a", "Prop unary operators (2)", "?a^*^w == ?a^w^*"},
    {"unary-2b", "Prop unary operators (2)", "?a^w^* == (?a \\/ 1)^w"},
    {"ub-1", "Prop unary operators distributing (1)", "(?a \\/ ?b)^* == ?a^* x ?b^*"},
    {"ub-2", "Prop unary operators distributing (2)", "(?a x ?b)^* <= ?a^* x ?b^*"},
    {"ub-3", "Prop unary operators distributing (3)", "(?a /\\ ?b)^* == ?a^* /\\ ?b^*"},
    {"ub-4", "Prop unary operators distributing (4)", "(?a o ?b)^* <= ?a^* o ?b^*"},
    {"ub-5", "Prop unary operators distributing (5)", "?a^w x ?b^w <= (?a \\/ ?b)^w"},
    {"ub-6", "Prop unary operators distributing (6)", "?a^w \\/ ?b^w <= (?a \\/ ?b)^w"},
    {"ub-7", "Prop unary operators distributing (7)", "(?a x ?b)^w == ?a^w x ?b^w"},
    {"ub-8", "Prop unary operators distributing (8)", "(?a /\\ ?b)^w <= ?a^w /\\ ?b^w"},
    {"ub-9", "Prop unary operators distributing (9)", "(?a o ?b)^w <= ?a^w o ?b^w"},
    {"ic-1", "Prop implication, compositional products (1)", "?a -> (?b -> ?c) == (?b o ?a) -> ?c"},
    {"ic-2", "Prop implication, compositional products (2)", "?a -> (?b o ?c) <= (?a -> ?b) o ?c"},
    {"ic-3", "Prop implication, compositional products (3)", "(?a \\/ ?b) -> ?c <= (?a -> ?c) /\\ (?b -> ?c)"},
    {"ic-4", "Prop implication, compositional products (4)", "(?a -> ?c) \\/ (?b -> ?c) <= (?a /\\ ?b) -> ?c"},
    {"ic-5", "Prop implication, compositional products (5)", "?a x (?b o ?c) <= (?b o (?a x ?c)) /\\ ((?a x ?b) o ?c)"},
    {"ic-6", "Prop implication, compositional products (6)", "(?a o ?c) x (?b o ?d) <= (?a x ?b) o (?c x ?d)"},
    {"ic-7", "Prop implication, compositional products (7)", "(?a o ?c) /\\ (?b o ?d) <= (?a /\\ ?b) o (?c x ?d)"},
    {"ic-8", "Prop implication, compositional products (8)", "(?a -> 1) o ?b == (?a -> 1) x ?b"},
    {"ic-9", "Prop implication, compositional products (9)", "(?a /\\ 1) -> 1 == ?a -> 1 where ?a != TOP"},
    {"fd-1", "Prop further distributivity (1)", "?a x (?b \\/ ?c) == (?a x ?b) \\/ (?a x ?c)"},
    {"fd-2", "Prop further distributivity (2)", "?a o (?b \\/ ?c) == (?a o ?b) \\/ (?a o ?c)"},
    {"fd-3", "Prop further distributivity (3)", "(?b o ?a) \\/ (?c o ?a) <= (?b \\/ ?c) o ?a"},
    {"fd-4", "Prop further distributivity (4)", "(?b /\\ ?c) o ?a <= (?b o ?a) /\\ (?c o ?a)"},
    {"fd-5", "Prop further distributivity (5)", "?a x (?b /\\ ?c) <= (?a x ?b) /\\ (?a x ?c)"},
    {"fd-6", "Prop further distributivity (6)", "?a o (?b /\\ ?c) == (?a o ?b) /\\ (?a o ?c)"},
    {"fd-7", "Prop further distributivity (7)", "?a \\/ (?b x ?c) <= (?a \\/ ?b) x (?a \\/ ?c)"},
    {"fd-8", "Prop further distributivity (8)", "?a \\/ (?b o ?c) <= (?a \\/ ?b) o (?a \\/ ?c)"},
    {"fd-9", "Prop further distributivity (9)", "?a /\\ (?b x ?c) <= (?a /\\ ?b) x (?a /\\ ?c)"},
    {"fd-10", "Prop further distributivity (10)", "?a -> (?b \\/ ?c) == (?a -> ?b) \\/ (?a -> ?c)"},
    {"fd-11", "Prop further distributivity (11)", "(?a -> ?b) x (?a -> ?c) <= ?a -> (?b x ?c)"},
    {"fd-12", "Prop further distributivity (12)", "(?a x ?b) -> ?c <= (?a -> ?c) x (?b -> ?c)"},
    {"fd-13", "Prop further distributivity (13)", "?a -> (?b /\\ ?c) <= (?a -> ?b) /\\ (?a -> ?c)"},
    {"fd-14", "Prop further distributivity (14)", "(?a o ?b) -> ?c <= (?a -> ?c) o (?b -> ?c)"},
    {"fd-15", "Prop further distributivity (15)", "?a x (?b o ?c) <= (?a x ?b) o (?a x ?c)"},
    {"pt-order", "Prop order of operations, pointed", "?a \\/ ?b <= ?a x ?b where pointed(?a), pointed(?b)"},
    {"pt-fd", "Prop further distributivity, pointed",
     "?a /\\ (?b o ?c) <= (?a /\\ ?b) o (?a /\\ ?c) where pointed(?b), pointed(?c)"},
    {"pt-unary-1", "Prop unary operators, pointed (1)", "(?a x ?b)^* == ?a^* x ?b^* where pointed(?a), pointed(?b)"},
    {"pt-unary-2", "Prop unary operators, pointed (2)", "(?a \\/ ?b)^w == ?a^w x ?b^w where pointed(?a), pointed(?b)"},
    {"sp-1", "Prop special expressions (1)", "?a -> (?a \\/ ?b) == ?a -> (1 \\/ ?b) where pointed(?a)"},
    {"sp-2", "Prop special expressions (2)", "(?c \\/ ?b) -> (?c \\/ ?a) <= ?b -> ?a where pointed(?a)"},
};

const StructuralRule kStructural[] = {
    {"refl", "Def Weihrauch reducibility (reflexivity)"},
    {"bottom", "Obs constants (1)"},
    {"top", "Obs constants (1)"},
    {"kb", "knowledge base"},
    {"kb-neg", "knowledge base"},
    {"trans", "Def Weihrauch reducibility (transitivity)"},
    {"fold", "canonical form: Obs constants (2)-(8), Prop unary operators (3), Thm distributive lattice"},
    {"sup-lub", "Thm distributive lattice (supremum)"},
    {"sup-ub", "Thm distributive lattice (supremum)"},
    {"inf-glb", "Thm distributive lattice (infimum)"},
    {"inf-lb", "Thm distributive lattice (infimum)"},
    {"mono-prod", "Prop monotonicity of x"},
    {"mono-comp", "Prop monotonicity of o"},
    {"mono-impl", "Prop -> monotone in the second component and anti-monotone in the first"},
    {"mono-finpar", "Prop unary operators (1)"},
    {"mono-omegapar", "Prop unary operators (1)"},
    {"residuation-r", "Cor residuation"},
    {"residuation-l", "Cor residuation"},
    {"pointed-prod", "pointed closure"},
    {"pointed-comp", "pointed closure"},
    {"pointed-finpar", "pointed closure"},
    {"pointed-omegapar", "pointed closure"},
    {"pointed-impl", "pointed closure: 1 -> a reduces to b -> a"},
    {"equiv", "two reductions"},
    {"lt", "reduction and non-reduction"},
    {"incomp", "two non-reductions"},
    {"sandwich", "u <= lhs, rhs <= v, u !<= v"},
    {"flag", "atom catalog"},
    {"cylinder-comp", "Lemma f o g is a cylinder"},
    {"fractal-comp", "Prop f o g is a fractal whenever f and g are fractals"},
    {"fractal-impl", "Prop (g -> f) is a (total) fractal"},
};

std::vector<Rule> build_rules() {
    std::vector<Rule> out;
    for (const auto& s : kRuleSpecs) {
        Rule r;
        r.id = s.id;
        r.citation = s.citation;
        r.text = s.text;
        r.law = parse_template(s.text);
        out.push_back(std::move(r));
    }
    return out;
}

// A usable direction of a rule: from <= to.
struct Dirn {
    const Rule* rule;
    std::string id;
    Expr from;
    Expr to;
    std::vector<std::string> from_vars;
    std::vector<std::string> to_vars;
};

const std::vector<Dirn>& directions() {
    static const std::vector<Dirn> dirs = [] {
        std::vector<Dirn> d;
        for (const auto& r : rule_table()) {
            auto add = [&](std::string id, const Expr& f, const Expr& t) {
                Dirn x{&r, std::move(id), f, t, {}, {}};
                collect_vars(f, x.from_vars);
                collect_vars(t, x.to_vars);
                d.push_back(std::move(x));
            };
            add(r.id, r.law.lhs, r.law.rhs);
            if (r.law.relation == Relation::Equiv) add(r.id + ".rev", r.law.rhs, r.law.lhs);
        }
        return d;
    }();
    return dirs;
}

const Dirn* find_dirn(const std::string& id) {
    for (const auto& d : directions())
        if (d.id == id) return &d;
    return nullptr;
}

}  // namespace

const std::vector<Rule>& rule_table() {
    static const std::vector<Rule> rules = build_rules();
    return rules;
}

const Rule* find_rule(const std::string& id) {
    for (const auto& r : rule_table())
        if (r.id == id) return &r;
    return nullptr;
}

const std::vector<StructuralRule>& structural_rules() {
    static const std::vector<StructuralRule> v(std::begin(kStructural), std::end(kStructural));
    return v;
}

const char* structural_citation(const std::string& id) {
    for (const auto& s : kStructural)
        if (id == s.id) return s.citation;
    return "";
}

// ---------------------------------------------------------------- matching

namespace {

struct PairKey {
    Expr a, b;
    bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};
struct PairHash {
    std::size_t operator()(const PairKey& k) const { return k.a.hash() * 1000003u ^ k.b.hash(); }
};

using Cont = std::function<void()>;

class Matcher {
public:
    explicit Matcher(const AtomOracle* atoms) : atoms_(atoms) {}

    std::vector<std::pair<std::string, Expr>> binding;

    const Expr* lookup(const std::string& n) const {
        for (const auto& [k, v] : binding)
            if (k == n) return &v;
        return nullptr;
    }

    Assignment assignment() const {
        Assignment a;
        for (const auto& [k, v] : binding) a[k.substr(1)] = v;
        return a;
    }

    void match(const Expr& p, const Expr& t, const Cont& k) {
        if (p.is_var()) {
            if (const Expr* v = lookup(p.name())) {
                if (*v == t) k();
                return;
            }
            binding.emplace_back(p.name(), t);
            k();
            binding.pop_back();
            return;
        }
        if (!p.has_var()) {
            if (p == t) k();
            return;
        }
        if (p.kind() != t.kind()) return;
        switch (p.kind()) {
            case Kind::Impl:
                match(p.antecedent(), t.antecedent(), [&] { match(p.consequent(), t.consequent(), k); });
                return;
            case Kind::FinPar:
            case Kind::OmegaPar: match(p.operand(0), t.operand(0), k); return;
            case Kind::Sup:
            case Kind::Inf:
            case Kind::Prod: match_ac(p.kind(), p.operands(), t.operands(), k); return;
            case Kind::Comp: match_seq(p.operands(), t.operands(), 0, 0, k); return;
            default: return;
        }
    }

private:
    Expr group(Kind k, std::vector<Expr> g) const {
        if (g.size() == 1) return g[0];
        return make_canonical(k, std::move(g), atoms_);
    }

    void match_ac(Kind kind, const std::vector<Expr>& ps, const std::vector<Expr>& ts, const Cont& k) {
        std::vector<const Expr*> nonvar, vars;
        for (const auto& p : ps) (p.is_var() ? vars : nonvar).push_back(&p);
        if (ps.size() > ts.size()) return;
        if (vars.empty() && nonvar.size() != ts.size()) return;
        std::vector<char> used(ts.size(), 0);
        std::function<void(std::size_t)> assign_var;
        std::function<void(std::size_t)> assign_nonvar = [&](std::size_t i) {
            if (i == nonvar.size()) {
                assign_var(0);
                return;
            }
            for (std::size_t j = 0; j < ts.size(); ++j) {
                if (used[j]) continue;
                bool dup = false;
                for (std::size_t q = 0; q < j && !dup; ++q) dup = !used[q] && ts[q] == ts[j];
                if (dup) continue;
                used[j] = 1;
                match(*nonvar[i], ts[j], [&] { assign_nonvar(i + 1); });
                used[j] = 0;
            }
        };
        assign_var = [&](std::size_t i) {
            if (i == vars.size()) {
                if (std::all_of(used.begin(), used.end(), [](char c) { return c != 0; })) k();
                return;
            }
            const std::string& name = vars[i]->name();
            if (const Expr* v = lookup(name)) {
                std::vector<Expr> need = v->kind() == kind ? v->operands() : std::vector<Expr>{*v};
                std::vector<std::size_t> taken;
                for (const auto& n : need) {
                    bool found = false;
                    for (std::size_t j = 0; j < ts.size(); ++j)
                        if (!used[j] && ts[j] == n) {
                            used[j] = 1;
                            taken.push_back(j);
                            found = true;
                            break;
                        }
                    if (!found) break;
                }
                if (taken.size() == need.size()) assign_var(i + 1);
                for (auto j : taken) used[j] = 0;
                return;
            }
            std::vector<std::size_t> free;
            for (std::size_t j = 0; j < ts.size(); ++j)
                if (!used[j]) free.push_back(j);
            if (free.empty() || free.size() > 12) return;
            std::size_t m = free.size();
            unsigned full = (1u << m) - 1;
            bool last = i + 1 == vars.size();
            for (unsigned mask = last ? full : 1; mask <= full; ++mask) {
                std::vector<Expr> g;
                for (std::size_t q = 0; q < m; ++q)
                    if (mask & (1u << q)) g.push_back(ts[free[q]]);
                for (std::size_t q = 0; q < m; ++q)
                    if (mask & (1u << q)) used[free[q]] = 1;
                binding.emplace_back(name, group(kind, std::move(g)));
                assign_var(i + 1);
                binding.pop_back();
                for (std::size_t q = 0; q < m; ++q)
                    if (mask & (1u << q)) used[free[q]] = 0;
            }
        };
        assign_nonvar(0);
    }

    void match_seq(const std::vector<Expr>& ps, const std::vector<Expr>& ts, std::size_t i, std::size_t j,
                   const Cont& k) {
        if (i == ps.size()) {
            if (j == ts.size()) k();
            return;
        }
        if (j >= ts.size()) return;
        std::size_t rest = ps.size() - i - 1;
        if (ts.size() - j < rest + 1) return;
        const Expr& p = ps[i];
        if (p.is_var()) {
            if (const Expr* v = lookup(p.name())) {
                std::vector<Expr> need = v->is(Kind::Comp) ? v->operands() : std::vector<Expr>{*v};
                if (j + need.size() > ts.size()) return;
                for (std::size_t q = 0; q < need.size(); ++q)
                    if (!(ts[j + q] == need[q])) return;
                match_seq(ps, ts, i + 1, j + need.size(), k);
                return;
            }
            std::size_t max_len = ts.size() - j - rest;
            for (std::size_t len = rest == 0 ? max_len : 1; len <= max_len; ++len) {
                std::vector<Expr> seg(ts.begin() + static_cast<long>(j), ts.begin() + static_cast<long>(j + len));
                binding.emplace_back(p.name(), group(Kind::Comp, std::move(seg)));
                match_seq(ps, ts, i + 1, j + len, k);
                binding.pop_back();
            }
            return;
        }
        match(p, ts[j], [&] { match_seq(ps, ts, i + 1, j + 1, k); });
    }

    const AtomOracle* atoms_;
};

// One rewrite of a whole term: result is the rewritten term.
struct Step {
    Expr result;
    std::vector<int> path;
    std::string id;   // direction id, or "kb"
    int fact = -1;    // expanded fact index for kb rewrites
};

enum class Dir { Up, Down };

}  // namespace

// ---------------------------------------------------------------- engine internals

struct Engine::Impl {
    const KnowledgeBase& kb;
    const Catalog* cat;

    explicit Impl(const KnowledgeBase& k) : kb(k), cat(&k.catalog()) {}

    // saturation state
    std::once_flag sat_once;
    struct Just {
        std::uint8_t kind = 0;  // see SatKind
        int x = -1;
        int y = -1;
    };
    enum SatKind : std::uint8_t {
        SRefl = 1, SBottom, STop, SKb, SStep, STrans, SLub, SGlb, SUb, SLb, SMono, SPointProd, SPointComp,
        SPointFin, SPointOmega, SPointImpl
    };
    std::vector<Expr> terms;
    std::unordered_map<Expr, int> index;
    std::vector<std::vector<std::uint64_t>> rel;
    std::vector<Just> just;
    std::vector<Step> sat_steps;
    std::vector<Dir> sat_step_dir;
    std::vector<Expr> sat_step_src;
    std::size_t words = 0;

    bool bit(int i, int j) const { return (rel[i][j >> 6] >> (j & 63)) & 1u; }
    bool set_bit(int i, int j, Just js) {
        if (bit(i, j)) return false;
        rel[i][j >> 6] |= (std::uint64_t{1} << (j & 63));
        just[static_cast<std::size_t>(i) * terms.size() + j] = js;
        return true;
    }
    int idx(const Expr& e) const {
        auto it = index.find(e);
        return it == index.end() ? -1 : it->second;
    }

    void ensure_saturated() const { std::call_once(const_cast<Impl*>(this)->sat_once, [this] { const_cast<Impl*>(this)->saturate(); }); }
    void saturate();
    Trace sat_trace(int i, int j, std::unordered_map<long, Trace>& memo) const;
    Trace sat_lookup(const Expr& a, const Expr& b) const {
        ensure_saturated();
        int i = idx(a), j = idx(b);
        if (i < 0 || j < 0 || !bit(i, j)) return nullptr;
        std::unordered_map<long, Trace> memo;
        return sat_trace(i, j, memo);
    }

    // reductions closed by earlier derive calls, reused as leaves
    mutable std::mutex lemma_mu;
    mutable std::unordered_map<PairKey, Trace, PairHash> lemmas;
    Trace lemma(const Expr& a, const Expr& b) const {
        std::lock_guard<std::mutex> g(lemma_mu);
        auto it = lemmas.find(PairKey{a, b});
        return it == lemmas.end() ? nullptr : it->second;
    }
    void remember(const Expr& a, const Expr& b, const Trace& t) const {
        std::lock_guard<std::mutex> g(lemma_mu);
        if (lemmas.size() < (1u << 16)) lemmas.emplace(PairKey{a, b}, t);
    }

    bool pointed_closure(const Expr& e) const;
    bool side_ok(const Dirn& d, const Matcher& m) const;

    void local_rewrites(const Expr& e, bool forward, std::size_t cap, std::vector<std::pair<Expr, Step>>& out) const;
    std::vector<Step> steps(const Expr& root, Dir dir, std::size_t cap) const;
    Expr replace_at(const Expr& root, const std::vector<int>& path, std::size_t i, const Expr& r) const;

    Trace rewrite_node(const Step& s, const Expr& src, Dir dir) const;
};

namespace {

Trace mk(std::string rule, Relation rel, Expr lhs, Expr rhs, std::vector<Trace> premises = {},
         std::string citation = "") {
    auto n = std::make_shared<TraceNode>();
    n->citation = citation.empty() ? structural_citation(rule) : citation;
    n->rule = std::move(rule);
    n->relation = rel;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->premises = std::move(premises);
    return n;
}

Trace kb_node(const Fact& f, bool negative) {
    auto n = std::make_shared<TraceNode>();
    n->rule = negative ? "kb-neg" : "kb";
    n->citation = f.citation;
    n->relation = negative ? Relation::Nleq : Relation::Leq;
    n->lhs = f.lhs;
    n->rhs = f.rhs;
    return n;
}

Trace trans(const Trace& a, const Trace& b) {
    if (a->rule == "refl") return b;
    if (b->rule == "refl") return a;
    return mk("trans", Relation::Leq, a->lhs, b->rhs, {a, b});
}

}  // namespace

bool Engine::Impl::pointed_closure(const Expr& e) const {
    switch (e.kind()) {
        case Kind::One:
        case Kind::Top: return true;
        case Kind::Zero: return false;
        case Kind::Atom:
            if (e.is_var()) return false;
            if (cat->has_flag(e.name(), Flag::Pointed)) return true;
            return kb.find_leq(Expr::one(), e) != nullptr;
        case Kind::Sup:
            return std::any_of(e.operands().begin(), e.operands().end(),
                               [&](const Expr& c) { return pointed_closure(c); });
        case Kind::Inf:
        case Kind::Prod:
        case Kind::Comp:
            if (std::all_of(e.operands().begin(), e.operands().end(),
                            [&](const Expr& c) { return pointed_closure(c); }))
                return true;
            break;
        case Kind::FinPar:
        case Kind::OmegaPar:
            if (pointed_closure(e.operand(0))) return true;
            break;
        case Kind::Impl:
            if (pointed_closure(e.consequent())) return true;
            break;
    }
    return kb.find_leq(Expr::one(), e) != nullptr;
}

bool Engine::Impl::side_ok(const Dirn& d, const Matcher& m) const {
    for (const auto& [var, conds] : d.rule->law.side_conditions) {
        const Expr* v = m.lookup("?" + var);
        if (!v) return false;
        for (auto c : conds) {
            switch (c) {
                case SideCondition::Pointed:
                    if (!pointed_closure(*v)) return false;
                    break;
                case SideCondition::NotTop:
                    if (!discharge_not_top(*v)) return false;
                    break;
                case SideCondition::NotZero:
                    if (!discharge_nonzero(*v, cat)) return false;
                    break;
            }
        }
    }
    return true;
}

Expr Engine::Impl::replace_at(const Expr& root, const std::vector<int>& path, std::size_t i, const Expr& r) const {
    if (i == path.size()) return r;
    std::size_t c = static_cast<std::size_t>(path[i]);
    return with_operand(root, c, replace_at(root.operand(c), path, i + 1, r), cat);
}

namespace {

// Proper sub-collections of an n-ary node: subsets (AC) or segments (o).
template <class F>
void for_each_subcollection(const Expr& e, std::size_t min_size, F&& f) {
    const auto& ops = e.operands();
    std::size_t n = ops.size();
    if (n < 3 || n > 7) return;
    min_size = std::max<std::size_t>(min_size, 2);
    if (e.is(Kind::Comp)) {
        for (std::size_t len = min_size; len < n; ++len)
            for (std::size_t s = 0; s + len <= n; ++s) {
                std::vector<Expr> seg(ops.begin() + static_cast<long>(s), ops.begin() + static_cast<long>(s + len));
                auto rebuild = [&, s, len](const Expr& r) {
                    std::vector<Expr> out(ops.begin(), ops.begin() + static_cast<long>(s));
                    out.push_back(r);
                    out.insert(out.end(), ops.begin() + static_cast<long>(s + len), ops.end());
                    return out;
                };
                f(Expr::nary(Kind::Comp, std::move(seg)), rebuild);
            }
        return;
    }
    unsigned full = (1u << n) - 1;
    std::set<std::vector<Expr>> seen;
    for (unsigned mask = 1; mask < full; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) < min_size) continue;
        std::vector<Expr> sub, rest;
        for (std::size_t q = 0; q < n; ++q) ((mask & (1u << q)) ? sub : rest).push_back(ops[q]);
        if (!seen.insert(sub).second) continue;
        auto rebuild = [rest](const Expr& r) {
            std::vector<Expr> out = rest;
            out.push_back(r);
            return out;
        };
        f(Expr::nary(e.kind(), std::move(sub)), rebuild);
    }
}

}  // namespace

void Engine::Impl::local_rewrites(const Expr& e, bool forward, std::size_t cap,
                                  std::vector<std::pair<Expr, Step>>& out) const {
    // KB ground rewrites first
    auto kb_at = [&](const Expr& t, auto&& emit) {
        const auto& idxs = forward ? kb.leq_from(t) : kb.leq_to(t);
        for (int fi : idxs) {
            const Fact& f = kb.expanded()[static_cast<std::size_t>(fi)];
            if (f.lhs.is(Kind::One)) continue;  // pointedness is handled by the closure rules
            emit(forward ? f.rhs : f.lhs, fi);
        }
    };
    kb_at(e, [&](const Expr& r, int fi) { out.push_back({r, Step{r, {}, "kb", fi}}); });
    if (e.is_nary()) {
        for_each_subcollection(e, 2, [&](const Expr& sub, auto&& rebuild) {
            kb_at(sub, [&](const Expr& r, int fi) {
                Expr whole = make_canonical(e.kind(), rebuild(r), cat);
                out.push_back({whole, Step{whole, {}, "kb", fi}});
            });
        });
    }
    Matcher m(cat);
    for (const auto& d : directions()) {
        const Expr& pat = forward ? d.from : d.to;
        const Expr& prod = forward ? d.to : d.from;
        const auto& pat_vars = forward ? d.from_vars : d.to_vars;
        const auto& prod_vars = forward ? d.to_vars : d.from_vars;
        if (pat.is_var()) continue;
        bool covered = std::all_of(prod_vars.begin(), prod_vars.end(), [&](const std::string& v) {
            return std::find(pat_vars.begin(), pat_vars.end(), v) != pat_vars.end();
        });
        if (!covered) continue;
        auto emit_for = [&](const Expr& target, auto&& wrap) {
            m.binding.clear();
            m.match(pat, target, [&] {
                if (!side_ok(d, m)) return;
                Expr r = substitute_expr(prod, m.assignment(), cat);
                if (r.size() > cap) return;
                Expr whole = wrap(r);
                out.push_back({whole, Step{whole, {}, d.id, -1}});
            });
        };
        if (pat.kind() == e.kind() || !pat.has_var()) emit_for(e, [](const Expr& r) { return r; });
        if (pat.kind() == e.kind() && e.is_nary()) {
            for_each_subcollection(e, pat.operands().size(), [&](const Expr& sub, auto&& rebuild) {
                emit_for(sub, [&](const Expr& r) { return make_canonical(e.kind(), rebuild(r), cat); });
            });
        }
    }
}

std::vector<Step> Engine::Impl::steps(const Expr& root, Dir dir, std::size_t cap) const {
    std::vector<Step> out;
    std::unordered_set<Expr> seen;
    std::vector<int> path;
    std::function<void(const Expr&, bool)> visit = [&](const Expr& e, bool positive) {
        bool forward = (dir == Dir::Up) == positive;
        std::vector<std::pair<Expr, Step>> local;
        local_rewrites(e, forward, cap, local);
        for (auto& [sub, st] : local) {
            if (sub == e) continue;
            Expr whole = replace_at(root, path, 0, sub);
            if (whole == root || whole.size() > cap) continue;
            if (!seen.insert(whole).second) continue;
            st.result = whole;
            st.path = path;
            out.push_back(std::move(st));
        }
        for (std::size_t i = 0; i < e.operands().size(); ++i) {
            bool pol = (e.is(Kind::Impl) && i == 0) ? !positive : positive;
            path.push_back(static_cast<int>(i));
            visit(e.operand(i), pol);
            path.pop_back();
        }
    };
    visit(root, true);
    return out;
}

Trace Engine::Impl::rewrite_node(const Step& s, const Expr& src, Dir dir) const {
    auto n = std::make_shared<TraceNode>();
    n->rule = s.id == "kb" ? "kb-rewrite" : s.id;
    if (s.id == "kb") {
        n->citation = kb.expanded()[static_cast<std::size_t>(s.fact)].citation;
    } else {
        const Dirn* d = find_dirn(s.id);
        n->citation = d ? d->rule->citation : "";
    }
    n->relation = Relation::Leq;
    if (dir == Dir::Up) {
        n->lhs = src;
        n->rhs = s.result;
        n->detail = "up";
    } else {
        n->lhs = s.result;
        n->rhs = src;
        n->detail = "down";
    }
    n->path = s.path;
    return n;
}

// ---------------------------------------------------------------- saturation

void Engine::Impl::saturate() {
    std::unordered_set<Expr> seen;
    auto add_term = [&](const Expr& e) {
        std::vector<Expr> subs;
        collect_subterms(e, subs);
        for (auto& s : subs)
            if (seen.insert(s).second) terms.push_back(s);
    };
    add_term(Expr::zero());
    add_term(Expr::one());
    add_term(Expr::top());
    for (const auto& f : kb.expanded()) {
        add_term(f.lhs);
        add_term(f.rhs);
    }
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i < terms.size(); ++i) index[terms[i]] = static_cast<int>(i);
    const int n = static_cast<int>(terms.size());
    words = (terms.size() + 63) / 64;
    rel.assign(terms.size(), std::vector<std::uint64_t>(words, 0));
    just.assign(terms.size() * terms.size(), Just{});
    int one = idx(Expr::one()), zero = idx(Expr::zero()), top = idx(Expr::top());

    for (int i = 0; i < n; ++i) {
        set_bit(i, i, {SRefl});
        set_bit(zero, i, {SBottom});
        set_bit(i, top, {STop});
    }
    for (std::size_t fi = 0; fi < kb.expanded().size(); ++fi) {
        const Fact& f = kb.expanded()[fi];
        if (f.relation != Relation::Leq) continue;
        set_bit(idx(f.lhs), idx(f.rhs), {SKb, static_cast<int>(fi)});
    }
    for (int i = 0; i < n; ++i) {
        const Expr& t = terms[static_cast<std::size_t>(i)];
        // lattice projections
        if (t.is(Kind::Sup))
            for (std::size_t q = 0; q < t.operands().size(); ++q) set_bit(idx(t.operand(q)), i, {SUb, static_cast<int>(q)});
        if (t.is(Kind::Inf))
            for (std::size_t q = 0; q < t.operands().size(); ++q) set_bit(i, idx(t.operand(q)), {SLb, static_cast<int>(q)});
        for (Dir dir : {Dir::Up, Dir::Down}) {
            for (auto& s : steps(t, dir, 48)) {
                int j = idx(s.result);
                if (j < 0) continue;
                int from = dir == Dir::Up ? i : j, to = dir == Dir::Up ? j : i;
                if (bit(from, to)) continue;
                sat_steps.push_back(s);
                sat_step_dir.push_back(dir);
                sat_step_src.push_back(t);
                set_bit(from, to, {SStep, static_cast<int>(sat_steps.size() - 1)});
            }
        }
    }

    auto all_leq = [&](const std::vector<Expr>& xs, int j) {
        return std::all_of(xs.begin(), xs.end(), [&](const Expr& x) { return bit(idx(x), j); });
    };
    auto leq_all = [&](int i, const std::vector<Expr>& ys) {
        return std::all_of(ys.begin(), ys.end(), [&](const Expr& y) { return bit(i, idx(y)); });
    };
    bool changed = true;
    while (changed) {
        changed = false;
        // transitive closure
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                if (i == k || !bit(i, k)) continue;
                for (std::size_t w = 0; w < words; ++w) {
                    std::uint64_t fresh = rel[static_cast<std::size_t>(k)][w] & ~rel[static_cast<std::size_t>(i)][w];
                    while (fresh) {
                        int b = __builtin_ctzll(fresh);
                        fresh &= fresh - 1;
                        set_bit(i, static_cast<int>(w * 64 + b), {STrans, k});
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            const Expr& t = terms[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                if (bit(i, j)) continue;
                const Expr& s = terms[static_cast<std::size_t>(j)];
                bool hit = false;
                if (t.is(Kind::Sup) && all_leq(t.operands(), j)) hit = set_bit(i, j, {SLub});
                else if (s.is(Kind::Inf) && leq_all(i, s.operands())) hit = set_bit(i, j, {SGlb});
                else if (t.kind() == s.kind() && t.operands().size() == s.operands().size() && !t.operands().empty() &&
                         t.kind() != Kind::Sup && t.kind() != Kind::Inf) {
                    bool ok = true;
                    for (std::size_t q = 0; q < t.operands().size() && ok; ++q) {
                        bool anti = t.is(Kind::Impl) && q == 0;
                        ok = anti ? bit(idx(s.operand(q)), idx(t.operand(q))) : bit(idx(t.operand(q)), idx(s.operand(q)));
                    }
                    if (ok) hit = set_bit(i, j, {SMono});
                }
                if (!hit && i == one) {
                    if ((s.is(Kind::Prod) || s.is(Kind::Comp)) && leq_all(one, s.operands()))
                        hit = set_bit(i, j, {s.is(Kind::Prod) ? SPointProd : SPointComp});
                    else if (s.is(Kind::FinPar) && bit(one, idx(s.operand(0)))) hit = set_bit(i, j, {SPointFin});
                    else if (s.is(Kind::OmegaPar) && bit(one, idx(s.operand(0)))) hit = set_bit(i, j, {SPointOmega});
                    else if (s.is(Kind::Impl) && bit(one, idx(s.consequent()))) hit = set_bit(i, j, {SPointImpl});
                }
                changed = changed || hit;
            }
        }
    }
}

Trace Engine::Impl::sat_trace(int i, int j, std::unordered_map<long, Trace>& memo) const {
    long key = static_cast<long>(i) * static_cast<long>(terms.size()) + j;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Expr& a = terms[static_cast<std::size_t>(i)];
    const Expr& b = terms[static_cast<std::size_t>(j)];
    const Just& js = just[static_cast<std::size_t>(key)];
    auto sub = [&](const Expr& x, const Expr& y) { return sat_trace(idx(x), idx(y), memo); };
    Trace t;
    switch (js.kind) {
        case SRefl: t = mk("refl", Relation::Leq, a, b); break;
        case SBottom: t = mk("bottom", Relation::Leq, a, b); break;
        case STop: t = mk("top", Relation::Leq, a, b); break;
        case SKb: t = kb_node(kb.expanded()[static_cast<std::size_t>(js.x)], false); break;
        case SStep: {
            std::size_t s = static_cast<std::size_t>(js.x);
            t = rewrite_node(sat_steps[s], sat_step_src[s], sat_step_dir[s]);
            break;
        }
        case STrans: t = trans(sat_trace(i, js.x, memo), sat_trace(js.x, j, memo)); break;
        case SLub: {
            std::vector<Trace> ps;
            for (const auto& x : a.operands()) ps.push_back(sub(x, b));
            t = mk("sup-lub", Relation::Leq, a, b, std::move(ps));
            break;
        }
        case SGlb: {
            std::vector<Trace> ps;
            for (const auto& y : b.operands()) ps.push_back(sub(a, y));
            t = mk("inf-glb", Relation::Leq, a, b, std::move(ps));
            break;
        }
        case SUb: t = mk("sup-ub", Relation::Leq, a, b, {mk("refl", Relation::Leq, a, a)}); break;
        case SLb: t = mk("inf-lb", Relation::Leq, a, b, {mk("refl", Relation::Leq, b, b)}); break;
        case SMono: {
            std::vector<Trace> ps;
            for (std::size_t q = 0; q < a.operands().size(); ++q) {
                if (a.is(Kind::Impl) && q == 0)
                    ps.push_back(sub(b.operand(0), a.operand(0)));
                else
                    ps.push_back(sub(a.operand(q), b.operand(q)));
            }
            std::string r;
            switch (a.kind()) {
                case Kind::Prod: r = "mono-prod"; break;
                case Kind::Comp: r = "mono-comp"; break;
                case Kind::Impl: r = "mono-impl"; break;
                case Kind::FinPar: r = "mono-finpar"; break;
                default: r = "mono-omegapar"; break;
            }
            t = mk(r, Relation::Leq, a, b, std::move(ps));
            break;
        }
        case SPointProd:
        case SPointComp: {
            std::vector<Trace> ps;
            for (const auto& y : b.operands()) ps.push_back(sub(a, y));
            t = mk(js.kind == SPointProd ? "pointed-prod" : "pointed-comp", Relation::Leq, a, b, std::move(ps));
            break;
        }
        case SPointFin: t = mk("pointed-finpar", Relation::Leq, a, b, {sub(a, b.operand(0))}); break;
        case SPointOmega: t = mk("pointed-omegapar", Relation::Leq, a, b, {sub(a, b.operand(0))}); break;
        case SPointImpl: t = mk("pointed-impl", Relation::Leq, a, b, {sub(a, b.consequent())}); break;
        default: t = mk("refl", Relation::Leq, a, b); break;
    }
    memo[key] = t;
    return t;
}

// ---------------------------------------------------------------- search

namespace {

struct OutOfBudget {};

struct Counter {
    long used = 0;
    long limit = 0;
    void tick() {
        if (++used > limit) throw OutOfBudget{};
    }
};

struct Search {
    const Engine::Impl& E;
    Budget budget;
    Counter& global;
    Counter local;
    std::unordered_map<PairKey, Trace, PairHash> proved;
    std::unordered_map<PairKey, int, PairHash> failed;
    std::unordered_set<PairKey, PairHash> active;
    std::unordered_map<Expr, std::vector<Step>> up_cache, down_cache;

    Search(const Engine::Impl& e, const Budget& b, Counter& g) : E(e), budget(b), global(g) {
        local.limit = b.nodes;
    }

    const std::vector<Step>& ups(const Expr& a) {
        auto it = up_cache.find(a);
        if (it != up_cache.end()) return it->second;
        return up_cache[a] = E.steps(a, Dir::Up, static_cast<std::size_t>(budget.size_cap));
    }
    const std::vector<Step>& downs(const Expr& b) {
        auto it = down_cache.find(b);
        if (it != down_cache.end()) return it->second;
        return down_cache[b] = E.steps(b, Dir::Down, static_cast<std::size_t>(budget.size_cap));
    }

    Expr canon(Kind k, std::vector<Expr> ops) const { return make_canonical(k, std::move(ops), E.cat); }

    Trace run(const Expr& a, const Expr& b) {
        for (int d = 1; d <= budget.depth; ++d) {
            if (Trace t = prove(a, b, d)) return t;
        }
        return nullptr;
    }

    Trace leaf(const Expr& a, const Expr& b) {
        if (a == b) return mk("refl", Relation::Leq, a, b);
        if (a.is(Kind::Zero)) return mk("bottom", Relation::Leq, a, b);
        if (b.is(Kind::Top)) return mk("top", Relation::Leq, a, b);
        if (const Fact* f = E.kb.find_leq(a, b)) return kb_node(*f, false);
        if (Trace t = E.sat_lookup(a, b)) return t;
        if (Trace t = E.lemma(a, b)) return t;
        return nullptr;
    }

    Trace prove(const Expr& a, const Expr& b, int depth) {
        PairKey key{a, b};
        if (auto it = proved.find(key); it != proved.end()) return it->second;
        if (auto it = failed.find(key); it != failed.end() && it->second >= depth) return nullptr;
        if (active.count(key)) return nullptr;
        local.tick();
        global.tick();
        if (Trace t = leaf(a, b)) return proved[key] = t;
        if (depth <= 0) {
            auto& f = failed[key];
            f = std::max(f, depth);
            return nullptr;
        }
        active.insert(key);
        Trace t = expand(a, b, depth - 1);
        active.erase(key);
        if (t) return proved[key] = t;
        auto it = failed.find(key);
        if (it == failed.end() || it->second < depth) failed[key] = depth;
        return nullptr;
    }

    Trace expand(const Expr& a, const Expr& b, int d) {
        const auto& ao = a.operands();
        const auto& bo = b.operands();
        if (a.is(Kind::Sup)) {
            std::vector<Trace> ps;
            for (const auto& x : ao) {
                Trace t = prove(x, b, d);
                if (!t) break;
                ps.push_back(t);
            }
            if (ps.size() == ao.size()) return mk("sup-lub", Relation::Leq, a, b, std::move(ps));
        }
        if (b.is(Kind::Inf)) {
            std::vector<Trace> ps;
            for (const auto& y : bo) {
                Trace t = prove(a, y, d);
                if (!t) break;
                ps.push_back(t);
            }
            if (ps.size() == bo.size()) return mk("inf-glb", Relation::Leq, a, b, std::move(ps));
        }
        if (b.is(Kind::Sup))
            for (const auto& y : bo)
                if (Trace t = prove(a, y, d)) return mk("sup-ub", Relation::Leq, a, b, {t});
        if (a.is(Kind::Inf))
            for (const auto& x : ao)
                if (Trace t = prove(x, b, d)) return mk("inf-lb", Relation::Leq, a, b, {t});
        if (a.is(Kind::One)) {
            if (Trace t = pointed(b, d)) return t;
        }
        if (Trace t = mono(a, b, d)) return t;
        if (Trace t = residuation(a, b, d)) return t;
        for (const auto& s : ups(a)) {
            if (Trace t = prove(s.result, b, d)) return trans(E.rewrite_node(s, a, Dir::Up), t);
        }
        for (const auto& s : downs(b)) {
            if (Trace t = prove(a, s.result, d)) return trans(t, E.rewrite_node(s, b, Dir::Down));
        }
        return nullptr;
    }

    Trace pointed(const Expr& b, int d) {
        const Expr one = Expr::one();
        switch (b.kind()) {
            case Kind::Prod:
            case Kind::Comp: {
                std::vector<Trace> ps;
                for (const auto& y : b.operands()) {
                    Trace t = prove(one, y, d);
                    if (!t) return nullptr;
                    ps.push_back(t);
                }
                return mk(b.is(Kind::Prod) ? "pointed-prod" : "pointed-comp", Relation::Leq, one, b, std::move(ps));
            }
            case Kind::FinPar:
            case Kind::OmegaPar:
                if (Trace t = prove(one, b.operand(0), d))
                    return mk(b.is(Kind::FinPar) ? "pointed-finpar" : "pointed-omegapar", Relation::Leq, one, b, {t});
                return nullptr;
            case Kind::Impl:
                if (Trace t = prove(one, b.consequent(), d)) return mk("pointed-impl", Relation::Leq, one, b, {t});
                return nullptr;
            default: return nullptr;
        }
    }

    Trace mono(const Expr& a, const Expr& b, int d) {
        if (b.is(Kind::Prod) && !a.is(Kind::One)) {
            std::vector<Expr> xs = a.is(Kind::Prod) ? a.operands() : std::vector<Expr>{a};
            const auto& ys = b.operands();
            if (xs.size() > 5 || ys.size() > 5) return nullptr;
            std::vector<std::size_t> asg(xs.size(), 0);
            while (true) {
                std::vector<std::vector<Expr>> groups(ys.size());
                for (std::size_t i = 0; i < xs.size(); ++i) groups[asg[i]].push_back(xs[i]);
                std::vector<Trace> ps;
                for (std::size_t j = 0; j < ys.size(); ++j) {
                    Expr lhs = groups[j].empty() ? Expr::one() : canon(Kind::Prod, groups[j]);
                    if (lhs == a && ys[j] == b) break;
                    Trace t = prove(lhs, ys[j], d);
                    if (!t) break;
                    ps.push_back(t);
                }
                if (ps.size() == ys.size()) return mk("mono-prod", Relation::Leq, a, b, std::move(ps));
                std::size_t i = 0;
                while (i < asg.size() && ++asg[i] == ys.size()) asg[i++] = 0;
                if (i == asg.size()) break;
            }
            return nullptr;
        }
        if (b.is(Kind::Comp) && !a.is(Kind::One)) {
            std::vector<Expr> xs = a.is(Kind::Comp) ? a.operands() : std::vector<Expr>{a};
            const auto& ys = b.operands();
            if (xs.size() > 6 || ys.size() > 6) return nullptr;
            // cut positions 0 <= c1 <= ... <= c_{m-1} <= n
            std::size_t m = ys.size(), n = xs.size();
            std::vector<std::size_t> cuts(m - 1, 0);
            while (true) {
                std::vector<Trace> ps;
                std::size_t start = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    std::size_t end = j + 1 < m ? cuts[j] : n;
                    std::vector<Expr> seg(xs.begin() + static_cast<long>(start), xs.begin() + static_cast<long>(end));
                    Expr lhs = seg.empty() ? Expr::one() : canon(Kind::Comp, seg);
                    start = end;
                    Trace t = prove(lhs, ys[j], d);
                    if (!t) break;
                    ps.push_back(t);
                }
                if (ps.size() == m) return mk("mono-comp", Relation::Leq, a, b, std::move(ps));
                // next nondecreasing cut vector
                long i = static_cast<long>(cuts.size()) - 1;
                while (i >= 0 && cuts[static_cast<std::size_t>(i)] == n) --i;
                if (i < 0) break;
                ++cuts[static_cast<std::size_t>(i)];
                for (std::size_t q = static_cast<std::size_t>(i) + 1; q < cuts.size(); ++q) cuts[q] = cuts[static_cast<std::size_t>(i)];
            }
            return nullptr;
        }
        if (a.is(Kind::Impl) && b.is(Kind::Impl)) {
            if (Trace t0 = prove(b.antecedent(), a.antecedent(), d))
                if (Trace t1 = prove(a.consequent(), b.consequent(), d))
                    return mk("mono-impl", Relation::Leq, a, b, {t0, t1});
            return nullptr;
        }
        if ((a.is(Kind::FinPar) && b.is(Kind::FinPar)) || (a.is(Kind::OmegaPar) && b.is(Kind::OmegaPar))) {
            if (Trace t = prove(a.operand(0), b.operand(0), d))
                return mk(a.is(Kind::FinPar) ? "mono-finpar" : "mono-omegapar", Relation::Leq, a, b, {t});
        }
        return nullptr;
    }

    Trace residuation(const Expr& a, const Expr& b, int d) {
        if (b.is(Kind::Comp)) {
            const auto& ys = b.operands();
            for (std::size_t k = 1; k < ys.size(); ++k) {
                Expr g = canon(Kind::Comp, std::vector<Expr>(ys.begin(), ys.begin() + static_cast<long>(k)));
                Expr h = canon(Kind::Comp, std::vector<Expr>(ys.begin() + static_cast<long>(k), ys.end()));
                Expr lhs = canon(Kind::Impl, {g, a});
                if (Trace t = prove(lhs, h, d)) {
                    auto n = std::make_shared<TraceNode>(*mk("residuation-r", Relation::Leq, a, b, {t}));
                    n->aux = g;
                    return n;
                }
            }
        }
        if (a.is(Kind::Impl)) {
            Expr rhs = canon(Kind::Comp, {a.antecedent(), b});
            if (Trace t = prove(a.consequent(), rhs, d)) return mk("residuation-l", Relation::Leq, a, b, {t});
        }
        return nullptr;
    }
};

// Sets of terms known to lie below (down) or above (up) a start term.
struct Cone {
    std::vector<Expr> order;
    std::unordered_map<Expr, Trace> proof;
};

}  // namespace

// ---------------------------------------------------------------- Engine

Engine::Engine(const KnowledgeBase& kb) : kb_(kb), impl_(std::make_unique<Impl>(kb)) {}
Engine::~Engine() = default;

bool Engine::pointed_closure(const Expr& e) const { return impl_->pointed_closure(e); }

std::size_t Engine::saturation_size() const {
    impl_->ensure_saturated();
    return impl_->terms.size();
}

namespace {

Cone build_cone(const Engine::Impl& E, const Expr& start, bool down, int radius, std::size_t cap) {
    Cone c;
    c.order.push_back(start);
    c.proof[start] = mk("refl", Relation::Leq, start, start);
    E.ensure_saturated();
    std::size_t begin = 0;
    for (int r = 0; r < radius && c.order.size() < cap; ++r) {
        std::size_t end = c.order.size();
        for (std::size_t q = begin; q < end && c.order.size() < cap; ++q) {
            Expr x = c.order[q];
            Trace px = c.proof[x];
            auto add = [&](const Expr& y, const Trace& step) {
                if (c.proof.count(y) || c.order.size() >= cap) return;
                c.order.push_back(y);
                c.proof[y] = down ? trans(step, px) : trans(px, step);
            };
            if (down && x.is(Kind::Sup))
                for (const auto& op : x.operands()) add(op, mk("sup-ub", Relation::Leq, op, x, {mk("refl", Relation::Leq, op, op)}));
            if (!down && x.is(Kind::Inf))
                for (const auto& op : x.operands()) add(op, mk("inf-lb", Relation::Leq, x, op, {mk("refl", Relation::Leq, op, op)}));
            int i = E.idx(x);
            if (i >= 0) {
                std::unordered_map<long, Trace> memo;
                int n = static_cast<int>(E.terms.size());
                for (int j = 0; j < n && c.order.size() < cap; ++j) {
                    if (j == i) continue;
                    const Expr& y = E.terms[static_cast<std::size_t>(j)];
                    if (c.proof.count(y)) continue;
                    if (down ? E.bit(j, i) : E.bit(i, j)) add(y, down ? E.sat_trace(j, i, memo) : E.sat_trace(i, j, memo));
                }
            }
            for (const auto& s : E.steps(x, down ? Dir::Down : Dir::Up, 40)) {
                if (c.proof.count(s.result)) continue;
                add(s.result, E.rewrite_node(s, x, down ? Dir::Down : Dir::Up));
            }
        }
        begin = end;
    }
    return c;
}

Trace sandwich(const Expr& a, const Expr& b, const Trace& ua, const Trace& bv, const Fact& f) {
    return mk("sandwich", Relation::Nleq, a, b, {ua, bv, kb_node(f, true)});
}

}  // namespace

namespace {

enum class RefuteMode { Quick, Medium, Full };

Trace refute_leq(const Engine::Impl& E, const Expr& a, const Expr& b, RefuteMode mode, Counter& global,
                 std::unordered_map<Expr, Cone>* down_cache = nullptr,
                 std::unordered_map<Expr, Cone>* up_cache = nullptr) {
    if (const Fact* f = E.kb.find_nleq(a, b)) return kb_node(*f, true);
    auto nleqs = E.kb.nleq_facts();
    int radius = mode == RefuteMode::Quick ? 1 : 2;
    std::size_t cap = mode == RefuteMode::Quick ? 120 : 400;
    Cone dl, ul;
    const Cone* D;
    const Cone* U;
    if (down_cache) {
        auto it = down_cache->find(a);
        if (it == down_cache->end()) it = down_cache->emplace(a, build_cone(E, a, true, radius, cap)).first;
        D = &it->second;
    } else {
        dl = build_cone(E, a, true, radius, cap);
        D = &dl;
    }
    if (up_cache) {
        auto it = up_cache->find(b);
        if (it == up_cache->end()) it = up_cache->emplace(b, build_cone(E, b, false, radius, cap)).first;
        U = &it->second;
    } else {
        ul = build_cone(E, b, false, radius, cap);
        U = &ul;
    }
    for (const Fact* f : nleqs) {
        auto du = D->proof.find(f->lhs);
        if (du == D->proof.end()) continue;
        auto uv = U->proof.find(f->rhs);
        if (uv == U->proof.end()) continue;
        return sandwich(a, b, du->second, uv->second, *f);
    }
    if (mode == RefuteMode::Quick) return nullptr;
    Budget small{5, 1500, 40};
    for (const Fact* f : nleqs) {
        auto du = D->proof.find(f->lhs);
        auto uv = U->proof.find(f->rhs);
        try {
            if (uv != U->proof.end()) {
                Search s(E, small, global);
                if (Trace t = s.run(f->lhs, a)) return sandwich(a, b, t, uv->second, *f);
            } else if (du != D->proof.end()) {
                Search s(E, small, global);
                if (Trace t = s.run(b, f->rhs)) return sandwich(a, b, du->second, t, *f);
            }
        } catch (const OutOfBudget&) {
            if (global.used > global.limit) throw;
        }
    }
    if (mode == RefuteMode::Medium) return nullptr;
    Budget tiny{4, 400, 40};
    for (const Fact* f : nleqs) {
        if (D->proof.count(f->lhs) || U->proof.count(f->rhs)) continue;
        try {
            Search s1(E, tiny, global);
            Trace t1 = s1.run(f->lhs, a);
            if (!t1) continue;
            Search s2(E, tiny, global);
            if (Trace t2 = s2.run(b, f->rhs)) return sandwich(a, b, t1, t2, *f);
        } catch (const OutOfBudget&) {
            if (global.used > global.limit) throw;
        }
    }
    return nullptr;
}

void check_budget(const Budget& b) {
    if (b.nodes <= 0 || b.depth <= 0) throw std::invalid_argument("budget must be positive");
}

}  // namespace

Judgment Engine::derive(Relation r, const Expr& lhs0, const Expr& rhs0, const Budget& budget) const {
    check_budget(budget);
    const Impl& E = *impl_;
    impl_->ensure_saturated();
    Expr lhs = canonicalize(lhs0, E.cat), rhs = canonicalize(rhs0, E.cat);
    Counter global;
    global.limit = budget.nodes;
    long extra = 0;

    // returns {verdict, trace} for lhs <= rhs
    auto leq = [&](const Expr& a, const Expr& b) -> std::pair<Verdict, Trace> {
        if (Trace t = refute_leq(E, a, b, RefuteMode::Quick, global)) return {Verdict::Refuted, t};
        try {
            Search s(E, budget, global);
            if (Trace t = s.run(a, b)) {
                E.remember(a, b, t);
                return {Verdict::Proved, t};
            }
        } catch (const OutOfBudget&) {
        }
        // the negative search gets its own allowance
        Counter neg;
        neg.limit = budget.nodes;
        try {
            Trace t = refute_leq(E, a, b, RefuteMode::Full, neg);
            extra += neg.used;
            if (t) return {Verdict::Refuted, t};
        } catch (const OutOfBudget&) {
            extra += neg.used;
        }
        return {Verdict::Unknown, nullptr};
    };

    Judgment j;
    j.relation = r;
    j.lhs = lhs0;
    j.rhs = rhs0;
    switch (r) {
        case Relation::Leq: {
            auto [v, t] = leq(lhs, rhs);
            j.verdict = v;
            j.trace = t;
            break;
        }
        case Relation::Equiv: {
            auto p = leq(lhs, rhs);
            if (p.first == Verdict::Refuted) {
                j.verdict = Verdict::Refuted;
                j.trace = p.second;
                break;
            }
            auto q = leq(rhs, lhs);
            if (q.first == Verdict::Refuted) {
                j.verdict = Verdict::Refuted;
                j.trace = q.second;
            } else if (p.first == Verdict::Proved && q.first == Verdict::Proved) {
                j.verdict = Verdict::Proved;
                j.trace = mk("equiv", Relation::Equiv, lhs, rhs, {p.second, q.second});
            }
            break;
        }
        case Relation::Nleq: {
            auto [v, t] = leq(lhs, rhs);
            if (v == Verdict::Refuted) j.verdict = Verdict::Proved;
            else if (v == Verdict::Proved) j.verdict = Verdict::Refuted;
            j.trace = t;
            break;
        }
        case Relation::Lt: {
            auto p = leq(lhs, rhs);
            if (p.first == Verdict::Refuted) {
                j.verdict = Verdict::Refuted;
                j.trace = p.second;
                break;
            }
            auto q = leq(rhs, lhs);
            if (q.first == Verdict::Proved) {
                j.verdict = Verdict::Refuted;
                j.trace = q.second;
            } else if (p.first == Verdict::Proved && q.first == Verdict::Refuted) {
                j.verdict = Verdict::Proved;
                j.trace = mk("lt", Relation::Lt, lhs, rhs, {p.second, q.second});
            }
            break;
        }
        case Relation::Incomp: {
            auto p = leq(lhs, rhs);
            if (p.first == Verdict::Proved) {
                j.verdict = Verdict::Refuted;
                j.trace = p.second;
                break;
            }
            auto q = leq(rhs, lhs);
            if (q.first == Verdict::Proved) {
                j.verdict = Verdict::Refuted;
                j.trace = q.second;
            } else if (p.first == Verdict::Refuted && q.first == Verdict::Refuted) {
                j.verdict = Verdict::Proved;
                j.trace = mk("incomp", Relation::Incomp, lhs, rhs, {p.second, q.second});
            }
            break;
        }
    }
    if (j.trace && (!(lhs == lhs0) || !(rhs == rhs0))) {
        Relation rel = j.trace->relation;
        j.trace = mk("fold", rel, lhs0, rhs0, {j.trace});
    }
    j.nodes = global.used + extra;
    return j;
}

std::optional<Counterexample> Engine::refute_template(const LawTemplate& t, const std::vector<Expr>& candidates,
                                                      const Budget& budget) const {
    t.validate();
    const Impl& E = *impl_;
    E.ensure_saturated();
    const std::size_t k = t.variables.size();
    const std::size_t n = candidates.size();
    std::unordered_map<Expr, Cone> dcache, ucache;
    Counter global;
    global.limit = budget.nodes > 0 ? budget.nodes * 20 : 1000000;

    auto discharged = [&](const Instance& inst) {
        for (const auto& ob : inst.obligations) {
            switch (ob.condition) {
                case SideCondition::Pointed:
                    if (!E.pointed_closure(ob.subject)) return false;
                    break;
                case SideCondition::NotTop:
                    if (!discharge_not_top(ob.subject)) return false;
                    break;
                case SideCondition::NotZero:
                    if (!discharge_nonzero(ob.subject, E.cat)) return false;
                    break;
            }
        }
        return true;
    };
    auto attempt = [&](const Assignment& asg, RefuteMode mode) -> std::optional<Counterexample> {
        Instance inst = substitute(t, asg, E.cat);
        if (!discharged(inst)) return std::nullopt;
        std::vector<std::pair<Expr, Expr>> dirs{{inst.lhs, inst.rhs}};
        if (t.relation == Relation::Equiv) dirs.push_back({inst.rhs, inst.lhs});
        for (const auto& [a, b] : dirs) {
            if (a == b) continue;
            Trace tr;
            try {
                tr = refute_leq(E, a, b, mode, global, &dcache, &ucache);
            } catch (const OutOfBudget&) {
                return std::nullopt;
            }
            if (tr) return Counterexample{asg, Relation::Leq, a, b, tr};
        }
        return std::nullopt;
    };
    if (k == 0) {
        for (auto mode : {RefuteMode::Quick, RefuteMode::Medium})
            if (auto c = attempt({}, mode)) return c;
        return std::nullopt;
    }
    for (std::size_t level = 1; level <= n; ++level) {
        std::vector<Assignment> batch;
        std::vector<std::size_t> ix(k, 0);
        while (true) {
            if (std::any_of(ix.begin(), ix.end(), [&](std::size_t v) { return v == level - 1; })) {
                Assignment a;
                for (std::size_t q = 0; q < k; ++q) a[t.variables[q]] = candidates[ix[q]];
                batch.push_back(std::move(a));
            }
            long q = static_cast<long>(k) - 1;
            while (q >= 0 && ++ix[static_cast<std::size_t>(q)] == level) ix[static_cast<std::size_t>(q--)] = 0;
            if (q < 0) break;
        }
        for (auto mode : {RefuteMode::Quick, RefuteMode::Medium})
            for (const auto& a : batch)
                if (auto c = attempt(a, mode)) return c;
        if (global.used > global.limit) break;
    }
    return std::nullopt;
}

FlagResult Engine::prove_pointed(const Expr& e0, const Budget& budget) const {
    check_budget(budget);
    impl_->ensure_saturated();
    Expr e = canonicalize(e0, impl_->cat);
    Counter global;
    global.limit = budget.nodes;
    try {
        Search s(*impl_, budget, global);
        if (Trace t = s.run(Expr::one(), e)) return {true, t};
    } catch (const OutOfBudget&) {
    }
    return {};
}

FlagResult Engine::derive_flag(const Expr& e0, Flag f) const {
    Expr e = canonicalize(e0, impl_->cat);
    std::function<Trace(const Expr&, Flag)> go = [&](const Expr& x, Flag fl) -> Trace {
        if (x.is(Kind::Atom) && !x.is_var()) {
            const AtomEntry* a = impl_->cat->find(x.name());
            if (!a) return nullptr;
            auto it = a->flags.find(fl);
            if (it == a->flags.end() && fl == Flag::Fractal) it = a->flags.find(Flag::TotalFractal);
            if (it == a->flags.end()) return nullptr;
            auto n = std::make_shared<TraceNode>(*mk("flag", Relation::Leq, x, x));
            n->detail = flag_name(fl);
            n->citation = it->second;
            return n;
        }
        auto node = [&](const char* rule, std::vector<Trace> ps) {
            auto n = std::make_shared<TraceNode>(*mk(rule, Relation::Leq, x, x, std::move(ps)));
            n->detail = flag_name(fl);
            return Trace(n);
        };
        if (fl == Flag::Cylinder && x.is(Kind::Comp)) return node("cylinder-comp", {});
        if (fl == Flag::Fractal && x.is(Kind::Comp)) {
            std::vector<Trace> ps;
            for (const auto& c : x.operands()) {
                Trace t = go(c, Flag::Fractal);
                if (!t) return nullptr;
                ps.push_back(t);
            }
            return node("fractal-comp", std::move(ps));
        }
        if ((fl == Flag::Fractal || fl == Flag::TotalFractal) && x.is(Kind::Impl)) {
            if (!discharge_nonzero(x.antecedent(), impl_->cat)) return nullptr;
            Trace t = go(x.consequent(), fl);
            if (!t) return nullptr;
            return node("fractal-impl", {t});
        }
        return nullptr;
    };
    if (Trace t = go(e, f)) return {true, t};
    return {};
}

// ---------------------------------------------------------------- replay

bool Engine::replay(const Trace& t, std::string* why) const {
    const Impl& E = *impl_;
    auto fail = [&](const TraceNode& n, const std::string& msg) {
        if (why) *why = n.rule + " " + print_relation(n.relation, n.lhs, n.rhs) + ": " + msg;
        return false;
    };
    std::function<bool(const Trace&)> check = [&](const Trace& tp) -> bool {
        if (!tp) return why ? (*why = "null node", false) : false;
        const TraceNode& n = *tp;
        for (const auto& p : n.premises)
            if (!check(p)) return false;
        const auto& P = n.premises;
        auto leqp = [&](std::size_t i, const Expr& a, const Expr& b) {
            return i < P.size() && P[i]->relation == Relation::Leq && P[i]->lhs == a && P[i]->rhs == b;
        };
        const Expr& a = n.lhs;
        const Expr& b = n.rhs;
        const std::string& r = n.rule;
        auto canon = [&](Kind k, std::vector<Expr> ops) { return make_canonical(k, std::move(ops), E.cat); };
        if (r == "refl") return a == b ? true : fail(n, "sides differ");
        if (r == "bottom") return a.is(Kind::Zero) ? true : fail(n, "lhs is not 0");
        if (r == "top") return b.is(Kind::Top) ? true : fail(n, "rhs is not TOP");
        if (r == "kb") return E.kb.find_leq(a, b) ? true : fail(n, "no such KB fact");
        if (r == "kb-neg") return E.kb.find_nleq(a, b) ? true : fail(n, "no such KB fact");
        if (r == "trans") {
            if (P.size() != 2 || P[0]->lhs != a || P[0]->rhs != P[1]->lhs || P[1]->rhs != b) return fail(n, "chain mismatch");
            return true;
        }
        if (r == "fold") {
            if (P.size() != 1 || canonicalize(a, E.cat) != P[0]->lhs || canonicalize(b, E.cat) != P[0]->rhs)
                return fail(n, "canonical forms differ");
            return true;
        }
        if (r == "equiv") return leqp(0, a, b) && leqp(1, b, a) ? true : fail(n, "premises");
        if (r == "lt") {
            bool ok = leqp(0, a, b) && P.size() == 2 &&
                      ((P[1]->relation == Relation::Nleq && P[1]->lhs == b && P[1]->rhs == a));
            return ok ? true : fail(n, "premises");
        }
        if (r == "incomp") {
            bool ok = P.size() == 2 && P[0]->relation == Relation::Nleq && P[0]->lhs == a && P[0]->rhs == b &&
                      P[1]->relation == Relation::Nleq && P[1]->lhs == b && P[1]->rhs == a;
            return ok ? true : fail(n, "premises");
        }
        if (r == "sandwich") {
            if (P.size() != 3 || P[2]->rule != "kb-neg") return fail(n, "shape");
            const Expr& u = P[2]->lhs;
            const Expr& v = P[2]->rhs;
            return leqp(0, u, a) && leqp(1, b, v) ? true : fail(n, "sandwich premises");
        }
        if (r == "sup-lub") {
            if (!a.is(Kind::Sup) || P.size() != a.operands().size()) return fail(n, "shape");
            for (std::size_t i = 0; i < P.size(); ++i)
                if (!leqp(i, a.operand(i), b)) return fail(n, "premise " + std::to_string(i));
            return true;
        }
        if (r == "inf-glb" || r == "pointed-prod" || r == "pointed-comp") {
            Kind want = r == "inf-glb" ? Kind::Inf : (r == "pointed-prod" ? Kind::Prod : Kind::Comp);
            if (!b.is(want) || P.size() != b.operands().size()) return fail(n, "shape");
            if (r != "inf-glb" && !a.is(Kind::One)) return fail(n, "lhs is not 1");
            for (std::size_t i = 0; i < P.size(); ++i)
                if (!leqp(i, a, b.operand(i))) return fail(n, "premise " + std::to_string(i));
            return true;
        }
        if (r == "sup-ub") {
            if (!b.is(Kind::Sup) || P.size() != 1 || P[0]->lhs != a) return fail(n, "shape");
            auto& ops = b.operands();
            return std::find(ops.begin(), ops.end(), P[0]->rhs) != ops.end() ? true : fail(n, "not an operand");
        }
        if (r == "inf-lb") {
            if (!a.is(Kind::Inf) || P.size() != 1 || P[0]->rhs != b) return fail(n, "shape");
            auto& ops = a.operands();
            return std::find(ops.begin(), ops.end(), P[0]->lhs) != ops.end() ? true : fail(n, "not an operand");
        }
        if (r == "pointed-finpar" || r == "pointed-omegapar" || r == "pointed-impl") {
            Kind want = r == "pointed-finpar" ? Kind::FinPar : (r == "pointed-omegapar" ? Kind::OmegaPar : Kind::Impl);
            if (!a.is(Kind::One) || !b.is(want)) return fail(n, "shape");
            const Expr& inner = want == Kind::Impl ? b.consequent() : b.operand(0);
            return leqp(0, a, inner) ? true : fail(n, "premise");
        }
        if (r == "mono-prod" || r == "mono-comp") {
            Kind k = r == "mono-prod" ? Kind::Prod : Kind::Comp;
            std::vector<Expr> ls, rs;
            for (const auto& p : P) {
                if (p->relation != Relation::Leq) return fail(n, "premise relation");
                ls.push_back(p->lhs);
                rs.push_back(p->rhs);
            }
            if (canon(k, ls) != a || canon(k, rs) != b) return fail(n, "components do not recombine");
            return true;
        }
        if (r == "mono-impl") {
            if (!a.is(Kind::Impl) || !b.is(Kind::Impl)) return fail(n, "shape");
            return leqp(0, b.antecedent(), a.antecedent()) && leqp(1, a.consequent(), b.consequent()) ? true
                                                                                                        : fail(n, "premises");
        }
        if (r == "mono-finpar" || r == "mono-omegapar") {
            Kind k = r == "mono-finpar" ? Kind::FinPar : Kind::OmegaPar;
            if (!a.is(k) || !b.is(k)) return fail(n, "shape");
            return leqp(0, a.operand(0), b.operand(0)) ? true : fail(n, "premise");
        }
        if (r == "residuation-r") {
            if (!n.aux || P.size() != 1) return fail(n, "shape");
            const Expr& g = *n.aux;
            const Expr& h = P[0]->rhs;
            if (canon(Kind::Comp, {g, h}) != b || P[0]->lhs != canon(Kind::Impl, {g, a})) return fail(n, "split");
            return true;
        }
        if (r == "residuation-l") {
            if (!a.is(Kind::Impl)) return fail(n, "shape");
            return leqp(0, a.consequent(), canon(Kind::Comp, {a.antecedent(), b})) ? true : fail(n, "premise");
        }
        if (r == "flag" || r == "cylinder-comp" || r == "fractal-comp" || r == "fractal-impl") {
            auto fl = flag_from_name(n.detail);
            if (!fl) return fail(n, "unknown flag");
            FlagResult fr = derive_flag(a, *fl);
            return fr.holds ? true : fail(n, "flag does not propagate");
        }
        // rewrite step
        if (n.detail == "up" || n.detail == "down") {
            bool up = n.detail == "up";
            const Expr& src = up ? a : b;
            const Expr& dst = up ? b : a;
            std::string id = r == "kb-rewrite" ? "kb" : r;
            for (const auto& s : E.steps(src, up ? Dir::Up : Dir::Down, 1u << 20))
                if (s.id == id && s.path == n.path && s.result == dst) return true;
            return fail(n, "rewrite not reproducible");
        }
        return fail(n, "unknown rule");
    };
    return check(t);
}

// ---------------------------------------------------------------- consistency

ConsistencyReport Engine::check_consistency(const Budget& spot) const {
    const Impl& E = *impl_;
    E.ensure_saturated();
    ConsistencyReport rep;
    rep.terms = E.terms.size();
    for (std::size_t i = 0; i < E.terms.size(); ++i)
        for (std::size_t w = 0; w < E.words; ++w) rep.leq_pairs += static_cast<std::size_t>(__builtin_popcountll(E.rel[i][w]));
    auto nleqs = kb_.nleq_facts();
    rep.nleq_facts = nleqs.size();
    for (const Fact* f : nleqs) {
        int i = E.idx(f->lhs), j = E.idx(f->rhs);
        if (i >= 0 && j >= 0 && E.bit(i, j)) rep.conflicts.push_back({f->lhs, f->rhs});
        Counter global;
        global.limit = spot.nodes;
        try {
            Search s(E, spot, global);
            if (s.run(f->lhs, f->rhs)) rep.prover_conflicts.push_back({f->lhs, f->rhs});
        } catch (const OutOfBudget&) {
        }
    }
    return rep;
}

std::vector<Expr> default_candidates(const KnowledgeBase& kb) {
    std::vector<Expr> out{Expr::one()};
    for (const char* n : {"LPO", "lim", "C2", "CN", "C2N", "c_p", "c_q", "d_p"})
        if (kb.catalog().is_known(n)) out.push_back(Expr::atom(n));
    return out;
}

// ---------------------------------------------------------------- serialization

namespace {

void text_rec(const Trace& t, int depth, std::ostringstream& os) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '[' << t->rule << "] "
       << print_relation(t->relation, t->lhs, t->rhs);
    if (!t->path.empty() || !t->detail.empty()) {
        os << "  (";
        if (!t->detail.empty()) os << t->detail;
        if (!t->path.empty()) {
            os << (t->detail.empty() ? "" : " ") << "at";
            for (int p : t->path) os << ' ' << p;
        }
        os << ')';
    }
    if (t->aux) os << "  with " << print_expr(*t->aux);
    if (!t->citation.empty()) os << "  {" << t->citation << '}';
    os << '\n';
    for (const auto& p : t->premises) text_rec(p, depth + 1, os);
}

nlohmann::json json_rec(const Trace& t) {
    nlohmann::json j;
    j["rule"] = t->rule;
    j["citation"] = t->citation;
    j["relation"] = relation_token(t->relation);
    j["lhs"] = print_expr(t->lhs);
    j["rhs"] = print_expr(t->rhs);
    j["path"] = t->path;
    j["detail"] = t->detail;
    if (t->aux) j["aux"] = print_expr(*t->aux);
    j["premises"] = nlohmann::json::array();
    for (const auto& p : t->premises) j["premises"].push_back(json_rec(p));
    return j;
}

}  // namespace

std::string trace_to_text(const Trace& t) {
    if (!t) return "";
    std::ostringstream os;
    text_rec(t, 0, os);
    return os.str();
}

std::string trace_to_json(const Trace& t, int indent) {
    if (!t) return "null";
    return json_rec(t).dump(indent);
}

std::string judgment_to_json(const Judgment& j, int indent) {
    nlohmann::json o;
    o["verdict"] = verdict_name(j.verdict);
    o["relation"] = relation_token(j.relation);
    o["lhs"] = print_expr(j.lhs);
    o["rhs"] = print_expr(j.rhs);
    o["nodes"] = j.nodes;
    o["trace"] = j.trace ? json_rec(j.trace) : nlohmann::json(nullptr);
    return o.dump(indent);
}

}  // namespace wdeg
