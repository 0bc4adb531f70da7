#include "wdeg/finmodel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wdeg::fin {

namespace {

constexpr Value kMaxCodes = Value(1) << 60;
constexpr Value kMaxEnum = Value(1) << 22;       // dom() enumeration
constexpr Value kMaxTabulate = Value(1) << 16;
constexpr Value kMaxPoints = Value(1) << 18;     // COMB context size
constexpr std::size_t kMaxEntries = std::size_t(1) << 25;  // values held by one definable set

std::mutex g_type_mu;
std::unordered_map<std::string, TypeP>& type_table() {
    static std::unordered_map<std::string, TypeP> t;
    return t;
}

TypeP intern(Type t) {
    std::lock_guard<std::mutex> lk(g_type_mu);
    auto& tab = type_table();
    auto it = tab.find(t.key);
    if (it != tab.end()) return it->second;
    auto p = std::make_shared<const Type>(std::move(t));
    tab.emplace(p->key, p);
    return p;
}

Value mul_checked(Value a, Value b) {
    if (a != 0 && b > kMaxCodes / a) throw std::length_error("finite space too large to code");
    return a * b;
}

}  // namespace

TypeP Type::base(Value n) {
    Type t;
    t.tag = Tag::Base;
    t.n = n;
    t.size = n;
    t.key = std::to_string(n);
    return intern(std::move(t));
}

TypeP Type::pair(TypeP a, TypeP b) {
    Type t;
    t.tag = Tag::Pair;
    t.size = mul_checked(a->size, b->size);
    t.key = "(" + a->key + "*" + b->key + ")";
    t.a = std::move(a);
    t.b = std::move(b);
    return intern(std::move(t));
}

TypeP Type::sum(TypeP a, TypeP b) {
    Type t;
    t.tag = Tag::Sum;
    t.size = a->size + b->size;
    if (t.size > kMaxCodes) throw std::length_error("finite space too large to code");
    t.key = "(" + a->key + "+" + b->key + ")";
    t.a = std::move(a);
    t.b = std::move(b);
    return intern(std::move(t));
}

TypeP Type::func(TypeP dom, TypeP cod) {
    Type t;
    t.tag = Tag::Func;
    Value s = 1;
    if (dom->size > 64 && cod->size > 1) throw std::length_error("function space too large to code");
    for (Value i = 0; i < dom->size; ++i) {
        t.powers.push_back(s);
        s = mul_checked(s, cod->size);
    }
    t.size = dom->size == 0 ? 1 : s;
    t.key = "(" + dom->key + ">" + cod->key + ")";
    t.a = std::move(dom);
    t.b = std::move(cod);
    return intern(std::move(t));
}

bool same_type(const TypeP& x, const TypeP& y) { return x == y || x->key == y->key; }

Value pair_code(const Type& p, Value a, Value b) { return a * p.b->size + b; }
std::pair<Value, Value> unpair(const Type& p, Value v) { return {v / p.b->size, v % p.b->size}; }
Value apply_code(const Type& f, Value h, Value x) {
    if (f.b->size == 1) return 0;
    return (h / f.powers[x]) % f.b->size;
}

// ---------------------------------------------------------------- problems

struct FinProblem::Impl {
    TypeP in, out;
    virtual ~Impl() = default;
    virtual bool raw_in_dom(Value x) const = 0;
    virtual void raw_sols(Value x, std::vector<Value>& out) const = 0;  // x in dom

    // Small input spaces are tabulated once; larger ones are evaluated on demand.
    bool tabulated() const { return in->size <= kMaxTabulate; }

    void ensure() const {
        std::call_once(once_, [&] {
            if (in->size > kMaxEnum) throw std::length_error("input space too large to enumerate: " + in->key);
            bool tab = tabulated();
            if (tab) sols_.assign(in->size, {});
            for (Value x = 0; x < in->size; ++x) {
                if (!raw_in_dom(x)) continue;
                dom_.push_back(x);
                if (tab) {
                    raw_sols(x, sols_[x]);
                    std::sort(sols_[x].begin(), sols_[x].end());
                    sols_[x].erase(std::unique(sols_[x].begin(), sols_[x].end()), sols_[x].end());
                }
            }
        });
    }
    const std::vector<Value>& dom() const {
        ensure();
        return dom_;
    }
    bool in_dom(Value x) const {
        if (x >= in->size) return false;
        if (tabulated()) {
            ensure();
            return !sols_[x].empty();
        }
        return raw_in_dom(x);
    }
    // sorted; empty outside dom
    const std::vector<Value>& sols(Value x, std::vector<Value>& scratch) const {
        if (tabulated()) {
            ensure();
            return x < in->size ? sols_[x] : empty_;
        }
        scratch.clear();
        if (!raw_in_dom(x)) return scratch;
        raw_sols(x, scratch);
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        return scratch;
    }

private:
    mutable std::once_flag once_;
    mutable std::vector<Value> dom_;
    mutable std::vector<std::vector<Value>> sols_;
    const std::vector<Value> empty_;
};

namespace {

using Impl = FinProblem::Impl;

void sort_unique(std::vector<Value>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct TableImpl : Impl {
    std::vector<std::vector<Value>> table;
    bool raw_in_dom(Value x) const override { return x < table.size() && !table[x].empty(); }
    void raw_sols(Value x, std::vector<Value>& o) const override { o.insert(o.end(), table[x].begin(), table[x].end()); }
};

struct SupImpl : Impl {
    FinProblem f, g;
    bool raw_in_dom(Value x) const override {
        Value na = f.in()->size;
        return x < na ? f.in_dom(x) : g.in_dom(x - na);
    }
    void raw_sols(Value x, std::vector<Value>& o) const override {
        Value na = f.in()->size;
        if (x < na) {
            for (Value y : f.solutions(x)) o.push_back(y);
        } else {
            Value off = f.out()->size;
            for (Value y : g.solutions(x - na)) o.push_back(off + y);
        }
    }
};

struct InfImpl : Impl {
    FinProblem f, g;
    bool raw_in_dom(Value x) const override {
        auto [a, b] = unpair(*in, x);
        return f.in_dom(a) && g.in_dom(b);
    }
    void raw_sols(Value x, std::vector<Value>& o) const override {
        auto [a, b] = unpair(*in, x);
        for (Value y : f.solutions(a)) o.push_back(y);
        Value off = f.out()->size;
        for (Value y : g.solutions(b)) o.push_back(off + y);
    }
};

struct ProdImpl : Impl {
    FinProblem f, g;
    bool raw_in_dom(Value x) const override {
        auto [a, b] = unpair(*in, x);
        return f.in_dom(a) && g.in_dom(b);
    }
    void raw_sols(Value x, std::vector<Value>& o) const override {
        auto [a, b] = unpair(*in, x);
        auto fa = f.solutions(a), gb = g.solutions(b);
        for (Value y : fa)
            for (Value z : gb) o.push_back(pair_code(*out, y, z));
    }
};

// f * g: run g, pass w along, feed u to f.
struct StarImpl : Impl {
    FinProblem f, g;
    TypeP hty, cell;  // hty = Func(out g, cell), cell = Pair(pass, in f)
    bool raw_in_dom(Value x) const override {
        auto [h, xg] = unpair(*in, x);
        if (!g.in_dom(xg)) return false;
        for (Value y : g.solutions(xg)) {
            auto [w, u] = unpair(*cell, apply_code(*hty, h, y));
            (void)w;
            if (!f.in_dom(u)) return false;
        }
        return true;
    }
    void raw_sols(Value x, std::vector<Value>& o) const override {
        auto [h, xg] = unpair(*in, x);
        for (Value y : g.solutions(xg)) {
            auto [w, u] = unpair(*cell, apply_code(*hty, h, y));
            for (Value v : f.solutions(u)) o.push_back(pair_code(*out, w, v));
        }
    }
};

// g -> f
struct ImplImpl : Impl {
    FinProblem g, f;
    TypeP hty;  // Func(out g, out f)
    bool raw_in_dom(Value x) const override { return f.in_dom(x); }
    void raw_sols(Value u, std::vector<Value>& o) const override {
        auto fu = f.solutions(u);
        for (Value x : g.dom()) {
            auto gx = g.solutions(x);
            for (Value H = 0; H < hty->size; ++H) {
                bool ok = true;
                for (Value v : gx)
                    if (!std::binary_search(fu.begin(), fu.end(), apply_code(*hty, H, v))) {
                        ok = false;
                        break;
                    }
                if (ok) o.push_back(pair_code(*out, H, x));
            }
        }
    }
};

TypeP tuple_type(const TypeP& a, int n) {
    if (n == 0) return Type::base(1);
    TypeP t = a;
    for (int i = 1; i < n; ++i) t = Type::pair(a, t);
    return t;
}

TypeP tagged_tuples(const TypeP& a, int bound) {
    TypeP s = tuple_type(a, bound);
    for (int n = bound - 1; n >= 0; --n) s = Type::sum(tuple_type(a, n), s);
    return s;
}

// Decode a code of tagged_tuples(a, bound) into (n, components).
std::pair<int, std::vector<Value>> untag(const TypeP& a, int bound, Value v) {
    int n = 0;
    for (; n < bound; ++n) {
        Value sz = tuple_type(a, n)->size;
        if (v < sz) break;
        v -= sz;
    }
    std::vector<Value> comp;
    if (n == 0) return {0, comp};
    for (int k = n; k > 1; --k) {
        Value rest = tuple_type(a, k - 1)->size;
        comp.push_back(v / rest);
        v %= rest;
    }
    comp.push_back(v);
    return {n, comp};
}

Value tag(const TypeP& a, int n, const std::vector<Value>& comp) {
    Value off = 0;
    for (int k = 0; k < n; ++k) off += tuple_type(a, k)->size;
    if (n == 0) return 0;
    Value v = comp.back();
    for (int k = 2; k <= n; ++k) v = comp[n - k] * tuple_type(a, k - 1)->size + v;
    return off + v;
}

struct FinParImpl : Impl {
    FinProblem f;
    int bound = 0;
    bool raw_in_dom(Value x) const override {
        auto [n, comp] = untag(f.in(), bound, x);
        (void)n;
        for (Value c : comp)
            if (!f.in_dom(c)) return false;
        return true;
    }
    void raw_sols(Value x, std::vector<Value>& o) const override {
        auto [n, comp] = untag(f.in(), bound, x);
        std::vector<std::vector<Value>> s;
        for (Value c : comp) s.push_back(f.solutions(c));
        std::vector<Value> cur(n);
        std::function<void(int)> rec = [&](int i) {
            if (i == n) {
                o.push_back(tag(f.out(), n, cur));
                return;
            }
            for (Value y : s[i]) {
                cur[i] = y;
                rec(i + 1);
            }
        };
        rec(0);
    }
};

}  // namespace

FinProblem::FinProblem() : FinProblem(trivial()) {}

FinProblem FinProblem::table(TypeP in, TypeP out, const std::map<Value, std::vector<Value>>& sol, std::string name) {
    if (in->size > kMaxEnum) throw std::length_error("input space too large for a table problem");
    auto p = std::make_shared<TableImpl>();
    p->in = std::move(in);
    p->out = std::move(out);
    p->table.assign(p->in->size, {});
    for (const auto& [x, ys] : sol) {
        if (x >= p->in->size) throw std::invalid_argument("input " + std::to_string(x) + " outside the input space");
        if (ys.empty()) throw std::invalid_argument("empty solution set at input " + std::to_string(x));
        for (Value y : ys)
            if (y >= p->out->size) throw std::invalid_argument("solution " + std::to_string(y) + " outside the output space");
        p->table[x] = ys;
        sort_unique(p->table[x]);
    }
    return FinProblem(std::move(p), std::move(name));
}

FinProblem FinProblem::trivial() {
    static const FinProblem t = table(Type::base(1), Type::base(1), {{0, {0}}}, "1");
    return t;
}

FinProblem FinProblem::zero(TypeP in, TypeP out) { return table(std::move(in), std::move(out), {}, "0"); }

const TypeP& FinProblem::in() const { return p_->in; }
const TypeP& FinProblem::out() const { return p_->out; }
bool FinProblem::in_dom(Value x) const { return p_->in_dom(x); }
std::vector<Value> FinProblem::solutions(Value x) const {
    std::vector<Value> scratch;
    return p_->sols(x, scratch);
}
const std::vector<Value>& FinProblem::dom() const { return p_->dom(); }
const std::string& FinProblem::name() const { return name_; }
FinProblem FinProblem::named(std::string n) const { return FinProblem(p_, std::move(n)); }

std::string FinProblem::describe() const {
    std::ostringstream os;
    os << (name_.empty() ? "<problem>" : name_) << " : " << in()->key << " -> " << out()->key;
    if (in()->size <= 64) {
        for (Value x : dom()) {
            os << "\n  " << x << " :";
            for (Value y : solutions(x)) os << ' ' << y;
        }
    }
    return os.str();
}

FinProblem op_sup(const FinProblem& f, const FinProblem& g) {
    auto p = std::make_shared<SupImpl>();
    p->f = f;
    p->g = g;
    p->in = Type::sum(f.in(), g.in());
    p->out = Type::sum(f.out(), g.out());
    return FinProblem(std::move(p));
}

FinProblem op_inf(const FinProblem& f, const FinProblem& g) {
    auto p = std::make_shared<InfImpl>();
    p->f = f;
    p->g = g;
    p->in = Type::pair(f.in(), g.in());
    p->out = Type::sum(f.out(), g.out());
    return FinProblem(std::move(p));
}

FinProblem op_prod(const FinProblem& f, const FinProblem& g) {
    auto p = std::make_shared<ProdImpl>();
    p->f = f;
    p->g = g;
    p->in = Type::pair(f.in(), g.in());
    p->out = Type::pair(f.out(), g.out());
    return FinProblem(std::move(p));
}

FinProblem op_star(const FinProblem& f, const FinProblem& g, const std::optional<TypeP>& pass) {
    TypeP ps = pass ? *pass : g.out();
    if (ps->size == 0) throw std::invalid_argument("op_star: empty pass-through set");
    auto p = std::make_shared<StarImpl>();
    p->f = f;
    p->g = g;
    p->cell = Type::pair(ps, f.in());
    p->hty = Type::func(g.out(), p->cell);
    p->in = Type::pair(p->hty, g.in());
    p->out = Type::pair(ps, f.out());
    return FinProblem(std::move(p));
}

FinProblem op_impl(const FinProblem& g, const FinProblem& f) {
    if (g.dom().empty() && !f.dom().empty()) throw InfinityInFiniteModel();
    auto p = std::make_shared<ImplImpl>();
    p->g = g;
    p->f = f;
    p->hty = Type::func(g.out(), f.out());
    p->in = f.in();
    p->out = Type::pair(p->hty, g.in());
    return FinProblem(std::move(p));
}

FinProblem op_finpar(const FinProblem& f, int bound) {
    if (bound < 0) throw std::invalid_argument("op_finpar: negative bound");
    auto p = std::make_shared<FinParImpl>();
    p->f = f;
    p->bound = bound;
    p->in = tagged_tuples(f.in(), bound);
    p->out = tagged_tuples(f.out(), bound);
    return FinProblem(std::move(p));
}

bool tightens(const FinProblem& f, const FinProblem& g) {
    if (!same_type(f.in(), g.in()) || !same_type(f.out(), g.out()))
        throw SpaceMismatch("tightens: spaces differ (" + f.in()->key + " -> " + f.out()->key + " vs " + g.in()->key +
                            " -> " + g.out()->key + ")");
    for (Value x : g.dom()) {
        if (!f.in_dom(x)) return false;
        auto fx = f.solutions(x), gx = g.solutions(x);
        if (!std::includes(gx.begin(), gx.end(), fx.begin(), fx.end())) return false;
    }
    return true;
}

// ---------------------------------------------------------------- structures

Structure Structure::parse(std::string_view spec) {
    auto fail = [&](const std::string& why) { return std::invalid_argument("bad structure '" + std::string(spec) + "': " + why); };
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts[0] == "full" && parts.size() == 1) return full();
    if (parts[0] == "lookahead") throw fail("LOOKAHEAD structures are not implemented");
    if (parts[0] != "comb") throw fail("expected full or comb[:D[:constants=...]]");
    Structure s = comb();
    if (parts.size() >= 2) {
        int d = 0;
        auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), d);
        if (ec != std::errc() || p != parts[1].data() + parts[1].size() || d < 0 || d > 8) throw fail("depth must be 0..8");
        s.depth = d;
    }
    if (parts.size() >= 3) {
        const std::string& c = parts[2];
        if (c.rfind("constants=", 0) != 0) throw fail("expected constants=LIST");
        std::string list = c.substr(10);
        std::vector<Value> vals;
        if (list != "none" && !list.empty()) {
            std::stringstream ss(list);
            std::string item;
            while (std::getline(ss, item, ',')) {
                Value v = 0;
                auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
                if (ec != std::errc() || p != item.data() + item.size()) throw fail("bad constant '" + item + "'");
                vals.push_back(v);
            }
        }
        sort_unique(vals);
        s.constants = vals;
    }
    if (parts.size() > 3) throw fail("too many fields");
    return s;
}

std::string Structure::to_string() const {
    if (kind == Kind::Full) return "full";
    std::string s = "comb:" + std::to_string(depth);
    if (constants) {
        s += ":constants=";
        if (constants->empty()) s += "none";
        for (std::size_t i = 0; i < constants->size(); ++i) s += (i ? "," : "") + std::to_string((*constants)[i]);
    }
    return s;
}

// ---------------------------------------------------------------- COMB

namespace {

using Table = std::vector<Value>;
using TableSet = std::vector<Table>;
using TableSetP = std::shared_ptr<const TableSet>;

void normalize(TableSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Definable maps from a context of slots (mixed radix, slot 0 most
// significant) into a target space. Base spaces are opaque: values can be
// copied or replaced by designated constants, never inspected.
class Comb {
public:
    explicit Comb(const Structure& E) : E_(E), ekey_(E.to_string()) {}

    TableSetP def(const std::vector<TypeP>& slots, const TypeP& B, int d) {
        std::string key = ekey_ + "|" + std::to_string(d) + "|" + B->key + "|";
        for (const auto& s : slots) key += s->key + ",";
        {
            std::lock_guard<std::mutex> lk(mu());
            auto it = memo().find(key);
            if (it != memo().end()) return it->second;
        }
        auto r = std::make_shared<const TableSet>(compute(slots, B, d));
        std::lock_guard<std::mutex> lk(mu());
        memo().emplace(key, r);
        return r;
    }

private:
    static std::mutex& mu() {
        static std::mutex m;
        return m;
    }
    static std::unordered_map<std::string, TableSetP>& memo() {
        static std::unordered_map<std::string, TableSetP> m;
        return m;
    }

    static Value points(const std::vector<TypeP>& slots) {
        Value p = 1;
        for (const auto& s : slots) {
            p = mul_checked(p, s->size);
            if (p > kMaxPoints) throw std::length_error("COMB context too large");
        }
        return p;
    }

    static void guard(std::size_t tables, Value pts) {
        if (pts && tables > kMaxEntries / pts) throw std::length_error("COMB definable set too large");
    }

    TableSet compute(const std::vector<TypeP>& slots, const TypeP& B, int d) {
        Value P = points(slots);
        if (P == 0) return TableSet{Table{}};
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i]->tag == Type::Tag::Pair) {
                std::vector<TypeP> s2(slots.begin(), slots.begin() + i);
                s2.push_back(slots[i]->a);
                s2.push_back(slots[i]->b);
                s2.insert(s2.end(), slots.begin() + i + 1, slots.end());
                return *def(s2, B, d);  // pair codes are mixed radix: same indexing
            }
        }
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i]->tag == Type::Tag::Sum) return case_split(slots, i, B, d);

        TableSet out;
        switch (B->tag) {
            case Type::Tag::Pair: {
                auto s1 = def(slots, B->a, d), s2 = def(slots, B->b, d);
                guard(s1->size() * s2->size(), P);
                out.reserve(s1->size() * s2->size());
                for (const auto& t1 : *s1)
                    for (const auto& t2 : *s2) {
                        Table t(P);
                        for (Value p = 0; p < P; ++p) t[p] = pair_code(*B, t1[p], t2[p]);
                        out.push_back(std::move(t));
                    }
                normalize(out);
                return out;
            }
            case Type::Tag::Base: {
                if (E_.constants) {
                    for (Value c : *E_.constants)
                        if (c < B->n) out.push_back(Table(P, c));
                } else {
                    for (Value c = 0; c < B->n; ++c) out.push_back(Table(P, c));
                }
                break;
            }
            case Type::Tag::Sum: {
                auto s1 = def(slots, B->a, d), s2 = def(slots, B->b, d);
                for (const auto& t : *s1) out.push_back(t);
                for (const auto& t : *s2) {
                    Table u(t);
                    for (auto& v : u) v += B->a->size;
                    out.push_back(std::move(u));
                }
                break;
            }
            case Type::Tag::Func: {
                if (d >= 1) {
                    std::vector<TypeP> s2 = slots;
                    s2.push_back(B->a);
                    Value X = B->a->size;
                    auto body = def(s2, B->b, d - 1);
                    guard(out.size() + body->size(), P);
                    for (const auto& t : *body) {
                        Table u(P);
                        for (Value p = 0; p < P; ++p) {
                            Value code = 0;
                            for (Value z = 0; z < X; ++z) code += t[p * X + z] * B->powers[z];
                            u[p] = code;
                        }
                        out.push_back(std::move(u));
                    }
                }
                break;
            }
        }
        // variables
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (same_type(slots[i], B)) out.push_back(projection(slots, i, P));
        // let y = h(a) in t
        if (d >= 1) {
            for (std::size_t j = 0; j < slots.size(); ++j) {
                if (slots[j]->tag != Type::Tag::Func) continue;
                const Type& F = *slots[j];
                auto args = def(slots, F.a, d - 1);
                std::vector<TypeP> s2 = slots;
                s2.push_back(F.b);
                Value Y = F.b->size;
                auto bodies = def(s2, B, d - 1);
                Table hv = projection(slots, j, P);
                guard(out.size() + args->size() * bodies->size(), P);
                for (const auto& a : *args) {
                    std::vector<Value> y(P);
                    for (Value p = 0; p < P; ++p) y[p] = apply_code(F, hv[p], a[p]);
                    for (const auto& t : *bodies) {
                        Table u(P);
                        for (Value p = 0; p < P; ++p) u[p] = t[p * Y + y[p]];
                        out.push_back(std::move(u));
                    }
                }
                normalize(out);
            }
        }
        normalize(out);
        return out;
    }

    static Table projection(const std::vector<TypeP>& slots, std::size_t i, Value P) {
        Value stride = 1;
        for (std::size_t k = i + 1; k < slots.size(); ++k) stride *= slots[k]->size;
        Value n = slots[i]->size;
        Table t(P);
        for (Value p = 0; p < P; ++p) t[p] = (p / stride) % n;
        return t;
    }

    TableSet case_split(const std::vector<TypeP>& slots, std::size_t i, const TypeP& B, int d) {
        Value suffix = 1, prefix = 1;
        for (std::size_t k = i + 1; k < slots.size(); ++k) suffix *= slots[k]->size;
        for (std::size_t k = 0; k < i; ++k) prefix *= slots[k]->size;
        const TypeP& A1 = slots[i]->a;
        const TypeP& A2 = slots[i]->b;
        std::vector<TypeP> s1 = slots, s2 = slots;
        s1[i] = A1;
        s2[i] = A2;
        auto T1 = def(s1, B, d), T2 = def(s2, B, d);
        Value P = prefix * slots[i]->size * suffix;
        guard(T1->size() * T2->size(), P);
        TableSet out;
        out.reserve(T1->size() * T2->size());
        for (const auto& t1 : *T1)
            for (const auto& t2 : *T2) {
                Table t(P);
                for (Value pre = 0; pre < prefix; ++pre)
                    for (Value v = 0; v < slots[i]->size; ++v)
                        for (Value s = 0; s < suffix; ++s) {
                            Value idx = (pre * slots[i]->size + v) * suffix + s;
                            t[idx] = v < A1->size ? t1[(pre * A1->size + v) * suffix + s]
                                                  : t2[(pre * A2->size + (v - A1->size)) * suffix + s];
                        }
                out.push_back(std::move(t));
            }
        normalize(out);
        return out;
    }

    const Structure& E_;
    std::string ekey_;
};

std::optional<Witness> reduces_full(const FinProblem& f, const FinProblem& g, bool strong) {
    const auto& df = f.dom();
    Witness w;
    w.strong = strong;
    if (df.empty()) return w;
    const auto& dg = g.dom();
    if (dg.empty()) return std::nullopt;
    if (!strong) {
        for (Value x : df) {
            w.H.push_back({x, dg.front()});
            Value k = f.solutions(x).front();
            for (Value y : g.solutions(dg.front())) w.K.emplace_back(x, y, k);
        }
        return w;
    }
    // strong: K(y) must lie in f(x) for every x routed to a g-value producing y
    std::vector<std::vector<Value>> fx;
    for (Value x : df) fx.push_back(f.solutions(x));
    std::vector<std::vector<Value>> gy;
    for (Value z : dg) gy.push_back(g.solutions(z));
    std::map<Value, std::vector<Value>> allowed;
    std::vector<std::size_t> choice(df.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == df.size()) return true;
        for (std::size_t c = 0; c < dg.size(); ++c) {
            std::vector<std::pair<Value, std::optional<std::vector<Value>>>> undo;
            bool ok = true;
            for (Value y : gy[c]) {
                auto it = allowed.find(y);
                std::vector<Value> nxt;
                if (it == allowed.end()) {
                    nxt = fx[i];
                    undo.push_back({y, std::nullopt});
                } else {
                    std::set_intersection(it->second.begin(), it->second.end(), fx[i].begin(), fx[i].end(),
                                          std::back_inserter(nxt));
                    undo.push_back({y, it->second});
                }
                allowed[y] = nxt;
                if (nxt.empty()) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                choice[i] = c;
                if (rec(i + 1)) return true;
            }
            for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
                if (it->second) allowed[it->first] = *it->second;
                else allowed.erase(it->first);
            }
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    for (std::size_t i = 0; i < df.size(); ++i) w.H.push_back({df[i], dg[choice[i]]});
    for (const auto& [y, s] : allowed) w.K.emplace_back(0, y, s.front());
    return w;
}

}  // namespace

std::size_t definable_count(const TypeP& a, const TypeP& b, const Structure& E) {
    if (E.kind == Structure::Kind::Full) {
        Value n = 1;
        for (Value i = 0; i < a->size; ++i) n = mul_checked(n, b->size);
        return n;
    }
    Comb c(E);
    return c.def({a}, b, E.depth)->size();
}

namespace {

// One depth level of the COMB search. Tables come straight from the memo;
// H candidates are visited in table order, duplicates on dom(f) skipped.
std::optional<Witness> reduces_at(const FinProblem& f, const FinProblem& g, const Structure& E, int depth, bool strong) {
    const auto& df = f.dom();
    const std::size_t n = df.size();
    const Impl& gi = *g.impl();
    Comb comb(E);
    auto Hs = comb.def({f.in()}, g.in(), depth);
    auto Ks = strong ? comb.def({g.out()}, f.out(), depth) : comb.def({f.in(), g.out()}, f.out(), depth);
    if (Ks->empty()) return std::nullopt;

    const Value Y = g.out()->size;
    std::vector<Value> scratch;
    std::vector<std::vector<Value>> fx(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = f.solutions(df[i]);
    std::unordered_map<Value, std::vector<Value>> gcache;
    auto gsol = [&](Value z) -> const std::vector<Value>& {
        auto it = gcache.find(z);
        if (it == gcache.end()) it = gcache.emplace(z, gi.sols(z, scratch)).first;
        return it->second;
    };

    std::set<std::vector<Value>> seen;
    std::vector<Value> h(n);
    struct Con {
        Value idx;        // point of the K table
        std::size_t fi;   // which f(x)
    };
    std::vector<Con> cons;
    for (const auto& t : *Hs) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            h[i] = t[df[i]];
            ok = gi.in_dom(h[i]);
        }
        if (!ok || !seen.insert(h).second) continue;
        cons.clear();
        for (std::size_t i = 0; i < n; ++i)
            for (Value y : gsol(h[i])) cons.push_back({strong ? y : df[i] * Y + y, i});
        // cheap rejection: every point needs some K value at all
        const std::vector<Value>* best = nullptr;
        std::vector<Value> pts;
        for (const auto& c : cons) pts.push_back(c.idx);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto less_on_pts = [&](const std::vector<Value>& a, const std::vector<Value>& b) {
            for (Value p : pts)
                if (a[p] != b[p]) return a[p] < b[p];
            return false;
        };
        for (const auto& k : *Ks) {
            bool good = true;
            for (const auto& c : cons)
                if (!std::binary_search(fx[c.fi].begin(), fx[c.fi].end(), k[c.idx])) {
                    good = false;
                    break;
                }
            if (good && (!best || less_on_pts(k, *best))) best = &k;
        }
        if (!best) continue;
        Witness w;
        w.strong = strong;
        for (std::size_t i = 0; i < n; ++i) w.H.push_back({df[i], h[i]});
        for (Value p : pts) {
            if (strong) w.K.emplace_back(0, p, (*best)[p]);
            else w.K.emplace_back(p / Y, p % Y, (*best)[p]);
        }
        return w;
    }
    return std::nullopt;
}

}  // namespace

// Depths are tried in increasing order (definable sets grow with depth), so
// the reported witness is the first one at the least depth that has any.
std::optional<Witness> reduces(const FinProblem& f, const FinProblem& g, const Structure& E, bool strong) {
    if (E.kind == Structure::Kind::Full) return reduces_full(f, g, strong);
    if (f.dom().empty()) return Witness{{}, {}, strong};
    for (int d = 0; d <= E.depth; ++d)
        if (auto w = reduces_at(f, g, E, d, strong)) return w;
    return std::nullopt;
}

// ---------------------------------------------------------------- universes

SizeSpec SizeSpec::parse(std::string_view spec) {
    SizeSpec s;
    std::stringstream ss{std::string(spec)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad size spec item '" + item + "'");
        std::string k = item.substr(0, eq), v = item.substr(eq + 1);
        int n = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || p != v.data() + v.size() || n < 1 || n > 4)
            throw std::invalid_argument("size values must be 1..4 in '" + item + "'");
        if (k == "in") s.in = n;
        else if (k == "out") s.out = n;
        else if (k == "sol") s.sol = n;
        else throw std::invalid_argument("unknown size key '" + k + "'");
    }
    return s;
}

std::vector<FinProblem> universe(const SizeSpec& s) {
    std::vector<FinProblem> U;
    for (int n = 1; n <= s.in; ++n)
        for (int m = 1; m <= s.out; ++m) {
            std::vector<std::vector<Value>> subsets;
            for (int k = 1; k <= std::min(s.sol, m); ++k) {
                std::vector<bool> sel(m, false);
                std::fill(sel.begin(), sel.begin() + k, true);
                do {
                    std::vector<Value> sub;
                    for (int i = 0; i < m; ++i)
                        if (sel[i]) sub.push_back(i);
                    subsets.push_back(sub);
                } while (std::prev_permutation(sel.begin(), sel.end()));
            }
            std::vector<std::size_t> choice(n, 0);  // 0 = outside dom
            std::size_t c = subsets.size() + 1;
            while (true) {
                std::map<Value, std::vector<Value>> tab;
                for (int x = 0; x < n; ++x)
                    if (choice[x]) tab[x] = subsets[choice[x] - 1];
                U.push_back(FinProblem::table(Type::base(n), Type::base(m), tab, "u" + std::to_string(U.size())));
                int i = n - 1;
                while (i >= 0 && ++choice[i] == c) choice[i--] = 0;
                if (i < 0) break;
            }
        }
    return U;
}

// ---------------------------------------------------------------- files

ProblemFile parse_problem_file(std::string_view text) {
    ProblemFile pf;
    struct Pending {
        std::string name;
        Value n = 0, m = 0;
        std::map<Value, std::vector<Value>> tab;
        int line = 0;
    };
    std::optional<Pending> cur;
    auto flush = [&] {
        if (!cur) return;
        try {
            pf.problems.emplace(cur->name, FinProblem::table(Type::base(cur->n), Type::base(cur->m), cur->tab, cur->name));
        } catch (const std::exception& e) {
            throw ProblemFileError(e.what(), cur->line);
        }
        pf.order.push_back(cur->name);
        cur.reset();
    };
    auto num = [](const std::string& s, int line) {
        Value v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ProblemFileError("expected a number, got '" + s + "'", line);
        return v;
    };
    std::stringstream ss{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::stringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "structure") {
            if (tok.size() != 2) throw ProblemFileError("structure takes one spec", line);
            try {
                pf.structure = Structure::parse(tok[1]);
            } catch (const std::exception& e) {
                throw ProblemFileError(e.what(), line);
            }
        } else if (tok[0] == "problem") {
            flush();
            // problem NAME : N -> M
            if (tok.size() != 6 || tok[2] != ":" || tok[4] != "->")
                throw ProblemFileError("expected 'problem NAME : N -> M'", line);
            if (pf.problems.count(tok[1])) throw ProblemFileError("duplicate problem '" + tok[1] + "'", line);
            cur = Pending{tok[1], num(tok[3], line), num(tok[5], line), {}, line};
            if (cur->n > 4096 || cur->m > 4096) throw ProblemFileError("spaces are limited to 4096 codes", line);
        } else {
            if (!cur) throw ProblemFileError("table row outside a problem", line);
            if (tok.size() < 3 || tok[1] != ":") throw ProblemFileError("expected 'x : y1 y2 ...'", line);
            Value x = num(tok[0], line);
            if (cur->tab.count(x)) throw ProblemFileError("input " + tok[0] + " listed twice", line);
            auto& ys = cur->tab[x];
            for (std::size_t i = 2; i < tok.size(); ++i) ys.push_back(num(tok[i], line));
            if (x >= cur->n) throw ProblemFileError("input " + tok[0] + " outside 0.." + std::to_string(cur->n - 1), line);
            for (Value y : ys)
                if (y >= cur->m) throw ProblemFileError("solution " + std::to_string(y) + " outside the output space", line);
        }
    }
    flush();
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_file(ss.str());
}

// ---------------------------------------------------------------- laws

FinProblem evaluate(const Expr& e, const std::map<std::string, FinProblem>& env, int finpar_bound) {
    auto fold = [&](auto op) {
        const auto& ops = e.operands();
        FinProblem acc = evaluate(ops.back(), env, finpar_bound);
        for (std::size_t i = ops.size() - 1; i-- > 0;) acc = op(evaluate(ops[i], env, finpar_bound), acc);
        return acc;
    };
    switch (e.kind()) {
        case Kind::Zero: return FinProblem::zero();
        case Kind::One: return FinProblem::trivial();
        case Kind::Top: throw std::invalid_argument("TOP has no finite model");
        case Kind::OmegaPar: throw std::invalid_argument("^w has no finite model");
        case Kind::Atom: {
            std::string n = e.is_var() ? e.name().substr(1) : e.name();
            auto it = env.find(n);
            if (it == env.end()) throw std::invalid_argument("no finite problem bound to '" + e.name() + "'");
            return it->second;
        }
        case Kind::Sup: return fold([](const FinProblem& a, const FinProblem& b) { return op_sup(a, b); });
        case Kind::Inf: return fold([](const FinProblem& a, const FinProblem& b) { return op_inf(a, b); });
        case Kind::Prod: return fold([](const FinProblem& a, const FinProblem& b) { return op_prod(a, b); });
        case Kind::Comp: return fold([](const FinProblem& a, const FinProblem& b) { return op_star(a, b); });
        case Kind::Impl:
            return op_impl(evaluate(e.antecedent(), env, finpar_bound), evaluate(e.consequent(), env, finpar_bound));
        case Kind::FinPar: return op_finpar(evaluate(e.operand(0), env, finpar_bound), finpar_bound);
    }
    throw std::logic_error("evaluate: unknown kind");
}

LawReport check_law(const LawTemplate& t, const std::vector<FinProblem>& U, const Structure& E, bool stop_at_first) {
    t.validate();
    if (t.relation != Relation::Leq && t.relation != Relation::Equiv)
        throw std::invalid_argument("finite law check needs <= or ==");
    LawReport rep;
    const auto& vars = t.variables;
    if (U.empty() && !vars.empty()) return rep;
    std::vector<std::size_t> idx(vars.size(), 0);
    const FinProblem one = FinProblem::trivial();
    while (true) {
        std::map<std::string, FinProblem> env;
        for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = U[idx[i]];
        ++rep.assignments;
        bool skip = false;
        for (const auto& [v, conds] : t.side_conditions)
            for (SideCondition c : conds) {
                const FinProblem& p = env.at(v);
                if (c == SideCondition::Pointed && !reduces(one, p, E)) skip = true;
                if (c == SideCondition::NotZero && p.dom().empty()) skip = true;
            }
        if (!skip) {
            try {
                FinProblem l = evaluate(t.lhs, env), r = evaluate(t.rhs, env);
                std::string bad;
                if (!reduces(l, r, E)) bad = "lhs <= rhs";
                else if (t.relation == Relation::Equiv && !reduces(r, l, E)) bad = "rhs <= lhs";
                if (!bad.empty()) {
                    if (++rep.violations == 1) {
                        std::map<std::string, std::size_t> m;
                        for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = idx[i];
                        rep.first_violation = m;
                        rep.first_direction = bad;
                    }
                    if (stop_at_first) return rep;
                }
            } catch (const InfinityInFiniteModel&) {
                skip = true;
            }
        }
        if (skip) ++rep.skipped;
        int i = static_cast<int>(vars.size()) - 1;
        while (i >= 0 && ++idx[i] == U.size()) idx[i--] = 0;
        if (i < 0) break;
    }
    return rep;
}

}  // namespace wdeg::fin
