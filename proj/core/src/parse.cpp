#include "wdeg/parse.hpp"

#include <algorithm>
#include <cctype>

namespace wdeg {

namespace {

enum class Tok {
    End, Zero, One, Top, Ident, Var, LParen, RParen, Comma,
    Sup, Inf, Prod, Comp, Arrow, Star, Omega,
    Leq, Lt, Equiv, Incomp, Nleq, Neq, Where, Pointed,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(s.substr(i, len)), {i, len}});
        i += len;
    };
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (starts("\\/")) { push(Tok::Sup, 2); continue; }
        if (starts("/\\")) { push(Tok::Inf, 2); continue; }
        if (starts("->")) { push(Tok::Arrow, 2); continue; }
        if (starts("^*")) { push(Tok::Star, 2); continue; }
        if (starts("^w")) { push(Tok::Omega, 2); continue; }
        if (starts("!<=")) { push(Tok::Nleq, 3); continue; }
        if (starts("!=")) { push(Tok::Neq, 2); continue; }
        if (starts("<=")) { push(Tok::Leq, 2); continue; }
        if (starts("==")) { push(Tok::Equiv, 2); continue; }
        if (starts("><")) { push(Tok::Incomp, 2); continue; }
        if (c == '<') { push(Tok::Lt, 1); continue; }
        if (c == '(') { push(Tok::LParen, 1); continue; }
        if (c == ')') { push(Tok::RParen, 1); continue; }
        if (c == ',') { push(Tok::Comma, 1); continue; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string_view w = s.substr(i, j - i);
            if (w == "0") { push(Tok::Zero, 1); continue; }
            if (w == "1") { push(Tok::One, 1); continue; }
            throw ParseError("unexpected number '" + std::string(w) + "'", {i, j - i});
        }
        if (c == '?') {
            std::size_t j = i + 1;
            if (j >= s.size() || !ident_start(s[j])) throw ParseError("variable name expected after '?'", {i, 1});
            while (j < s.size() && ident_char(s[j])) ++j;
            push(Tok::Var, j - i);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string_view w = s.substr(i, j - i);
            Tok k = Tok::Ident;
            if (w == "x") k = Tok::Prod;
            else if (w == "o") k = Tok::Comp;
            else if (w == "TOP") k = Tok::Top;
            else if (w == "where") k = Tok::Where;
            else if (w == "pointed") k = Tok::Pointed;
            push(k, j - i);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", {i, 1});
    }
    out.push_back({Tok::End, "", {s.size(), 0}});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts) : text_(text), toks_(lex(text)), opts_(opts) {}

    const Token& peek() const { return toks_[pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    Token take() { return toks_[pos_++]; }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return take();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string m = msg;
        if (t.kind == Tok::End) m += " at end of input";
        else m += " at '" + t.text + "'";
        throw ParseError(m, t.span.length ? t.span : SourceSpan{t.span.offset, 0});
    }

    // Raw (non-canonical) tree; canonicalized by the caller.
    Expr impl() {
        Expr lhs = sup();
        if (at(Tok::Arrow)) {
            take();
            Expr rhs = impl();
            return Expr::impl(lhs, rhs);
        }
        return lhs;
    }

    Expr nary(Kind k, Tok op, Expr (Parser::*next)()) {
        Expr first = (this->*next)();
        if (!at(op)) return first;
        std::vector<Expr> ops{first};
        while (at(op)) {
            take();
            ops.push_back((this->*next)());
        }
        return Expr::nary(k, std::move(ops));
    }

    Expr sup() { return nary(Kind::Sup, Tok::Sup, &Parser::inf); }
    Expr inf() { return nary(Kind::Inf, Tok::Inf, &Parser::comp); }
    Expr comp() { return nary(Kind::Comp, Tok::Comp, &Parser::prod); }
    Expr prod() { return nary(Kind::Prod, Tok::Prod, &Parser::post); }

    Expr post() {
        Expr e = primary();
        while (at(Tok::Star) || at(Tok::Omega)) {
            Tok k = take().kind;
            e = k == Tok::Star ? Expr::finpar(e) : Expr::omegapar(e);
        }
        return e;
    }

    Expr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Zero: take(); return Expr::zero();
            case Tok::One: take(); return Expr::one();
            case Tok::Top: take(); return Expr::top();
            case Tok::Var: {
                if (!opts_.template_mode) throw ParseError("variables are only allowed in templates", t.span);
                Token v = take();
                return Expr::var(v.text.substr(1));
            }
            case Tok::Ident: {
                if (!opts_.template_mode && opts_.atoms && !opts_.atoms->is_known(t.text))
                    throw ParseError("unknown atom '" + t.text + "'", t.span);
                Token a = take();
                return Expr::atom(a.text);
            }
            case Tok::LParen: {
                take();
                Expr e = impl();
                expect(Tok::RParen, "')'");
                return e;
            }
            default: fail("expected an expression");
        }
    }

    bool at_relation() const {
        switch (peek().kind) {
            case Tok::Leq: case Tok::Lt: case Tok::Equiv: case Tok::Incomp: case Tok::Nleq: return true;
            default: return false;
        }
    }

    Relation relation() {
        Tok k = take().kind;
        switch (k) {
            case Tok::Leq: return Relation::Leq;
            case Tok::Lt: return Relation::Lt;
            case Tok::Equiv: return Relation::Equiv;
            case Tok::Incomp: return Relation::Incomp;
            default: return Relation::Nleq;
        }
    }

    void finish() {
        if (!at(Tok::End)) fail("unexpected trailing input");
    }

    const ParseOptions& opts() const { return opts_; }

private:
    std::string_view text_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ParseOptions opts_;
};

}  // namespace

Expr parse_expr(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    Expr e = p.impl();
    p.finish();
    return canonicalize(e, opts.atoms);
}

Statement parse_statement(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    Statement st;
    st.first = canonicalize(p.impl(), opts.atoms);
    if (!p.at_relation()) p.fail("expected a relation (<=, <, ==, ><, !<=)");
    while (p.at_relation()) {
        Relation r = p.relation();
        st.chain.emplace_back(r, canonicalize(p.impl(), opts.atoms));
    }
    p.finish();
    return st;
}

LawTemplate parse_template(std::string_view text, const AtomOracle* atoms) {
    ParseOptions opts{atoms, true};
    Parser p(text, opts);
    LawTemplate t;
    t.lhs = canonicalize(p.impl(), atoms);
    if (!p.at(Tok::Leq) && !p.at(Tok::Equiv)) p.fail("expected '<=' or '=='");
    t.relation = p.take().kind == Tok::Leq ? Relation::Leq : Relation::Equiv;
    t.rhs = canonicalize(p.impl(), atoms);
    collect_vars(t.lhs, t.variables);
    collect_vars(t.rhs, t.variables);
    std::sort(t.variables.begin(), t.variables.end());
    if (p.at(Tok::Where)) {
        p.take();
        while (true) {
            std::string var;
            SideCondition cond;
            if (p.at(Tok::Pointed)) {
                p.take();
                p.expect(Tok::LParen, "'('");
                if (!p.at(Tok::Var)) p.fail("expected a variable");
                var = p.take().text.substr(1);
                p.expect(Tok::RParen, "')'");
                cond = SideCondition::Pointed;
            } else if (p.at(Tok::Var)) {
                var = p.take().text.substr(1);
                p.expect(Tok::Neq, "'!='");
                if (p.at(Tok::Top)) cond = SideCondition::NotTop;
                else if (p.at(Tok::Zero)) cond = SideCondition::NotZero;
                else p.fail("expected TOP or 0");
                p.take();
            } else {
                p.fail("expected a side condition");
            }
            if (std::find(t.variables.begin(), t.variables.end(), var) == t.variables.end())
                throw ParseError("side condition on undeclared variable ?" + var, {0, text.size()});
            t.side_conditions[var].push_back(cond);
            if (!p.at(Tok::Comma)) break;
            p.take();
        }
    }
    p.finish();
    return t;
}

namespace {

int level(const Expr& e) {
    switch (e.kind()) {
        case Kind::Impl: return 0;
        case Kind::Sup: return 1;
        case Kind::Inf: return 2;
        case Kind::Comp: return 3;
        case Kind::Prod: return 4;
        case Kind::FinPar:
        case Kind::OmegaPar: return 5;
        default: return 6;
    }
}

void print(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_level, std::string& out) {
    if (level(e) < min_level) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Kind::Zero: out += '0'; return;
        case Kind::One: out += '1'; return;
        case Kind::Top: out += "TOP"; return;
        case Kind::Atom: out += e.name(); return;
        case Kind::FinPar:
            print_operand(e.operand(0), 5, out);
            out += "^*";
            return;
        case Kind::OmegaPar:
            print_operand(e.operand(0), 5, out);
            out += "^w";
            return;
        case Kind::Impl:
            // Compound operands of -> are always bracketed for readability.
            print_operand(e.antecedent(), 5, out);
            out += " -> ";
            print_operand(e.consequent(), 5, out);
            return;
        default: break;
    }
    const char* sep = " x ";
    switch (e.kind()) {
        case Kind::Sup: sep = " \\/ "; break;
        case Kind::Inf: sep = " /\\ "; break;
        case Kind::Comp: sep = " o "; break;
        default: break;
    }
    int lv = level(e) + 1;
    bool first = true;
    for (const auto& c : e.operands()) {
        if (!first) out += sep;
        first = false;
        print_operand(c, lv, out);
    }
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

std::string print_relation(Relation r, const Expr& lhs, const Expr& rhs) {
    return print_expr(lhs) + " " + relation_token(r) + " " + print_expr(rhs);
}

std::string print_template(const LawTemplate& t) {
    std::string s = print_relation(t.relation, t.lhs, t.rhs);
    bool first = true;
    for (const auto& v : t.variables) {
        auto it = t.side_conditions.find(v);
        if (it == t.side_conditions.end()) continue;
        for (SideCondition c : it->second) {
            s += first ? " where " : ", ";
            first = false;
            if (c == SideCondition::Pointed) s += "pointed(?" + v + ")";
            else s += "?" + v + (c == SideCondition::NotTop ? " != TOP" : " != 0");
        }
    }
    return s;
}

std::string render_error(std::string_view text, const ParseError& err) {
    std::string s(text);
    s += '\n';
    s += std::string(std::min(err.span.offset, text.size()), ' ');
    s += std::string(std::max<std::size_t>(err.span.length, 1), '^');
    s += ' ';
    s += err.what();
    return s;
}

}  // namespace wdeg
