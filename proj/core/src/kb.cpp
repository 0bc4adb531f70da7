#include "wdeg/kb.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wdeg/parse.hpp"

#ifndef WDEG_SEED_PATH
#define WDEG_SEED_PATH "data/paper-facts"
#endif
#ifndef WDEG_INSTALLED_SEED_PATH
#define WDEG_INSTALLED_SEED_PATH ""
#endif

namespace wdeg {

const char* flag_name(Flag f) {
    switch (f) {
        case Flag::Pointed: return "pointed";
        case Flag::Cylinder: return "cylinder";
        case Flag::Fractal: return "fractal";
        case Flag::TotalFractal: return "total_fractal";
        case Flag::SingleValued: return "single_valued";
        case Flag::NonemptyDomain: return "nonempty_domain";
    }
    return "?";
}

std::optional<Flag> flag_from_name(std::string_view s) {
    for (Flag f : {Flag::Pointed, Flag::Cylinder, Flag::Fractal, Flag::TotalFractal, Flag::SingleValued,
                   Flag::NonemptyDomain})
        if (s == flag_name(f)) return f;
    return std::nullopt;
}

bool Catalog::nonempty_domain(const std::string& name) const {
    return has_flag(name, Flag::NonemptyDomain) || has_flag(name, Flag::Pointed);
}

const AtomEntry* Catalog::find(const std::string& name) const {
    auto it = atoms_.find(name);
    return it == atoms_.end() ? nullptr : &it->second;
}

bool Catalog::has_flag(const std::string& name, Flag f) const {
    const AtomEntry* e = find(name);
    return e && e->flags.count(f);
}

void Catalog::add(AtomEntry e) {
    if (e.name.empty() || e.name[0] == '?') throw std::invalid_argument("invalid atom name '" + e.name + "'");
    if (atoms_.count(e.name)) throw std::invalid_argument("duplicate atom '" + e.name + "'");
    order_.push_back(e.name);
    std::string n = e.name;
    atoms_.emplace(n, std::move(e));
}

void Catalog::set_flag(const std::string& name, Flag f, std::string citation) {
    auto it = atoms_.find(name);
    if (it == atoms_.end()) throw std::invalid_argument("flag on unknown atom '" + name + "'");
    if (citation.empty()) throw std::invalid_argument("flag without citation on '" + name + "'");
    it->second.flags[f] = std::move(citation);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Reads a double-quoted string starting at s[i]; advances i past it.
std::string read_quoted(std::string_view s, std::size_t& i, int lineno) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size() || s[i] != '"') throw KbError("expected a quoted string", lineno);
    ++i;
    std::string out;
    while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        out += s[i++];
    }
    if (i >= s.size()) throw KbError("unterminated string", lineno);
    ++i;
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string read_word(std::string_view s, std::size_t& i) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    std::string w(s.substr(i, j - i));
    i = j;
    return w;
}

void expect_end(std::string_view s, std::size_t i, int lineno) {
    if (!trim(s.substr(i)).empty()) throw KbError("unexpected trailing text", lineno);
}

// Position of the '@' introducing the citation: the last one outside quotes.
std::size_t citation_at(std::string_view s) {
    bool in_q = false;
    std::size_t pos = std::string_view::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && in_q) { ++i; continue; }
        if (s[i] == '"') in_q = !in_q;
        else if (s[i] == '@' && !in_q) pos = i;
    }
    return pos;
}

bool starts_with_word(std::string_view s, std::string_view w) {
    return s.size() > w.size() && s.substr(0, w.size()) == w && s[w.size()] == ' ';
}

}  // namespace

void KnowledgeBase::parse_line(std::string_view raw, int lineno) {
    std::string_view line = trim(raw);
    if (line.empty()) {
        records_.push_back(Blank{});
        return;
    }
    if (line[0] == '#') {
        records_.push_back(Comment{std::string(line)});
        return;
    }
    try {
        if (starts_with_word(line, "atom")) {
            std::size_t i = 4;
            AtomEntry e;
            e.name = read_word(line, i);
            e.description = read_quoted(line, i, lineno);
            while (i < line.size() && line[i] == ' ') ++i;
            if (i >= line.size() || line[i] != '@') throw KbError("expected '@' before citation", lineno);
            ++i;
            e.citation = read_quoted(line, i, lineno);
            expect_end(line, i, lineno);
            add_atom(std::move(e));
            return;
        }
        if (starts_with_word(line, "flag")) {
            std::size_t i = 4;
            std::string name = read_word(line, i);
            std::string fname = read_word(line, i);
            auto f = flag_from_name(fname);
            if (!f) throw KbError("unknown flag '" + fname + "'", lineno);
            while (i < line.size() && line[i] == ' ') ++i;
            std::string cite;
            if (line.substr(i) == "assumed") {
                cite = "assumed";
                i = line.size();
            } else {
                if (i >= line.size() || line[i] != '@') throw KbError("expected '@ \"citation\"' or 'assumed'", lineno);
                ++i;
                cite = read_quoted(line, i, lineno);
            }
            expect_end(line, i, lineno);
            add_flag(name, *f, cite);
            return;
        }
        if (starts_with_word(line, "note")) {
            std::size_t i = 4;
            std::string text = read_quoted(line, i, lineno);
            expect_end(line, i, lineno);
            add_note(std::move(text));
            return;
        }
        std::size_t at = citation_at(line);
        if (at == std::string_view::npos) throw KbError("fact without citation", lineno);
        std::size_t i = at + 1;
        std::string cite = read_quoted(line, i, lineno);
        expect_end(line, i, lineno);
        std::string_view body = trim(line.substr(0, at));
        Statement st = parse_statement(body, ParseOptions{&catalog_, false});
        Expr prev = st.first;
        for (const auto& [rel, e] : st.chain) {
            add_fact(rel, prev, e, cite, lineno);
            prev = e;
        }
    } catch (const KbError&) {
        throw;
    } catch (const ParseError& e) {
        throw KbError(std::string("parse error: ") + e.what(), lineno);
    } catch (const std::invalid_argument& e) {
        throw KbError(e.what(), lineno);
    }
}

KnowledgeBase KnowledgeBase::from_string(std::string_view text) {
    KnowledgeBase kb;
    int lineno = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        kb.parse_line(text.substr(start, end - start), lineno);
        start = end + 1;
    }
    return kb;
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KbError("cannot open fact file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string KnowledgeBase::to_string() const {
    std::string out;
    for (const auto& rec : records_) {
        if (std::holds_alternative<Blank>(rec)) {
        } else if (auto* c = std::get_if<Comment>(&rec)) {
            out += c->text;
        } else if (auto* a = std::get_if<AtomRec>(&rec)) {
            const AtomEntry* e = catalog_.find(a->name);
            out += "atom " + e->name + " " + quote(e->description) + " @ " + quote(e->citation);
        } else if (auto* f = std::get_if<FlagRec>(&rec)) {
            const std::string& cite = catalog_.find(f->name)->flags.at(f->flag);
            out += "flag " + f->name + " " + flag_name(f->flag);
            out += cite == "assumed" ? std::string(" assumed") : " @ " + quote(cite);
        } else if (auto* r = std::get_if<FactRec>(&rec)) {
            const Fact& fact = stated_[r->index];
            out += print_relation(fact.relation, fact.lhs, fact.rhs) + " @ " + quote(fact.citation);
        } else if (auto* n = std::get_if<NoteRec>(&rec)) {
            out += "note " + quote(notes_[n->index]);
        }
        out += '\n';
    }
    return out;
}

void KnowledgeBase::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw KbError("cannot write fact file '" + path + "'", 0);
    out << to_string();
}

void KnowledgeBase::add_atom(AtomEntry e) {
    if (e.citation.empty()) throw std::invalid_argument("atom '" + e.name + "' has no citation");
    std::string name = e.name;
    catalog_.add(std::move(e));
    records_.push_back(AtomRec{name});
}

void KnowledgeBase::add_flag(const std::string& atom, Flag f, std::string citation) {
    catalog_.set_flag(atom, f, std::move(citation));
    records_.push_back(FlagRec{atom, f});
    if (f == Flag::Pointed)
        push_expanded(Relation::Leq, Expr::one(), Expr::atom(atom), "pointed flag of " + atom, 0, -1);
}

void KnowledgeBase::add_note(std::string text) {
    records_.push_back(NoteRec{static_cast<int>(notes_.size())});
    notes_.push_back(std::move(text));
}

void KnowledgeBase::add_fact(Relation r, const Expr& lhs, const Expr& rhs, std::string citation, int line) {
    if (citation.empty()) throw KbError("fact without citation", line);
    if (lhs.has_var() || rhs.has_var()) throw KbError("facts must be ground", line);
    Fact f{r, canonicalize(lhs, &catalog_), canonicalize(rhs, &catalog_), std::move(citation), line, -1};
    int idx = static_cast<int>(stated_.size());
    stated_.push_back(f);
    records_.push_back(FactRec{idx});
    expand(stated_.back(), idx);
}

void KnowledgeBase::expand(const Fact& f, int origin) {
    switch (f.relation) {
        case Relation::Leq:
            push_expanded(Relation::Leq, f.lhs, f.rhs, f.citation, f.line, origin);
            break;
        case Relation::Lt:
            push_expanded(Relation::Leq, f.lhs, f.rhs, f.citation, f.line, origin);
            push_expanded(Relation::Nleq, f.rhs, f.lhs, f.citation, f.line, origin);
            break;
        case Relation::Equiv:
            push_expanded(Relation::Leq, f.lhs, f.rhs, f.citation, f.line, origin);
            push_expanded(Relation::Leq, f.rhs, f.lhs, f.citation, f.line, origin);
            break;
        case Relation::Incomp:
            push_expanded(Relation::Nleq, f.lhs, f.rhs, f.citation, f.line, origin);
            push_expanded(Relation::Nleq, f.rhs, f.lhs, f.citation, f.line, origin);
            break;
        case Relation::Nleq:
            push_expanded(Relation::Nleq, f.lhs, f.rhs, f.citation, f.line, origin);
            break;
    }
}

void KnowledgeBase::push_expanded(Relation r, const Expr& lhs, const Expr& rhs, const std::string& cite, int line,
                                  int origin) {
    auto pair_text = [&] { return print_expr(lhs) + " , " + print_expr(rhs); };
    if (r == Relation::Leq) {
        if (find_nleq(lhs, rhs)) throw KbError("contradictory facts: both <= and !<= on " + pair_text(), line);
        if (find_leq(lhs, rhs)) return;
        int idx = static_cast<int>(expanded_.size());
        expanded_.push_back({Relation::Leq, lhs, rhs, cite, line, origin});
        leq_by_lhs_[lhs].push_back(idx);
        leq_by_rhs_[rhs].push_back(idx);
    } else {
        if (lhs == rhs) throw KbError("contradictory fact: !<= of a term with itself: " + pair_text(), line);
        if (lhs.is(Kind::Zero) || rhs.is(Kind::Top))
            throw KbError("contradictory fact: !<= against a bound constant: " + pair_text(), line);
        if (find_leq(lhs, rhs)) throw KbError("contradictory facts: both <= and !<= on " + pair_text(), line);
        if (find_nleq(lhs, rhs)) return;
        int idx = static_cast<int>(expanded_.size());
        expanded_.push_back({Relation::Nleq, lhs, rhs, cite, line, origin});
        nleq_by_lhs_[lhs].push_back(idx);
    }
}

const Fact* KnowledgeBase::find_leq(const Expr& lhs, const Expr& rhs) const {
    auto it = leq_by_lhs_.find(lhs);
    if (it == leq_by_lhs_.end()) return nullptr;
    for (int i : it->second)
        if (expanded_[i].rhs == rhs) return &expanded_[i];
    return nullptr;
}

const Fact* KnowledgeBase::find_nleq(const Expr& lhs, const Expr& rhs) const {
    auto it = nleq_by_lhs_.find(lhs);
    if (it == nleq_by_lhs_.end()) return nullptr;
    for (int i : it->second)
        if (expanded_[i].rhs == rhs) return &expanded_[i];
    return nullptr;
}

bool KnowledgeBase::query(Relation r, const Expr& lhs, const Expr& rhs) const {
    switch (r) {
        case Relation::Leq: return find_leq(lhs, rhs) != nullptr;
        case Relation::Nleq: return find_nleq(lhs, rhs) != nullptr;
        case Relation::Equiv: return find_leq(lhs, rhs) && find_leq(rhs, lhs);
        case Relation::Lt: return find_leq(lhs, rhs) && find_nleq(rhs, lhs);
        case Relation::Incomp: return find_nleq(lhs, rhs) && find_nleq(rhs, lhs);
    }
    return false;
}

const std::vector<int>& KnowledgeBase::leq_from(const Expr& lhs) const {
    static const std::vector<int> empty;
    auto it = leq_by_lhs_.find(lhs);
    return it == leq_by_lhs_.end() ? empty : it->second;
}

const std::vector<int>& KnowledgeBase::leq_to(const Expr& rhs) const {
    static const std::vector<int> empty;
    auto it = leq_by_rhs_.find(rhs);
    return it == leq_by_rhs_.end() ? empty : it->second;
}

std::vector<const Fact*> KnowledgeBase::nleq_facts() const {
    std::vector<const Fact*> out;
    for (const auto& f : expanded_)
        if (f.relation == Relation::Nleq) out.push_back(&f);
    return out;
}

std::string KnowledgeBase::default_seed_path() {
    if (const char* env = std::getenv("WDEG_FACTS"); env && *env) return env;
    std::string built = WDEG_SEED_PATH;
    if (std::filesystem::exists(built)) return built;
    std::string installed = WDEG_INSTALLED_SEED_PATH;
    if (!installed.empty() && std::filesystem::exists(installed)) return installed;
    return built;
}

}  // namespace wdeg
