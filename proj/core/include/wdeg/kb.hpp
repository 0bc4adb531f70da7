#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wdeg/term.hpp"

namespace wdeg {

enum class Flag { Pointed, Cylinder, Fractal, TotalFractal, SingleValued, NonemptyDomain };

const char* flag_name(Flag f);
std::optional<Flag> flag_from_name(std::string_view s);

struct AtomEntry {
    std::string name;
    std::string description;
    std::string citation;
    std::map<Flag, std::string> flags;  // flag -> citation or "assumed"
};

class Catalog : public AtomOracle {
public:
    bool is_known(const std::string& name) const override { return atoms_.count(name) != 0; }
    // Pointed atoms have a computable point in the domain, so they count too.
    bool nonempty_domain(const std::string& name) const override;

    const AtomEntry* find(const std::string& name) const;
    bool has_flag(const std::string& name, Flag f) const;
    const std::vector<std::string>& names() const { return order_; }

    void add(AtomEntry e);  // throws std::invalid_argument on duplicates
    void set_flag(const std::string& name, Flag f, std::string citation);

private:
    std::unordered_map<std::string, AtomEntry> atoms_;
    std::vector<std::string> order_;
};

struct Fact {
    Relation relation = Relation::Leq;
    Expr lhs;
    Expr rhs;
    std::string citation;
    int line = 0;      // source line, 0 when added programmatically
    int origin = -1;   // for expanded facts: index into stated()
};

class KbError : public std::runtime_error {
public:
    KbError(const std::string& msg, int line) : std::runtime_error(msg), line(line) {}
    int line;
};

// Ground facts plus atom catalog. Stated facts are kept as written; the
// expanded view holds only LEQ and NLEQ after the load-time expansions
// (LT -> LEQ + reverse NLEQ, INCOMP -> two NLEQ, EQUIV -> two LEQ,
// pointed flag -> LEQ(1, atom)).
class KnowledgeBase {
public:
    static KnowledgeBase from_string(std::string_view text);
    static KnowledgeBase load(const std::string& path);
    std::string to_string() const;
    void save(const std::string& path) const;

    const Catalog& catalog() const { return catalog_; }

    void add_atom(AtomEntry e);
    void add_flag(const std::string& atom, Flag f, std::string citation);
    void add_fact(Relation r, const Expr& lhs, const Expr& rhs, std::string citation, int line = 0);
    void add_note(std::string text);

    const std::vector<Fact>& stated() const { return stated_; }
    const std::vector<Fact>& expanded() const { return expanded_; }
    const std::vector<std::string>& notes() const { return notes_; }

    // Literal lookup over stated facts and their expansions.
    bool query(Relation r, const Expr& lhs, const Expr& rhs) const;
    const Fact* find_leq(const Expr& lhs, const Expr& rhs) const;
    const Fact* find_nleq(const Expr& lhs, const Expr& rhs) const;

    // Expanded LEQ facts indexed by either side.
    const std::vector<int>& leq_from(const Expr& lhs) const;
    const std::vector<int>& leq_to(const Expr& rhs) const;
    std::vector<const Fact*> nleq_facts() const;

    // Default seed location baked in at build time; overridable by WDEG_FACTS.
    static std::string default_seed_path();

private:
    struct Blank {};
    struct Comment { std::string text; };
    struct AtomRec { std::string name; };
    struct FlagRec { std::string name; Flag flag; };
    struct FactRec { int index; };
    struct NoteRec { int index; };
    using Record = std::variant<Blank, Comment, AtomRec, FlagRec, FactRec, NoteRec>;

    void expand(const Fact& f, int origin);
    void push_expanded(Relation r, const Expr& lhs, const Expr& rhs, const std::string& cite, int line, int origin);
    void parse_line(std::string_view line, int lineno);

    Catalog catalog_;
    std::vector<Fact> stated_;
    std::vector<Fact> expanded_;
    std::vector<std::string> notes_;
    std::vector<Record> records_;
    std::unordered_map<Expr, std::vector<int>> leq_by_lhs_;
    std::unordered_map<Expr, std::vector<int>> leq_by_rhs_;
    std::unordered_map<Expr, std::vector<int>> nleq_by_lhs_;
};

}  // namespace wdeg
