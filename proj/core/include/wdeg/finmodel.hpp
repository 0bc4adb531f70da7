#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "wdeg/term.hpp"

namespace wdeg::fin {

using Value = std::uint64_t;

// Finite coded spaces. Base(n) = {0..n-1}; pairs, coproducts and the space of
// all total functions, each coded by one integer.
struct Type;
using TypeP = std::shared_ptr<const Type>;

struct Type {
    enum class Tag { Base, Pair, Sum, Func };
    Tag tag = Tag::Base;
    Value n = 0;  // Base only
    TypeP a, b;   // Pair/Sum components; Func domain a, codomain b
    Value size = 0;
    std::string key;
    std::vector<Value> powers;  // Func: |cod|^i for i < |dom|

    static TypeP base(Value n);
    static TypeP pair(TypeP a, TypeP b);
    static TypeP sum(TypeP a, TypeP b);
    static TypeP func(TypeP dom, TypeP cod);  // throws std::length_error past 2^60 codes
};

bool same_type(const TypeP& x, const TypeP& y);

Value pair_code(const Type& p, Value a, Value b);
std::pair<Value, Value> unpair(const Type& p, Value v);
Value apply_code(const Type& f, Value h, Value x);

class InfinityInFiniteModel : public std::runtime_error {
public:
    InfinityInFiniteModel() : std::runtime_error("infinity in finite model: (g -> f) with dom(g) empty and dom(f) nonempty") {}
};

class SpaceMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FinProblem {
public:
    struct Impl;

    FinProblem();  // the trivial problem 1

    // Explicit table. Every listed input is in dom and needs a nonempty set.
    static FinProblem table(TypeP in, TypeP out, const std::map<Value, std::vector<Value>>& sol, std::string name = "");
    static FinProblem trivial();
    static FinProblem zero(TypeP in = Type::base(1), TypeP out = Type::base(1));

    const TypeP& in() const;
    const TypeP& out() const;
    bool in_dom(Value x) const;
    std::vector<Value> solutions(Value x) const;  // sorted; empty outside dom
    const std::vector<Value>& dom() const;        // throws std::length_error on oversize spaces
    const std::string& name() const;
    FinProblem named(std::string n) const;

    std::string describe() const;  // "in -> out" plus the table when small

    explicit FinProblem(std::shared_ptr<const Impl> p, std::string name = "") : p_(std::move(p)), name_(std::move(name)) {}
    const std::shared_ptr<const Impl>& impl() const { return p_; }

private:
    std::shared_ptr<const Impl> p_;
    std::string name_;
};

FinProblem op_sup(const FinProblem& f, const FinProblem& g);
FinProblem op_inf(const FinProblem& f, const FinProblem& g);
FinProblem op_prod(const FinProblem& f, const FinProblem& g);
// pass defaults to out(g); throws std::invalid_argument for an empty pass set
FinProblem op_star(const FinProblem& f, const FinProblem& g, const std::optional<TypeP>& pass = std::nullopt);
FinProblem op_impl(const FinProblem& g, const FinProblem& f);  // throws InfinityInFiniteModel
FinProblem op_finpar(const FinProblem& f, int bound);
bool tightens(const FinProblem& f, const FinProblem& g);  // throws SpaceMismatch

struct Structure {
    enum class Kind { Full, Comb };
    Kind kind = Kind::Comb;
    int depth = 4;
    std::optional<std::vector<Value>> constants;  // designated base codes; all codes when unset

    static Structure full() { return {Kind::Full, 0, std::nullopt}; }
    static Structure comb(int depth = 4) { return {Kind::Comb, depth, std::nullopt}; }
    // "full", "comb:4", "comb:4:constants=0,1"
    static Structure parse(std::string_view spec);
    std::string to_string() const;
};

struct Witness {
    std::vector<std::pair<Value, Value>> H;               // x -> H(x) on dom(f)
    std::vector<std::tuple<Value, Value, Value>> K;        // (x, y) -> K(x, y); x is 0 when strong
    bool strong = false;
};

std::optional<Witness> reduces(const FinProblem& f, const FinProblem& g, const Structure& E, bool strong = false);

// Number of COMB-definable maps A -> B at the structure's depth (diagnostics, tests).
std::size_t definable_count(const TypeP& a, const TypeP& b, const Structure& E);

struct SizeSpec {
    int in = 2;
    int out = 2;
    int sol = 2;
    static SizeSpec parse(std::string_view spec);  // "in=2,out=2,sol=2"
};

// All table problems with in-space Base(1..in), out-space Base(1..out),
// any domain and solution sets of size 1..sol.
std::vector<FinProblem> universe(const SizeSpec& s);

// Problem description files; see docs/problem-format.md.
struct ProblemFile {
    std::map<std::string, FinProblem> problems;
    std::vector<std::string> order;
    std::optional<Structure> structure;
};
class ProblemFileError : public std::runtime_error {
public:
    ProblemFileError(const std::string& msg, int line) : std::runtime_error(msg), line(line) {}
    int line;
};
ProblemFile parse_problem_file(std::string_view text);
ProblemFile load_problem_file(const std::string& path);

// Evaluate a ground-or-template expression with variables bound to problems.
// TOP, atoms and ^w have no finite semantics and throw std::invalid_argument.
FinProblem evaluate(const Expr& e, const std::map<std::string, FinProblem>& env, int finpar_bound = 2);

struct LawReport {
    std::size_t assignments = 0;
    std::size_t skipped = 0;  // side condition failed or infinity
    std::size_t violations = 0;
    std::optional<std::map<std::string, std::size_t>> first_violation;  // variable -> universe index
    std::string first_direction;
};

// Checks t over every assignment of its variables to problems of U.
LawReport check_law(const LawTemplate& t, const std::vector<FinProblem>& U, const Structure& E, bool stop_at_first = false);

}  // namespace wdeg::fin
