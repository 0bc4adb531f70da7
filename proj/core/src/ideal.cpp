#include "wdeg/ideal.hpp"

#include <algorithm>
#include <set>

namespace wdeg {

const char* answer_name(Answer a) {
    switch (a) {
        case Answer::Yes: return "yes";
        case Answer::No: return "no";
        case Answer::Unknown: return "unknown";
    }
    return "?";
}

IdealPresentation IdealPresentation::of(std::vector<Expr> gens, const AtomOracle* atoms) {
    IdealPresentation A;
    for (auto& g : gens) {
        if (g.has_var()) throw std::invalid_argument("ideal generators must be ground");
        A.generators.push_back(canonicalize(g, atoms));
    }
    std::sort(A.generators.begin(), A.generators.end());
    A.generators.erase(std::unique(A.generators.begin(), A.generators.end()), A.generators.end());
    return A;
}

std::vector<Expr> closure_terms(const IdealPresentation& A, const AtomOracle* atoms) {
    std::vector<std::vector<Expr>> by_size(A.max_size + 1);
    std::set<Expr> seen;
    auto add = [&](int k, Expr e) {
        if (seen.insert(e).second) by_size[k].push_back(std::move(e));
    };
    add(1, Expr::one());
    for (const auto& g : A.generators) add(1, g);
    for (int k = 2; k <= A.max_size; ++k)
        for (int i = 1; i < k; ++i)
            for (const auto& s : by_size[i])
                for (const auto& t : by_size[k - i]) {
                    add(k, make_canonical(Kind::Comp, {s, t}, atoms));
                    add(k, make_canonical(Kind::Sup, {s, t}, atoms));
                }
    std::vector<Expr> out;
    for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
    return out;
}

MemberResult member(const Engine& E, const Expr& c0, const IdealPresentation& A) {
    const AtomOracle* atoms = &E.kb().catalog();
    Expr c = canonicalize(c0, atoms);
    MemberResult r;
    for (const auto& t : closure_terms(A, atoms)) {
        Judgment j = E.derive(Relation::Leq, c, t, A.budget);
        if (j.verdict == Verdict::Proved) {
            r.answer = Answer::Yes;
            r.term = t;
            r.trace = j.trace;
            return r;
        }
    }
    return r;
}

QuotientResult quotient_leq(const Engine& E, const Expr& a0, const Expr& b0, const IdealPresentation& A) {
    const AtomOracle* atoms = &E.kb().catalog();
    Expr a = canonicalize(a0, atoms), b = canonicalize(b0, atoms);
    QuotientResult r;
    bool gens_not_top = std::all_of(A.generators.begin(), A.generators.end(), [](const Expr& g) { return discharge_not_top(g); });

    // constant folding: b o c is 0 for b = 0, and never TOP when b and A avoid TOP
    if (gens_not_top && b.is(Kind::Zero) && discharge_nonzero(a, atoms)) {
        r.answer = Answer::No;
        r.reason = "b o c folds to 0 for every c in A, and a is nonzero";
        Judgment j = E.derive(Relation::Nleq, a, b, A.budget);
        if (j.verdict == Verdict::Proved) r.trace = j.trace;
        return r;
    }
    if (gens_not_top && a.is(Kind::Top) && discharge_not_top(b)) {
        r.answer = Answer::No;
        r.reason = "b o c is below TOP for every c in A";
        return r;
    }
    for (const auto& t : closure_terms(A, atoms)) {
        Expr rhs = make_canonical(Kind::Comp, {b, t}, atoms);
        Judgment j = E.derive(Relation::Leq, a, rhs, A.budget);
        if (j.verdict == Verdict::Proved) {
            r.answer = Answer::Yes;
            r.witness = t;
            r.trace = j.trace;
            return r;
        }
    }
    r.reason = "no closure term within the size cap gave a proof";
    return r;
}

AxiomReport check_axioms(const std::vector<fin::FinProblem>& problems, const fin::Structure& E,
                         const std::vector<std::size_t>& subset) {
    const std::size_t n = problems.size();
    std::vector<char> inA(n, 0);
    for (std::size_t i : subset) {
        if (i >= n) throw std::out_of_range("check_axioms: subset index " + std::to_string(i) + " out of range");
        inA[i] = 1;
    }
    std::vector<char> R(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) R[i * n + j] = fin::reduces(problems[i], problems[j], E).has_value();
    auto below_member = [&](const fin::FinProblem& p) {
        for (std::size_t c : subset)
            if (fin::reduces(p, problems[c], E)) return true;
        return false;
    };
    auto name = [&](std::size_t i) {
        return problems[i].name().empty() ? "#" + std::to_string(i) : problems[i].name();
    };

    AxiomReport rep;
    std::string why;
    bool ideal = below_member(fin::FinProblem::trivial());
    if (!ideal) why = "1 is not below any member";
    for (std::size_t c : subset)
        for (std::size_t b = 0; b < n && ideal; ++b)
            if (R[b * n + c] && !inA[b]) {
                ideal = false;
                why = name(b) + " <= " + name(c) + " but " + name(b) + " is not in the subset";
            }
    for (std::size_t x : subset)
        for (std::size_t y : subset) {
            if (!ideal) break;
            if (!below_member(fin::op_star(problems[x], problems[y]))) {
                ideal = false;
                why = name(x) + " o " + name(y) + " is not below any member";
            } else if (!below_member(fin::op_sup(problems[x], problems[y]))) {
                ideal = false;
                why = name(x) + " \\/ " + name(y) + " is not below any member";
            }
        }
    rep.is_ideal = ideal;

    // membership at the level of degrees: below some member of the subset
    std::vector<char> memb(n);
    for (std::size_t i = 0; i < n; ++i) memb[i] = inA[i] || below_member(problems[i]);
    bool prime = true;
    for (std::size_t x = 0; x < n && prime; ++x)
        for (std::size_t y = 0; y < n && prime; ++y)
            if (!memb[x] && !memb[y] && below_member(fin::op_inf(problems[x], problems[y]))) {
                prime = false;
                if (why.empty()) why = name(x) + " /\\ " + name(y) + " is below a member, neither factor is";
            }
    rep.is_prime = prime;

    bool etheric = true;
    for (std::size_t x : subset)
        for (std::size_t y = 0; y < n && etheric; ++y) {
            auto lhs = fin::op_star(problems[x], problems[y]);
            bool ok = false;
            for (std::size_t z : subset)
                if (fin::reduces(lhs, fin::op_star(problems[y], problems[z]), E)) {
                    ok = true;
                    break;
                }
            if (!ok) {
                etheric = false;
                if (why.empty()) why = "no a' with " + name(x) + " o " + name(y) + " <= " + name(y) + " o a'";
            }
        }
    rep.is_etheric = etheric;
    rep.failure = why;
    return rep;
}

}  // namespace wdeg
