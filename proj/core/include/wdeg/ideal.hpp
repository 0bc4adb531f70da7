#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wdeg/engine.hpp"
#include "wdeg/finmodel.hpp"

namespace wdeg {

// The ideal generated by generators and 1 under o and \/, closed downwards.
struct IdealPresentation {
    std::vector<Expr> generators;
    int max_size = 3;          // generator occurrences in a closure term
    Budget budget{6, 4000, 40};  // per derive call

    // Canonicalizes the generators.
    static IdealPresentation of(std::vector<Expr> gens, const AtomOracle* atoms = nullptr);
};

enum class Answer { Yes, No, Unknown };
const char* answer_name(Answer a);

struct MemberResult {
    Answer answer = Answer::Unknown;  // never No
    std::optional<Expr> term;         // closure term dominating c
    Trace trace;
};

struct QuotientResult {
    Answer answer = Answer::Unknown;
    std::optional<Expr> witness;  // c with a <= b o c
    Trace trace;                  // a <= b o c, or the refutation
    std::string reason;
};

// Closure terms in order of size: 1, generators, then o and \/ combinations.
std::vector<Expr> closure_terms(const IdealPresentation& A, const AtomOracle* atoms = nullptr);

MemberResult member(const Engine& E, const Expr& c, const IdealPresentation& A);

QuotientResult quotient_leq(const Engine& E, const Expr& a, const Expr& b, const IdealPresentation& A);

struct AxiomReport {
    bool is_ideal = false;
    bool is_prime = false;
    bool is_etheric = false;
    std::string failure;  // first violated axiom, human readable
};

// Quantifiers range over the given list; subset holds indices into problems.
AxiomReport check_axioms(const std::vector<fin::FinProblem>& problems, const fin::Structure& E,
                         const std::vector<std::size_t>& subset);

}  // namespace wdeg
