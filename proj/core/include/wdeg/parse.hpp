#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wdeg/term.hpp"

namespace wdeg {

struct SourceSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, SourceSpan span) : std::runtime_error(msg), span(span) {}
    SourceSpan span;
};

struct ParseOptions {
    const AtomOracle* atoms = nullptr;  // null: every atom name is accepted
    bool template_mode = false;         // allows ?vars and atoms outside the catalog
};

// Parses and canonicalizes.
Expr parse_expr(std::string_view text, const ParseOptions& opts = {});

// "E0 REL E1 REL E2 ..." with REL one of <= < == >< !<=.
struct Statement {
    Expr first;
    std::vector<std::pair<Relation, Expr>> chain;
};
Statement parse_statement(std::string_view text, const ParseOptions& opts = {});

// "LHS <= RHS" or "LHS == RHS", optionally followed by
// "where pointed(?a), ?b != TOP, ?c != 0". Always parsed in template mode.
LawTemplate parse_template(std::string_view text, const AtomOracle* atoms = nullptr);

std::string print_expr(const Expr& e);
std::string print_relation(Relation r, const Expr& lhs, const Expr& rhs);
std::string print_template(const LawTemplate& t);

// Two-line rendering of the input with a caret under the span.
std::string render_error(std::string_view text, const ParseError& err);

}  // namespace wdeg
