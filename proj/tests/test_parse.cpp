#include <doctest.h>

#include "random_expr.hpp"
#include "wdeg/kb.hpp"
#include "wdeg/parse.hpp"

using namespace wdeg;

namespace {
Expr A(const char* n) { return Expr::atom(n); }
}  // namespace

TEST_CASE("grammar examples") {
    CHECK(parse_expr("LPO x lim") == canonicalize(Expr::prod({A("LPO"), A("lim")})));
    Expr i = parse_expr("C2 -> C01");
    REQUIRE(i.is(Kind::Impl));
    CHECK(i.antecedent() == A("C2"));
    CHECK(i.consequent() == A("C01"));
    Expr c = parse_expr("lim o LPO^*");
    REQUIRE(c.is(Kind::Comp));
    CHECK(c.operand(0) == A("lim"));
    CHECK(c.operand(1) == Expr::finpar(A("LPO")));
}

TEST_CASE("precedence: postfix, x, o, /\\, \\/, ->") {
    CHECK(parse_expr("a x b o c") == parse_expr("(a x b) o c"));
    CHECK(parse_expr("a o b /\\ c") == parse_expr("(a o b) /\\ c"));
    CHECK(parse_expr("a /\\ b \\/ c") == parse_expr("(a /\\ b) \\/ c"));
    CHECK(parse_expr("a \\/ b -> c") == parse_expr("(a \\/ b) -> c"));
    CHECK(parse_expr("a -> b -> c") == parse_expr("a -> (b -> c)"));
    CHECK(parse_expr("a x b^w") == parse_expr("a x (b^w)"));
    CHECK(parse_expr("a^*^w") == canonicalize(Expr::omegapar(Expr::finpar(A("a")))));
}

TEST_CASE("printing") {
    CHECK(print_expr(canonicalize(Expr::prod({A("LPO"), A("lim")}))) == "LPO x lim");
    CHECK(print_expr(Expr::top()) == "TOP");
    CHECK(print_expr(Expr::impl(A("CN"), Expr::comp({A("C2N"), A("lim")}))) == "CN -> (C2N o lim)");
    CHECK(print_expr(Expr::zero()) == "0");
    CHECK(print_expr(Expr::one()) == "1");
}

TEST_CASE("statements and chains") {
    Statement s = parse_statement("?a /\\ ?b <= ?a x ?b <= ?a o ?b", ParseOptions{nullptr, true});
    REQUIRE(s.chain.size() == 2);
    CHECK(s.chain[0].first == Relation::Leq);
    Statement t = parse_statement("CN >< C2N");
    CHECK(t.chain[0].first == Relation::Incomp);
    CHECK(parse_statement("a !<= b").chain[0].first == Relation::Nleq);
    CHECK(parse_statement("a < b").chain[0].first == Relation::Lt);
    CHECK(parse_statement("a == b").chain[0].first == Relation::Equiv);
}

TEST_CASE("templates with side conditions") {
    LawTemplate t = parse_template("(?a /\\ 1) -> 1 == ?a -> 1 where ?a != TOP");
    CHECK(t.relation == Relation::Equiv);
    CHECK(t.variables == std::vector<std::string>{"a"});
    REQUIRE(t.side_conditions.count("a"));
    CHECK(t.side_conditions.at("a") == std::vector<SideCondition>{SideCondition::NotTop});
    LawTemplate p = parse_template("?a <= ?b where pointed(?a), ?b != 0");
    CHECK(p.side_conditions.at("a") == std::vector<SideCondition>{SideCondition::Pointed});
    CHECK(p.side_conditions.at("b") == std::vector<SideCondition>{SideCondition::NotZero});
    CHECK(parse_template(print_template(t)).lhs == t.lhs);
}

TEST_CASE("errors carry a span") {
    auto span_of = [](const char* text) {
        try {
            parse_expr(text);
        } catch (const ParseError& e) {
            return e.span;
        }
        FAIL("no error for " << text);
        return SourceSpan{};
    };
    CHECK(span_of("LPO x").offset == 5);
    CHECK(span_of("LPO ## lim").offset == 4);
    CHECK(span_of("(LPO").offset == 4);
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    CHECK_THROWS_AS(parse_expr("LPO lim"), ParseError);
    CHECK_THROWS_AS(parse_expr("?a"), ParseError);  // variables only in template mode
    CHECK_THROWS_AS(parse_template("?a <= ?b where pointed(?c)"), std::exception);
    try {
        parse_expr("LPO x");
    } catch (const ParseError& e) {
        std::string r = render_error("LPO x", e);
        CHECK(r.find("LPO x") != std::string::npos);
        CHECK(r.find('^') != std::string::npos);
    }
}

TEST_CASE("catalog-checked parsing rejects unknown atoms") {
    KnowledgeBase kb = KnowledgeBase::from_string("atom LPO \"\" @ \"Def LPO\"\n");
    ParseOptions o{&kb.catalog(), false};
    CHECK_NOTHROW(parse_expr("LPO x LPO", o));
    CHECK_THROWS_AS(parse_expr("LPO x Foo", o), ParseError);
}

TEST_CASE("property: print/parse round trip on random canonical terms") {
    testing::ExprGen gen({"LPO", "lim", "CN", "C2N", "c_p", "C2N'"}, 5, true);
    ParseOptions o{nullptr, true};
    for (int i = 0; i < 3000; ++i) {
        Expr c = canonicalize(gen(5));
        std::string s = print_expr(c);
        Expr back = parse_expr(s, o);
        CHECK_MESSAGE(back == c, s);
    }
}
