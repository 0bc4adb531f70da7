#include <doctest.h>

#include "random_expr.hpp"
#include "wdeg/parse.hpp"
#include "wdeg/term.hpp"

using namespace wdeg;

namespace {
Expr A(const char* n) { return Expr::atom(n); }
}  // namespace

TEST_CASE("canonicalize folds the unit of o") {
    CHECK(canonicalize(Expr::comp({Expr::one(), A("LPO")})) == A("LPO"));
    CHECK(canonicalize(Expr::comp({A("LPO"), Expr::one()})) == A("LPO"));
    CHECK(canonicalize(Expr::prod({Expr::one(), A("LPO")})) == A("LPO"));
}

TEST_CASE("lattice idempotence and flattening") {
    Expr a = A("a"), b = A("b"), c = A("c");
    CHECK(canonicalize(Expr::sup({a, a})) == a);
    CHECK(canonicalize(Expr::sup({Expr::sup({a, b}), c})) == canonicalize(Expr::sup({a, b, c})));
    CHECK(canonicalize(Expr::sup({Expr::sup({a, b}), c})).operands().size() == 3);
}

TEST_CASE("0 x TOP is TOP") {
    CHECK(canonicalize(Expr::prod({Expr::zero(), Expr::top()})) == Expr::top());
    CHECK(canonicalize(Expr::prod({Expr::top(), Expr::zero()})) == Expr::top());
}

TEST_CASE("constant folds with discharged side conditions") {
    Expr lpo = A("LPO");
    CHECK(canonicalize(Expr::sup({Expr::zero(), lpo})) == lpo);
    CHECK(canonicalize(Expr::inf({lpo, Expr::top()})) == lpo);
    CHECK(canonicalize(Expr::sup({lpo, Expr::top()})) == Expr::top());
    CHECK(canonicalize(Expr::comp({Expr::top(), lpo})) == Expr::top());
    CHECK(canonicalize(Expr::prod({Expr::zero(), lpo})) == Expr::zero());
    CHECK(canonicalize(Expr::comp({lpo, Expr::zero()})) == Expr::zero());
    CHECK(canonicalize(Expr::impl(Expr::top(), lpo)) == Expr::zero());
    CHECK(canonicalize(Expr::impl(lpo, Expr::zero())) == Expr::zero());
    CHECK(canonicalize(Expr::impl(lpo, Expr::top())) == Expr::top());
    CHECK(canonicalize(Expr::finpar(Expr::zero())) == Expr::one());
    CHECK(canonicalize(Expr::finpar(Expr::one())) == Expr::one());
    CHECK(canonicalize(Expr::omegapar(Expr::zero())) == Expr::zero());
    CHECK(canonicalize(Expr::omegapar(Expr::top())) == Expr::top());
}

TEST_CASE("folds that need a side condition stay put for variables") {
    Expr a = Expr::var("a");
    // 0 x ?a would be wrong for ?a = TOP
    Expr e = canonicalize(Expr::prod({Expr::zero(), a}));
    CHECK(e.is(Kind::Prod));
    // 0 -> ?a needs ?a != 0
    CHECK(canonicalize(Expr::impl(Expr::zero(), a)).is(Kind::Impl));
    CHECK(canonicalize(Expr::impl(a, Expr::top())).is(Kind::Impl));
}

TEST_CASE("commutativity normalization for x, \\/, /\\ but not o or ->") {
    Expr a = A("LPO"), b = A("lim");
    CHECK(canonicalize(Expr::prod({a, b})) == canonicalize(Expr::prod({b, a})));
    CHECK(canonicalize(Expr::sup({a, b})) == canonicalize(Expr::sup({b, a})));
    CHECK(canonicalize(Expr::inf({a, b})) == canonicalize(Expr::inf({b, a})));
    CHECK(canonicalize(Expr::comp({a, b})) != canonicalize(Expr::comp({b, a})));
    CHECK(canonicalize(Expr::impl(a, b)) != canonicalize(Expr::impl(b, a)));
}

TEST_CASE("o is flattened but keeps its order") {
    Expr a = A("a"), b = A("b"), c = A("c");
    Expr e = canonicalize(Expr::comp({Expr::comp({a, b}), c}));
    REQUIRE(e.is(Kind::Comp));
    REQUIRE(e.operands().size() == 3);
    CHECK(e.operand(0) == a);
    CHECK(e.operand(2) == c);
    CHECK(e == canonicalize(Expr::comp({a, Expr::comp({b, c})})));
}

TEST_CASE("discharge of a != TOP and a != 0") {
    CHECK(discharge_not_top(A("LPO")));
    CHECK_FALSE(discharge_not_top(Expr::top()));
    CHECK_FALSE(discharge_not_top(Expr::var("a")));
    CHECK_FALSE(discharge_not_top(Expr::prod({A("LPO"), Expr::top()})));
    CHECK(discharge_nonzero(Expr::one(), nullptr));
    CHECK_FALSE(discharge_nonzero(Expr::zero(), nullptr));
    CHECK(discharge_nonzero(Expr::sup({Expr::zero(), Expr::one()}), nullptr));
}

TEST_CASE("substitution: direct, with obligations, and folded") {
    LawTemplate t = parse_template("?a o (?b \\/ ?c) == (?a o ?b) \\/ (?a o ?c)");
    Instance i = substitute(t, {{"a", A("lim")}, {"b", A("CN")}, {"c", A("C2N")}});
    CHECK(i.obligations.empty());
    CHECK(print_expr(i.lhs) == "lim o (C2N \\/ CN)");
    CHECK(!i.lhs.has_var());

    LawTemplate p = parse_template("?a \\/ ?b <= ?a x ?b where pointed(?a), pointed(?b)");
    Instance j = substitute(p, {{"a", Expr::one()}, {"b", A("LPO")}});
    REQUIRE(j.obligations.size() == 2);
    CHECK(j.obligations[0] == Obligation{SideCondition::Pointed, Expr::one()});

    LawTemplate q = parse_template("?a x TOP == TOP");
    Instance k = substitute(q, {{"a", A("LPO")}});
    CHECK(k.lhs == Expr::top());
    CHECK(k.rhs == Expr::top());

    CHECK_THROWS_AS(substitute(parse_template("?a x ?b == ?b x ?a"), {{"a", A("LPO")}}), std::invalid_argument);
}

TEST_CASE("template validation") {
    LawTemplate t;
    t.lhs = Expr::var("a");
    t.rhs = Expr::var("b");
    t.variables = {"a"};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.variables = {"a", "b"};
    CHECK_NOTHROW(t.validate());
    t.side_conditions["z"] = {SideCondition::Pointed};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("property: canonicalize is idempotent and order-independent on random terms") {
    testing::ExprGen gen({"LPO", "lim", "CN", "C2N", "c_p"}, 11, true);
    for (int i = 0; i < 2000; ++i) {
        Expr e = gen(5);
        Expr c = canonicalize(e);
        CHECK(canonicalize(c) == c);
        if (c.is_ac()) {
            std::vector<Expr> ops(c.operands().rbegin(), c.operands().rend());
            CHECK(make_canonical(c.kind(), ops) == c);
        }
    }
}

TEST_CASE("expression order is total and consistent with equality") {
    testing::ExprGen gen({"LPO", "lim"}, 3, true);
    for (int i = 0; i < 500; ++i) {
        Expr a = canonicalize(gen(3)), b = canonicalize(gen(3));
        CHECK((compare(a, b) == 0) == (a == b));
        CHECK(compare(a, b) == -compare(b, a));
    }
}
