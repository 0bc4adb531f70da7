#include <doctest.h>

#include <filesystem>
#include <set>

#include "wdeg/kb.hpp"
#include "wdeg/parse.hpp"

using namespace wdeg;

namespace {

const char* kHeader =
    "atom LPO \"\" @ \"Def LPO\"\n"
    "atom lim \"\" @ \"Def lim\"\n"
    "atom CN \"\" @ \"Def closed choice\"\n"
    "atom C2N \"\" @ \"Def closed choice\"\n"
    "atom C01 \"\" @ \"Def closed choice\"\n";

KnowledgeBase with(const std::string& body) { return KnowledgeBase::from_string(std::string(kHeader) + body); }

Expr A(const char* n) { return Expr::atom(n); }

const KnowledgeBase& seed() {
    static const KnowledgeBase kb = KnowledgeBase::load(KnowledgeBase::default_seed_path());
    return kb;
}

}  // namespace

TEST_CASE("fact lines are stored as written") {
    KnowledgeBase kb = with("LPO < lim @ \"ex\"\nCN >< C2N @ \"ex\"\n");
    REQUIRE(kb.stated().size() == 2);
    CHECK(kb.stated()[0].relation == Relation::Lt);
    CHECK(kb.stated()[0].lhs == A("LPO"));
    CHECK(kb.stated()[0].rhs == A("lim"));
    CHECK(kb.stated()[0].citation == "ex");
    CHECK(kb.stated()[0].line == 6);
    CHECK(kb.stated()[1].relation == Relation::Incomp);
}

TEST_CASE("empty file gives an empty store") {
    KnowledgeBase kb = KnowledgeBase::from_string("");
    CHECK(kb.stated().empty());
    CHECK(kb.expanded().empty());
    CHECK(kb.catalog().names().empty());
}

TEST_CASE("expansion: LT, INCOMP, EQUIV, pointed flag") {
    KnowledgeBase kb = with("LPO < lim @ \"a\"\nCN >< C2N @ \"b\"\nC2N == C01 @ \"c\"\nflag LPO pointed @ \"d\"\n");
    CHECK(kb.query(Relation::Leq, A("LPO"), A("lim")));
    CHECK(kb.query(Relation::Nleq, A("lim"), A("LPO")));
    CHECK(kb.query(Relation::Nleq, A("CN"), A("C2N")));
    CHECK(kb.query(Relation::Nleq, A("C2N"), A("CN")));
    CHECK(kb.query(Relation::Equiv, A("C2N"), A("C01")));
    CHECK(kb.query(Relation::Leq, A("C01"), A("C2N")));
    CHECK(kb.query(Relation::Leq, Expr::one(), A("LPO")));
    CHECK(kb.catalog().has_flag("LPO", Flag::Pointed));
    CHECK_FALSE(kb.catalog().has_flag("lim", Flag::Pointed));
}

TEST_CASE("the store is literal") {
    KnowledgeBase kb = with("LPO < lim @ \"a\"\n");
    CHECK_FALSE(kb.query(Relation::Leq, A("LPO"), A("LPO")));
    CHECK_FALSE(kb.query(Relation::Leq, A("lim"), A("lim")));
}

TEST_CASE("seed examples") {
    CHECK(seed().query(Relation::Equiv, A("C2N"), A("C01")));
    CHECK_FALSE(seed().query(Relation::Leq, A("LPO"), A("LPO")));
    CHECK(seed().query(Relation::Nleq, A("lim"), Expr::prod({A("LPO"), A("LPO")})));
    CHECK_FALSE(seed().query(Relation::Nleq, A("lim"), A("LPO")));  // implied, not stated
}

TEST_CASE("every seeded fact has a citation") {
    for (const auto& f : seed().stated()) CHECK_MESSAGE(!f.citation.empty(), "line " << f.line);
    for (const auto& f : seed().expanded()) CHECK(!f.citation.empty());
}

TEST_CASE("rejections carry the line number") {
    auto line_of = [](const std::string& body) {
        try {
            with(body);
        } catch (const KbError& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("LPO <= lim\n") == 6);                              // no citation
    CHECK(line_of("\nLPO <= Foo @ \"x\"\n") == 7);                     // unknown atom
    CHECK(line_of("LPO <= lim @ \"x\"\nLPO !<= lim @ \"y\"\n") == 7);  // contradiction
    CHECK(line_of("LPO !<= LPO @ \"x\"\n") == 6);
    CHECK(line_of("?a <= lim @ \"x\"\n") == 6);
    CHECK(line_of("atom LPO \"dup\" @ \"x\"\n") == 6);
    CHECK(line_of("flag LPO shiny @ \"x\"\n") == 6);
}

TEST_CASE("consistency at load: no pair with both LEQ and NLEQ") {
    std::set<std::pair<std::string, std::string>> leq, nleq;
    for (const auto& f : seed().expanded()) {
        auto key = std::make_pair(print_expr(f.lhs), print_expr(f.rhs));
        (f.relation == Relation::Leq ? leq : nleq).insert(key);
    }
    for (const auto& k : nleq) CHECK_MESSAGE(!leq.count(k), k.first << " vs " << k.second);
}

TEST_CASE("save and load round trip") {
    std::string path = (std::filesystem::temp_directory_path() / "wdeg-kb-roundtrip.facts").string();
    seed().save(path);
    KnowledgeBase again = KnowledgeBase::load(path);
    CHECK(again.to_string() == seed().to_string());
    CHECK(again.stated().size() == seed().stated().size());
    CHECK(again.expanded().size() == seed().expanded().size());
    std::filesystem::remove(path);
    KnowledgeBase twice = KnowledgeBase::from_string(again.to_string());
    CHECK(twice.to_string() == again.to_string());
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(KnowledgeBase::load("/nonexistent/facts"), KbError);
}

TEST_CASE("flags and notes") {
    KnowledgeBase kb = with("flag lim fractal assumed\nnote \"densely realized\"\n");
    CHECK(kb.catalog().has_flag("lim", Flag::Fractal));
    REQUIRE(kb.notes().size() == 1);
    CHECK(kb.notes()[0] == "densely realized");
    CHECK(flag_from_name("total_fractal") == Flag::TotalFractal);
    CHECK_FALSE(flag_from_name("shiny"));
}
