#include <doctest.h>

#include "wdeg/ideal.hpp"
#include "wdeg/parse.hpp"

using namespace wdeg;

namespace {

const KnowledgeBase& seed() {
    static const KnowledgeBase kb = KnowledgeBase::load(KnowledgeBase::default_seed_path());
    return kb;
}

const Engine& engine() {
    static const Engine e(seed());
    return e;
}

Expr P(const char* s) { return parse_expr(s, ParseOptions{&seed().catalog(), false}); }

IdealPresentation gen(std::initializer_list<const char*> g) {
    std::vector<Expr> v;
    for (auto s : g) v.push_back(P(s));
    return IdealPresentation::of(v, &seed().catalog());
}

// indices of the problems below p
std::vector<std::size_t> downset(const std::vector<fin::FinProblem>& U, const fin::FinProblem& p, const fin::Structure& E) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < U.size(); ++i)
        if (fin::reduces(U[i], p, E)) out.push_back(i);
    return out;
}

}  // namespace

TEST_CASE("closure terms") {
    auto terms = closure_terms(gen({"LPO", "lim"}), &seed().catalog());
    REQUIRE(terms.size() >= 3);
    CHECK(terms[0] == Expr::one());
    CHECK(terms[1] == P("LPO"));
    CHECK(terms[2] == P("lim"));
}

TEST_CASE("membership") {
    auto A = gen({"LPO", "lim"});
    CHECK(member(engine(), Expr::one(), A).answer == Answer::Yes);
    CHECK(member(engine(), Expr::one(), gen({})).answer == Answer::Yes);
    MemberResult m = member(engine(), P("LPO o lim"), A);
    CHECK(m.answer == Answer::Yes);
    CHECK(engine().replay(m.trace));
    CHECK(member(engine(), P("LPO \\/ lim"), A).answer == Answer::Yes);
    CHECK(member(engine(), Expr::top(), gen({"lim"})).answer == Answer::Unknown);
}

TEST_CASE("quotient preorder") {
    auto A = gen({"lim"});
    for (const char* a : {"LPO", "C2N", "MLR o lim", "c_p"}) {
        QuotientResult q = quotient_leq(engine(), P(a), P(a), A);
        CHECK(q.answer == Answer::Yes);
        REQUIRE(q.witness);
        CHECK(*q.witness == Expr::one());
    }
    QuotientResult no = quotient_leq(engine(), Expr::one(), Expr::zero(), A);
    CHECK(no.answer == Answer::No);
    CHECK(engine().replay(no.trace));
    QuotientResult mlr = quotient_leq(engine(), P("PC2N"), P("CN"), gen({"MLR"}));
    CHECK(mlr.answer == Answer::Yes);
    CHECK(mlr.witness == P("MLR"));
    // LPO is below lim, so it vanishes modulo <lim>
    QuotientResult l = quotient_leq(engine(), P("LPO"), Expr::one(), A);
    CHECK(l.answer == Answer::Yes);
    CHECK(quotient_leq(engine(), Expr::top(), Expr::one(), A).answer == Answer::No);
}

TEST_CASE("quotient transitivity on a chain") {
    auto A = gen({"LPO"});
    auto ab = quotient_leq(engine(), P("lim"), P("lim o LPO"), A);
    auto bc = quotient_leq(engine(), P("lim o LPO"), P("lim"), A);
    REQUIRE(ab.answer == Answer::Yes);
    REQUIRE(bc.answer == Answer::Yes);
    CHECK(quotient_leq(engine(), P("lim"), P("lim"), A).answer == Answer::Yes);
}

TEST_CASE("ideal axioms on finite posets") {
    // Without constants a problem 1 -> m answering v cannot be solved from
    // one answering another value, so point problems are incomparable.
    fin::Structure E = fin::Structure::parse("comb:3:constants=none");
    auto pt = [](fin::Value m, fin::Value v) {
        return fin::FinProblem::table(fin::Type::base(1), fin::Type::base(m), {{0, {v}}});
    };
    auto one = fin::FinProblem::trivial();
    std::vector<fin::FinProblem> P = {fin::FinProblem::zero(), one, pt(2, 0), pt(2, 1)};

    CHECK(check_axioms(P, E, downset(P, one, E)).is_ideal);
    CHECK(check_axioms(P, E, {}).failure == "1 is not below any member");

    // both points are members but their product lies above each of them
    AxiomReport bad = check_axioms(P, E, {0, 1, 2, 3});
    CHECK_FALSE(bad.is_ideal);
    CHECK(bad.failure.find(" o ") != std::string::npos);
    AxiomReport notdown = check_axioms(P, E, {1, 2});
    CHECK_FALSE(notdown.is_ideal);

    // a /\ b <= c with neither a <= c nor b <= c, searched over points and
    // their meets. Depth 0 (no apply/curry) keeps the star spaces definable.
    fin::Structure E0 = fin::Structure::parse("comb:0:constants=none");
    std::vector<fin::FinProblem> pts = {pt(2, 0), pt(2, 1), pt(3, 2)};
    bool prime_cx = false;
    for (std::size_t a = 0; a < pts.size() && !prime_cx; ++a)
        for (std::size_t b = a + 1; b < pts.size() && !prime_cx; ++b) {
            std::vector<fin::FinProblem> cands = pts;
            cands.push_back(fin::op_inf(pts[a], pts[b]));
            for (const auto& c : cands) {
                if (fin::reduces(pts[a], c, E0) || fin::reduces(pts[b], c, E0)) continue;
                if (!fin::reduces(fin::op_inf(pts[a], pts[b]), c, E0)) continue;
                AxiomReport rep = check_axioms({pts[a], pts[b], c}, E0, {2});
                CHECK_FALSE(rep.is_prime);
                prime_cx = true;
                break;
            }
        }
    CHECK(prime_cx);

    CHECK_THROWS_AS(check_axioms(P, E, {P.size()}), std::out_of_range);
}
