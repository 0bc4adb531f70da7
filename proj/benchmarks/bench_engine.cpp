#include <benchmark/benchmark.h>

#include "wdeg/engine.hpp"
#include "wdeg/finmodel.hpp"
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

void BM_Canonicalize(benchmark::State& st) {
    ParseOptions o{&seed().catalog(), true};
    Expr e = parse_expr("((?a \\/ 0) o (1 o ?b)) x (?c /\\ TOP) -> (LPO^* x lim^*)^*", o);
    for (auto _ : st) benchmark::DoNotOptimize(canonicalize(e, &seed().catalog()));
}
BENCHMARK(BM_Canonicalize);

void BM_Parse(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(parse_template("(?a -> ?b) x (?a -> ?c) <= ?a -> (?b x ?c)", &seed().catalog()));
}
BENCHMARK(BM_Parse);

void BM_DeriveSchematic(benchmark::State& st) {
    ParseOptions o{&seed().catalog(), true};
    Expr l = parse_expr("?a x (?b o ?c)", o), r = parse_expr("(?a x ?b) o (?a x ?c)", o);
    for (auto _ : st) benchmark::DoNotOptimize(engine().derive(Relation::Leq, l, r));
}
BENCHMARK(BM_DeriveSchematic)->Unit(benchmark::kMillisecond);

void BM_DeriveGround(benchmark::State& st) {
    ParseOptions o{&seed().catalog(), false};
    Expr l = parse_expr("(C2N /\\ CN) o (C2N \\/ CN)", o), r = parse_expr("C2N \\/ CN", o);
    for (auto _ : st) benchmark::DoNotOptimize(engine().derive(Relation::Equiv, l, r));
}
BENCHMARK(BM_DeriveGround)->Unit(benchmark::kMillisecond);

void BM_Refute(benchmark::State& st) {
    LawTemplate t = parse_template("(?a \\/ ?b) x (?a \\/ ?c) <= ?a \\/ (?b x ?c)", &seed().catalog());
    std::vector<Expr> pool = {Expr::one(), Expr::atom("LPO"), Expr::atom("lim")};
    for (auto _ : st) benchmark::DoNotOptimize(engine().refute_template(t, pool));
}
BENCHMARK(BM_Refute)->Unit(benchmark::kMillisecond);

void BM_ReduceComb(benchmark::State& st) {
    auto U = fin::universe(fin::SizeSpec{3, 3, 2});
    fin::Structure E = fin::Structure::comb(int(st.range(0)));
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& f = U[i % U.size()];
        const auto& g = U[(i * 7 + 3) % U.size()];
        benchmark::DoNotOptimize(fin::reduces(fin::op_prod(f, g), fin::op_star(f, g), E));
        ++i;
    }
}
BENCHMARK(BM_ReduceComb)->Arg(1)->Arg(2)->Arg(4);

void BM_Universe(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(fin::universe(fin::SizeSpec{3, 3, 2}));
}
BENCHMARK(BM_Universe)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
