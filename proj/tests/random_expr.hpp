#pragma once

#include <random>
#include <string>
#include <vector>

#include "wdeg/term.hpp"

namespace wdeg::testing {

// Raw (uncanonicalized) random terms over the given atoms.
class ExprGen {
public:
    ExprGen(std::vector<std::string> atoms, unsigned seed, bool vars = false)
        : atoms_(std::move(atoms)), rng_(seed), vars_(vars) {}

    Expr operator()(int depth = 4) { return gen(depth); }

private:
    Expr leaf() {
        int k = pick(vars_ ? 10 : 8);
        switch (k) {
            case 0: return Expr::zero();
            case 1: return Expr::one();
            case 2: return Expr::top();
            case 8:
            case 9: return Expr::var(std::string(1, char('a' + pick(3))));
            default: return Expr::atom(atoms_[pick(int(atoms_.size()))]);
        }
    }

    Expr gen(int depth) {
        if (depth <= 0 || pick(4) == 0) return leaf();
        switch (pick(8)) {
            case 0: return Expr::sup(ops(depth));
            case 1: return Expr::inf(ops(depth));
            case 2: return Expr::prod(ops(depth));
            case 3:
            case 4: return Expr::comp(ops(depth));
            case 5: return Expr::impl(gen(depth - 1), gen(depth - 1));
            case 6: return Expr::finpar(gen(depth - 1));
            default: return Expr::omegapar(gen(depth - 1));
        }
    }

    std::vector<Expr> ops(int depth) {
        std::vector<Expr> v;
        int n = 2 + (pick(4) == 0);
        for (int i = 0; i < n; ++i) v.push_back(gen(depth - 1));
        return v;
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::vector<std::string> atoms_;
    std::mt19937 rng_;
    bool vars_;
};

}  // namespace wdeg::testing
