#pragma once

// Exhaustive law checks over a universe of finite problems. Shared by the
// unit tests (tiny universes) and the acceptance binary.

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wdeg/finmodel.hpp"

namespace wdeg::testing {

struct LawCount {
    std::string law;
    std::size_t universe = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::string first;  // first violating tuple
    double seconds = 0;
};

using Progress = std::function<void(const LawCount&)>;

class FinSuite {
public:
    FinSuite(std::vector<fin::FinProblem> U, fin::Structure E) : U_(std::move(U)), E_(E), N_(U_.size()) {
        R_.resize(N_ * N_);
        for (std::size_t i = 0; i < N_; ++i)
            for (std::size_t j = 0; j < N_; ++j) R_[i * N_ + j] = red(U_[i], U_[j]);
        rep_.resize(N_);
        for (std::size_t i = 0; i < N_; ++i) {
            rep_[i] = i;
            for (std::size_t r : reps_)
                if (leq(i, r) && leq(r, i)) {
                    rep_[i] = r;
                    break;
                }
            if (rep_[i] == i) reps_.push_back(i);
        }
    }

    std::size_t classes() const { return reps_.size(); }

    std::size_t size() const { return N_; }
    bool leq(std::size_t i, std::size_t j) const { return R_[i * N_ + j]; }

    // Pairwise laws plus transitivity through the relation matrix.
    std::vector<LawCount> pairwise() const {
        std::vector<LawCount> out;
        out.push_back(run("reflexivity", [&](LawCount& c) {
            for (std::size_t i = 0; i < N_; ++i) note(c, leq(i, i), i);
        }));
        out.push_back(run("transitivity", [&](LawCount& c) {
            for (std::size_t a = 0; a < N_; ++a)
                for (std::size_t b = 0; b < N_; ++b) {
                    if (!leq(a, b)) continue;
                    for (std::size_t d = 0; d < N_; ++d)
                        if (leq(b, d)) note(c, leq(a, d), a, b, d);
                }
        }));
        out.push_back(run("sup upper bound", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto s = fin::op_sup(U_[a], U_[b]);
                note(c, red(U_[a], s) && red(U_[b], s), a, b);
            });
        }));
        out.push_back(run("inf lower bound", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto s = fin::op_inf(U_[a], U_[b]);
                note(c, red(s, U_[a]) && red(s, U_[b]), a, b);
            });
        }));
        out.push_back(run("inf <= prod <= star", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto p = fin::op_prod(U_[a], U_[b]);
                note(c, red(fin::op_inf(U_[a], U_[b]), p) && red(p, fin::op_star(U_[a], U_[b])), a, b);
            });
        }));
        out.push_back(run("prod commutes", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto p = fin::op_prod(U_[a], U_[b]), q = fin::op_prod(U_[b], U_[a]);
                note(c, red(p, q) && red(q, p), a, b);
            });
        }));
        return out;
    }

    // a \/ b <= c iff a <= c and b <= c. The forward direction follows from
    // the upper bound law and transitivity. Of the premise tuples only the
    // minimal common upper bounds are searched; the rest follow by transitivity.
    LawCount sup_lub() const {
        return run("sup least upper bound", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto s = fin::op_sup(U_[a], U_[b]);
                for (std::size_t d : extremal([&](std::size_t d) { return leq(a, d) && leq(b, d); }, false))
                    note(c, red(s, U_[d]), a, b, d);
            });
        });
    }

    LawCount inf_glb() const {
        return run("inf greatest lower bound", [&](LawCount& c) {
            each_pair([&](std::size_t a, std::size_t b) {
                auto s = fin::op_inf(U_[a], U_[b]);
                for (std::size_t d : extremal([&](std::size_t d) { return leq(d, a) && leq(d, b); }, true))
                    note(c, red(U_[d], s), a, b, d);
            });
        });
    }

    // Left factor only; the right factor follows with "prod commutes". The
    // pairs a <= b are generated by cover pairs, so only those are searched.
    LawCount mono_prod() const {
        return run("monotone prod", [&](LawCount& c) {
            for (auto [a, b] : cover_pairs())
                for (std::size_t d = 0; d < N_; ++d)
                    note(c, red(fin::op_prod(U_[a], U_[d]), fin::op_prod(U_[b], U_[d])), a, b, d);
        });
    }

    // Pairs whose reflexive-transitive closure is the whole preorder: each
    // problem against its class representative in both directions, plus the
    // covers between representatives.
    std::vector<std::pair<std::size_t, std::size_t>> cover_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < N_; ++i)
            if (rep_[i] != i) out.push_back({i, rep_[i]}), out.push_back({rep_[i], i});
        auto lt = [&](std::size_t x, std::size_t y) { return leq(x, y) && !leq(y, x); };
        for (std::size_t x : reps_)
            for (std::size_t y : reps_) {
                if (!lt(x, y)) continue;
                bool cover = true;
                for (std::size_t z : reps_)
                    if (lt(x, z) && lt(z, y)) {
                        cover = false;
                        break;
                    }
                if (cover) out.push_back({x, y});
            }
        return out;
    }

    LawCount mono_star() const {
        return run("monotone star", [&](LawCount& c) {
            for (std::size_t a = 0; a < N_; ++a)
                for (std::size_t b = 0; b < N_; ++b) {
                    if (!leq(a, b)) continue;
                    for (std::size_t d = 0; d < N_; ++d) {
                        note(c, red(fin::op_star(U_[a], U_[d]), fin::op_star(U_[b], U_[d])), a, b, d);
                        note(c, red(fin::op_star(U_[d], U_[a]), fin::op_star(U_[d], U_[b])), d, a, b);
                    }
                }
        });
    }

    // f <= g o h iff (g -> f) <= h; tuples where g -> f is TOP are skipped.
    LawCount adjunction() const {
        return run("adjunction", [&](LawCount& c) {
            for (std::size_t g = 0; g < N_; ++g)
                for (std::size_t f = 0; f < N_; ++f) {
                    if (U_[g].dom().empty() && !U_[f].dom().empty()) continue;
                    auto i = fin::op_impl(U_[g], U_[f]);
                    for (std::size_t h = 0; h < N_; ++h)
                        note(c, red(U_[f], fin::op_star(U_[g], U_[h])) == red(i, U_[h]), f, g, h);
                }
        });
    }

    Progress progress;

private:
    // Class representatives satisfying pred that are maximal (or minimal)
    // among them; the other solutions lie below (or above) one of these.
    template <class P>
    std::vector<std::size_t> extremal(P&& pred, bool maximal) const {
        std::vector<std::size_t> in, out;
        for (std::size_t d : reps_)
            if (pred(d)) in.push_back(d);
        for (std::size_t d : in) {
            bool keep = true;
            for (std::size_t e : in)
                if (e != d && (maximal ? leq(d, e) : leq(e, d))) {
                    keep = false;
                    break;
                }
            if (keep) out.push_back(d);
        }
        return out;
    }

    bool red(const fin::FinProblem& f, const fin::FinProblem& g) const { return fin::reduces(f, g, E_).has_value(); }

    template <class F>
    void each_pair(F&& f) const {
        for (std::size_t a = 0; a < N_; ++a)
            for (std::size_t b = 0; b < N_; ++b) f(a, b);
    }

    template <class... I>
    static void note(LawCount& c, bool ok, I... idx) {
        ++c.checks;
        if (ok) return;
        if (c.violations++ == 0) {
            std::string s;
            ((s += (s.empty() ? "" : ",") + std::to_string(idx)), ...);
            c.first = "(" + s + ")";
        }
    }

    template <class F>
    LawCount run(const char* law, F&& body) const {
        LawCount c;
        c.law = law;
        c.universe = N_;
        auto t0 = std::chrono::steady_clock::now();
        body(c);
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (progress) progress(c);
        return c;
    }

    std::vector<fin::FinProblem> U_;
    fin::Structure E_;
    std::size_t N_;
    std::vector<char> R_;
    std::vector<std::size_t> rep_;   // class representative of each problem
    std::vector<std::size_t> reps_;
};

}  // namespace wdeg::testing
