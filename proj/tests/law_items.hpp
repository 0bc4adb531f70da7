#pragma once

// Law items shared by the per-item tests and the acceptance binary.

#include <string>
#include <vector>

namespace wdeg::items {

struct ProveItem {
    const char* name;
    std::vector<const char*> statements;  // each closed by prove
};

struct RefuteItem {
    const char* name;
    const char* law;  // the non-reduction to refute, as a template
    std::vector<const char*> pool;
    const char* reference;  // the known counterexample assignment, "" if none
};

inline const std::vector<ProveItem>& prove_items() {
    static const std::vector<ProveItem> v = {
        {"constants-1", {"0 <= ?a", "?a <= TOP"}},
        {"constants-2", {"0 \\/ ?a == ?a", "?a /\\ TOP == ?a"}},
        {"constants-3", {"1 x ?a == ?a", "1 o ?a == ?a", "?a o 1 == ?a", "1 -> ?a == ?a"}},
        {"constants-4", {"?a \\/ TOP == TOP", "?a x TOP == TOP", "?a o TOP == TOP", "TOP o ?a == TOP"}},
        {"constants-5", {"0 x LPO == 0", "0 o lim == 0", "C2N o 0 == 0", "(CN \\/ 1) x 0 == 0"}},
        {"constants-6", {"?a -> 0 == 0", "TOP -> ?a == 0"}},
        {"constants-7", {"0 -> LPO == TOP", "0 -> 1 == TOP", "0 -> (CN x C2N) == TOP"}},
        {"constants-8", {"LPO -> TOP == TOP", "(C2N o CN) -> TOP == TOP"}},
        {"constants-9", {"?a -> ?a <= 1", "LPO -> LPO <= 1"}},
        {"order-chain", {"?a /\\ ?b <= ?a x ?b <= ?a o ?b", "?a /\\ ?b <= ?a \\/ ?b"}},
        {"implication-1", {"?a -> (?b -> ?c) == (?b o ?a) -> ?c"}},
        {"implication-2", {"?a -> (?b o ?c) <= (?a -> ?b) o ?c"}},
        {"implication-3", {"(?a \\/ ?b) -> ?c <= (?a -> ?c) /\\ (?b -> ?c)"}},
        {"implication-4", {"(?a -> ?c) \\/ (?b -> ?c) <= (?a /\\ ?b) -> ?c"}},
        {"implication-5", {"?a x (?b o ?c) <= (?b o (?a x ?c)) /\\ ((?a x ?b) o ?c)"}},
        {"implication-6", {"(?a o ?c) x (?b o ?d) <= (?a x ?b) o (?c x ?d)"}},
        {"implication-7", {"(?a o ?c) /\\ (?b o ?d) <= (?a /\\ ?b) o (?c x ?d)"}},
        {"implication-8", {"(?a -> 1) o ?b == (?a -> 1) x ?b"}},
        {"implication-9", {"(LPO /\\ 1) -> 1 == LPO -> 1", "(CN o C2N /\\ 1) -> 1 == (CN o C2N) -> 1"}},
        {"distributivity-1", {"?a x (?b \\/ ?c) == (?a x ?b) \\/ (?a x ?c)"}},
        {"distributivity-2", {"?a o (?b \\/ ?c) == (?a o ?b) \\/ (?a o ?c)"}},
        {"distributivity-3", {"(?b o ?a) \\/ (?c o ?a) <= (?b \\/ ?c) o ?a"}},
        {"distributivity-4", {"(?b /\\ ?c) o ?a <= (?b o ?a) /\\ (?c o ?a)"}},
        {"distributivity-5", {"?a x (?b /\\ ?c) <= (?a x ?b) /\\ (?a x ?c)"}},
        {"distributivity-6", {"?a o (?b /\\ ?c) == (?a o ?b) /\\ (?a o ?c)"}},
        {"distributivity-7", {"?a \\/ (?b x ?c) <= (?a \\/ ?b) x (?a \\/ ?c)"}},
        {"distributivity-8", {"?a \\/ (?b o ?c) <= (?a \\/ ?b) o (?a \\/ ?c)"}},
        {"distributivity-9", {"?a /\\ (?b x ?c) <= (?a /\\ ?b) x (?a /\\ ?c)"}},
        {"distributivity-10", {"?a -> (?b \\/ ?c) == (?a -> ?b) \\/ (?a -> ?c)"}},
        {"distributivity-11", {"(?a -> ?b) x (?a -> ?c) <= ?a -> (?b x ?c)"}},
        {"distributivity-12", {"(?a x ?b) -> ?c <= (?a -> ?c) x (?b -> ?c)"}},
        {"distributivity-13", {"?a -> (?b /\\ ?c) <= (?a -> ?b) /\\ (?a -> ?c)"}},
        {"distributivity-14", {"(?a o ?b) -> ?c <= (?a -> ?c) o (?b -> ?c)"}},
        {"distributivity-15", {"?a x (?b o ?c) <= (?a x ?b) o (?a x ?c)"}},
        {"pointed-order", {"LPO \\/ lim <= LPO x lim", "CN \\/ C2N <= CN x C2N"}},
        {"pointed-distributivity", {"C2N /\\ (LPO o lim) <= (C2N /\\ LPO) o (C2N /\\ lim)"}},
        {"pointed-unary-1", {"(LPO x CN)^* == LPO^* x CN^*"}},
        {"pointed-unary-2", {"(LPO \\/ lim)^w == LPO^w x lim^w"}},
        {"special-1", {"LPO -> (LPO \\/ CN) == LPO -> (1 \\/ CN)"}},
        {"special-2", {"(CN \\/ C2N) -> (CN \\/ LPO) <= C2N -> LPO"}},
        {"choice-NN", {"CN o CN <= CN"}},
        {"choice-2N2N", {"C2N o C2N <= C2N"}},
        {"choice-N2N", {"CN o C2N <= CNx2N"}},
        {"choice-2NN", {"C2N o CN <= CNx2N"}},
        {"example-distributivity-1",
         {"(C2N /\\ CN) o (C2N \\/ CN) == C2N \\/ CN", "(C2N /\\ CN) x (C2N \\/ CN) == C2N \\/ CN"}},
        {"example-distributivity-2", {"(C2N \\/ CN) o (C2N /\\ CN) == C2N o CN", "C2N o CN == C2N x CN"}},
    };
    return v;
}

inline const std::vector<RefuteItem>& refute_items() {
    static const std::vector<RefuteItem> v = {
        {"implication-2-converse", "(?a -> ?b) o ?c <= ?a -> (?b o ?c)", {"1", "LPO", "lim", "C2N"}, "a=lim, b=C2N, c=lim"},
        {"implication-3-converse", "(?a -> ?c) /\\ (?b -> ?c) <= (?a \\/ ?b) -> ?c",
         {"1", "LPO", "lim", "CN", "C2N", "CN \\/ C2N"}, "a=CN, b=C2N, c=CN \\/ C2N"},
        {"implication-4-converse", "(?a /\\ ?b) -> ?c <= (?a -> ?c) \\/ (?b -> ?c)",
         {"1", "LPO", "lim", "c_p", "c_q", "c_p x c_q"}, "a=c_p, b=c_q, c=c_p x c_q"},
        {"implication-5-converse", "(?b o (?a x ?c)) /\\ ((?a x ?b) o ?c) <= ?a x (?b o ?c)",
         {"1", "LPO", "lim", "lim o lim"}, "a=lim o lim, b=lim, c=lim"},
        {"implication-6-converse", "(?a x ?b) o (?c x ?d) <= (?a o ?c) x (?b o ?d)", {"1", "LPO", "lim"},
         "a=1, b=LPO, c=LPO, d=1"},
        {"implication-7-converse", "(?a /\\ ?b) o (?c x ?d) <= (?a o ?c) /\\ (?b o ?d)", {"1", "LPO", "lim"},
         "a=1, b=1, c=LPO, d=LPO"},
        {"distributivity-3-converse", "(?b \\/ ?c) o ?a <= (?b o ?a) \\/ (?c o ?a)", {"1", "LPO", "lim", "c_p", "c_q"},
         "a=LPO, b=c_p, c=c_q"},
        {"distributivity-4-converse", "(?b o ?a) /\\ (?c o ?a) <= (?b /\\ ?c) o ?a",
         {"1", "LPO", "lim", "CN", "C2N", "C2N \\/ CN"}, "a=C2N \\/ CN, b=C2N, c=CN"},
        {"distributivity-5-converse", "(?a x ?b) /\\ (?a x ?c) <= ?a x (?b /\\ ?c)",
         {"1", "LPO", "lim", "CN", "C2N", "C2N \\/ CN"}, "a=C2N \\/ CN, b=C2N, c=CN"},
        {"distributivity-7-converse", "(?a \\/ ?b) x (?a \\/ ?c) <= ?a \\/ (?b x ?c)", {"1", "LPO", "lim"},
         "a=LPO, b=1, c=1"},
        {"distributivity-8-converse", "(?a \\/ ?b) o (?a \\/ ?c) <= ?a \\/ (?b o ?c)", {"1", "LPO", "lim"},
         "a=LPO, b=1, c=1"},
        {"distributivity-9-converse", "(?a /\\ ?b) x (?a /\\ ?c) <= ?a /\\ (?b x ?c)", {"1", "LPO", "lim"},
         "a=LPO, b=lim, c=lim"},
        {"distributivity-11-converse", "?a -> (?b x ?c) <= (?a -> ?b) x (?a -> ?c)", {"1", "LPO", "lim", "C2"},
         "a=C2, b=C2, c=C2"},
        {"distributivity-12-converse", "(?a -> ?c) x (?b -> ?c) <= (?a x ?b) -> ?c", {"1", "LPO", "lim"},
         "a=LPO, b=LPO, c=LPO x LPO"},
        {"distributivity-13-converse", "(?a -> ?b) /\\ (?a -> ?c) <= ?a -> (?b /\\ ?c)",
         {"1", "LPO", "lim", "c_p /\\ c_q", "c_p", "c_q"}, "a=c_p /\\ c_q, b=c_p, c=c_q"},
        {"distributivity-14-converse", "(?a -> ?c) o (?b -> ?c) <= (?a o ?b) -> ?c", {"1", "LPO", "lim"},
         "a=LPO, b=LPO, c=LPO o LPO"},
        {"distributivity-15-converse", "(?a x ?b) o (?a x ?c) <= ?a x (?b o ?c)", {"1", "LPO", "lim"}, ""},
        {"distributivity-16a", "?a /\\ (?b o ?c) <= (?a /\\ ?b) o (?a /\\ ?c)", {"1", "LPO", "lim", "c_q", "e3", "c_p"},
         "a=c_q, b=e3, c=c_p"},
        {"distributivity-16b", "(?a /\\ ?b) o (?a /\\ ?c) <= ?a /\\ (?b o ?c)", {"1", "LPO", "lim"},
         "a=LPO, b=lim, c=lim"},
        {"distributivity-17a", "?a o (?b x ?c) <= (?a o ?b) x (?a o ?c)", {"1", "LPO", "lim", "e4", "c_p", "c_q"},
         "a=e4, b=c_p, c=c_q"},
        {"distributivity-17b", "(?a o ?b) x (?a o ?c) <= ?a o (?b x ?c)", {"1", "LPO", "lim"}, "a=LPO, b=1, c=1"},
        {"distributivity-18a", "(?a -> ?b) o (?a -> ?c) <= ?a -> (?b o ?c)", {"1", "LPO", "lim", "d_p", "e_pq"},
         "a=d_p, b=e_pq, c=1"},
        {"distributivity-18b", "?a -> (?b o ?c) <= (?a -> ?b) o (?a -> ?c)", {"1", "LPO", "lim", "C2"},
         "a=C2, b=C2, c=C2"},
        {"distributivity-19a", "(?a x ?b) o ?c <= (?a o ?c) x (?b o ?c)", {"1", "LPO", "lim", "e4b", "e5", "c_M"},
         "a=e4b, b=e5, c=c_M"},
        {"distributivity-19b", "(?a o ?c) x (?b o ?c) <= (?a x ?b) o ?c", {"1", "LPO", "lim"}, "a=1, b=1, c=LPO"},
        {"comp-commutativity", "?a o ?b <= ?b o ?a", {"1", "LPO", "lim"}, ""},
        {"impl-commutativity", "?a -> ?b <= ?b -> ?a", {"1", "LPO", "lim"}, ""},
        {"impl-associativity-1", "?a -> (?b -> ?c) <= (?a -> ?b) -> ?c", {"1", "LPO", "lim", "d_p"}, ""},
        {"impl-associativity-2", "(?a -> ?b) -> ?c <= ?a -> (?b -> ?c)", {"1", "LPO", "lim"}, ""},
    };
    return v;
}

}  // namespace wdeg::items
