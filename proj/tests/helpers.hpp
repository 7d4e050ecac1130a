#pragma once

// Shared corpus builders and independent reference solvers for the test
// suites. The solvers here deliberately avoid the library's fixpoint /
// synthesis code paths: the classical EF solver works on raw tuples, the
// minimax search explores the game tree, and bisimilarity is computed by
// partition refinement. They exist to disagree with the library if it is
// wrong.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bfgames/comonads.hpp"
#include "bfgames/forest.hpp"
#include "bfgames/games.hpp"
#include "bfgames/structures.hpp"

namespace testutil {

using namespace bfg;

inline Signature one_binary() { return make_signature({{"R", 2}}); }

inline Structure binary_structure(int n, const std::set<Tuple>& tuples) {
    Structure m;
    m.sig = one_binary();
    m.size = n;
    m.tables.assign(1, tuples);
    m.validate();
    return m;
}

/// Strict linear order on n elements (transitively closed).
inline Structure linear_order(int n) {
    Signature sig = make_signature({{"<", 2}});
    std::map<std::string, std::set<Tuple>> tabs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) tabs["<"].insert({i, j});
    return make_structure(sig, n, tabs);
}

/// Successor chain 0 -> 1 -> ... -> n-1 over one binary relation.
inline Structure chain(int n) {
    std::set<Tuple> t;
    for (int i = 0; i + 1 < n; ++i) t.insert({i, i + 1});
    return binary_structure(n, t);
}

/// Every structure over one binary relation with universe size n.
inline std::vector<Structure> all_binary_structures(int n) {
    std::vector<Structure> out;
    long bits = static_cast<long>(n) * n;
    for (long mask = 0; mask < (1L << bits); ++mask) {
        std::set<Tuple> t;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (mask & (1L << (i * n + j))) t.insert({i, j});
        out.push_back(binary_structure(n, t));
    }
    return out;
}

/// Isomorphism-class representatives of the structures over one binary
/// relation with universe size <= maxn, by canonical form.
inline std::vector<Structure> binary_classes(int maxn) {
    std::vector<Structure> out;
    std::set<std::string> seen;
    for (int n = 0; n <= maxn; ++n) {
        for (const Structure& m : all_binary_structures(n)) {
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
            long best = -1;
            do {
                long enc = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (m.tables[0].count({i, j}))
                            enc |= 1L << (perm[static_cast<std::size_t>(i)] * n + perm[static_cast<std::size_t>(j)]);
                if (best < 0 || enc < best) best = enc;
            } while (std::next_permutation(perm.begin(), perm.end()));
            std::string key = std::to_string(n) + ":" + std::to_string(best);
            if (seen.insert(key).second) out.push_back(m);
        }
    }
    return out;
}

/// All maps [n] -> [m] in lexicographic order.
inline std::vector<std::vector<int>> all_maps(int n, int m) {
    std::vector<std::vector<int>> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    if (m == 0) return out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(cur);
        int i = n - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] + 1 == m) {
            cur[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
    }
    return out;
}

inline std::vector<std::vector<int>> all_homomorphisms(const Structure& M, const Structure& N) {
    std::vector<std::vector<int>> out;
    for (const auto& f : all_maps(M.size, N.size))
        if (is_homomorphism(f, M, N)) out.push_back(f);
    return out;
}

// ---------------------------------------------------------------------------
// Independent solver 1: the classical k-round EF game on raw tuples.
// ---------------------------------------------------------------------------

inline bool classical_ef_step(const Structure& M, const Structure& N, std::vector<int>& a,
                              std::vector<int>& b, int rounds) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < a.size(); ++i) pairs.push_back({a[i], b[i]});
    if (!is_partial_isomorphism(M, N, pairs)) return false;
    if (rounds == 0) return true;
    // Spoiler extends on either side; Duplicator answers on the other
    for (int x = 0; x < M.size; ++x) {
        bool answered = false;
        for (int y = 0; y < N.size && !answered; ++y) {
            a.push_back(x);
            b.push_back(y);
            answered = classical_ef_step(M, N, a, b, rounds - 1);
            a.pop_back();
            b.pop_back();
        }
        if (!answered) return false;
    }
    for (int y = 0; y < N.size; ++y) {
        bool answered = false;
        for (int x = 0; x < M.size && !answered; ++x) {
            a.push_back(x);
            b.push_back(y);
            answered = classical_ef_step(M, N, a, b, rounds - 1);
            a.pop_back();
            b.pop_back();
        }
        if (!answered) return false;
    }
    return true;
}

inline bool classical_ef_equivalent(const Structure& M, const Structure& N, int k) {
    std::vector<int> a, b;
    return classical_ef_step(M, N, a, b, k);
}

// ---------------------------------------------------------------------------
// Independent solver 2: bounded minimax over the game tree of G(a, b).
// ---------------------------------------------------------------------------

struct MinimaxGame {
    PathTree ta, tb;
    std::map<std::pair<int, int>, bool> w;

    MinimaxGame(const ForestStructure& a, const ForestStructure& b)
        : ta(path_nodes(a)), tb(path_nodes(b)) {}

    bool winning(int i, int j) {
        auto it = w.find({i, j});
        if (it != w.end()) return it->second;
        bool v = ta.shape[static_cast<std::size_t>(i)] == tb.shape[static_cast<std::size_t>(j)];
        w[{i, j}] = v;
        return v;
    }

    /// Duplicator survives `depth` further rounds from (i, j).
    bool survives(int i, int j, int depth) {
        if (!winning(i, j)) return false;
        if (depth == 0) return true;
        for (int ci : ta.children[static_cast<std::size_t>(i)]) {
            bool ok = false;
            for (int cj : tb.children[static_cast<std::size_t>(j)])
                if (survives(ci, cj, depth - 1)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        for (int cj : tb.children[static_cast<std::size_t>(j)]) {
            bool ok = false;
            for (int ci : ta.children[static_cast<std::size_t>(i)])
                if (survives(ci, cj, depth - 1)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Independent solver 3: depth-bounded bisimilarity by partition refinement.
// Stage 1 splits by unary atom profile; each further stage refines by the
// set of successor classes along the transition relation.
// ---------------------------------------------------------------------------

inline bool bounded_bisimilar(const Structure& M, const Structure& N, int stages) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    if (!M.point || !N.point) throw error("need pointed structures");
    int trans = M.sig.index_of(*M.sig.transition);
    int total = M.size + N.size;
    auto side = [&](int v) -> const Structure& { return v < M.size ? M : N; };
    auto local = [&](int v) { return v < M.size ? v : v - M.size; };

    std::vector<int> cls(static_cast<std::size_t>(total), 0);
    for (int s = 1; s <= stages; ++s) {
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(static_cast<std::size_t>(total));
        for (int v = 0; v < total; ++v) {
            std::vector<int> key;
            if (s == 1) {
                for (std::size_t r = 0; r < M.sig.relations.size(); ++r)
                    if (M.sig.relations[r].arity == 1)
                        key.push_back(side(v).has_tuple(static_cast<int>(r), {local(v)}) ? 1 : 0);
            } else {
                key.push_back(cls[static_cast<std::size_t>(v)]);
                std::set<int> succ;
                const Structure& S = side(v);
                for (int w = 0; w < S.size; ++w)
                    if (S.has_tuple(trans, {local(v), w}))
                        succ.insert(cls[static_cast<std::size_t>(v < M.size ? w : M.size + w)]);
                key.insert(key.end(), succ.begin(), succ.end());
                key.push_back(-1);
            }
            auto [it, fresh] = ids.insert({key, static_cast<int>(ids.size())});
            next[static_cast<std::size_t>(v)] = it->second;
        }
        cls = std::move(next);
    }
    return stages == 0 || cls[static_cast<std::size_t>(*M.point)] ==
                              cls[static_cast<std::size_t>(M.size + *N.point)];
}

// ---------------------------------------------------------------------------
// Random generators (seeded, deterministic).
// ---------------------------------------------------------------------------

/// Random forest structure of flavor E over one binary relation: a random
/// parent forest plus a random relation supported on comparable pairs.
inline ForestStructure random_e_forest(std::mt19937& rng, int max_nodes, int bound) {
    int n = static_cast<int>(rng() % static_cast<unsigned>(max_nodes + 1));
    ForestStructure a;
    a.flavor = Flavor::E;
    a.bound = bound;
    a.carrier.sig = one_binary();
    a.carrier.size = n;
    a.carrier.tables.resize(1);
    a.parent.assign(static_cast<std::size_t>(n), std::nullopt);
    for (int v = 1; v < n; ++v) {
        // parent among smaller ids keeps the map acyclic
        unsigned p = rng() % static_cast<unsigned>(v + 1);
        if (p < static_cast<unsigned>(v)) {
            if (a.depth(static_cast<int>(p)) < bound) a.parent[static_cast<std::size_t>(v)] = static_cast<int>(p);
        }
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (a.comparable(x, y) && rng() % 3 == 0) a.carrier.tables[0].insert({x, y});
    return a;
}

/// Random pointed Kripke structure: one unary letter, one transition.
inline Structure random_kripke(std::mt19937& rng, int max_states, unsigned edge_denominator = 3) {
    Signature sig = make_signature({{"p", 1}, {"t", 2}}, std::nullopt, "t", true);
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_states));
    std::map<std::string, std::set<Tuple>> tabs;
    for (int i = 0; i < n; ++i) {
        if (rng() % 2 == 0) tabs["p"].insert({i});
        for (int j = 0; j < n; ++j)
            if (rng() % edge_denominator == 0) tabs["t"].insert({i, j});
    }
    return make_structure(sig, n, tabs, 0);
}

}  // namespace testutil
