#pragma once

// The back-and-forth game on a pair of forest structures. Positions are
// pairs of path embeddings; a position is winning when the two path domains
// are isomorphic (equal chain shapes). The rank table is the decreasing
// fixpoint Rk(0) = W, Rk(i+1) = positions from which every Spoiler step to
// a covering node can be answered inside Rk(i). Membership in the
// stabilised set decides the game.

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "comonads.hpp"
#include "forest.hpp"

namespace bfg {

struct Position {
    PathNode left, right;
};

struct Rank {
    bool winning = false;  // in W at all
    bool top = false;      // in the stabilised set
    int value = 0;         // largest finite stage reached (meaningful when winning && !top)
};

struct RankTable {
    int na = 0, nb = 0;
    std::vector<Rank> rank;  // row-major, na * nb
    int stabilization_rank = 0;

    const Rank& at(int i, int j) const { return rank[static_cast<std::size_t>(i) * static_cast<std::size_t>(nb) + static_cast<std::size_t>(j)]; }
};

/// Rank table plus the two path trees it is indexed by.
struct GameAnalysis {
    PathTree ta, tb;
    RankTable table;

    const Rank& at(const Position& p) const { return table.at(ta.node_of(p.left), tb.node_of(p.right)); }
    bool wins(const Position& p) const { return at(p).top; }
    Position root_position() const { return {ta.path_node(0), tb.path_node(0)}; }
};

namespace detail {

inline void check_same_game(const ForestStructure& a, const ForestStructure& b) {
    if (a.flavor != b.flavor) throw error("flavor mismatch");
    if (!(a.carrier.sig == b.carrier.sig)) throw error("signature mismatch");
    if (a.flavor == Flavor::P && a.pebble_count != b.pebble_count) throw error("pebble count mismatch");
    require_wooded(a);
    require_wooded(b);
}

}  // namespace detail

inline GameAnalysis analyze_game(const ForestStructure& a, const ForestStructure& b) {
    detail::check_same_game(a, b);
    GameAnalysis g;
    g.ta = path_nodes(a);
    g.tb = path_nodes(b);
    int na = g.ta.size(), nb = g.tb.size();
    g.table.na = na;
    g.table.nb = nb;
    g.table.rank.assign(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb), Rank{});

    // W: equal chain shapes
    std::vector<char> cur(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb), 0);
    auto idx = [&](int i, int j) {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(nb) + static_cast<std::size_t>(j);
    };
    // bucket right nodes by shape to avoid quadratic shape comparisons
    std::map<ChainShape, std::vector<int>> by_shape;
    for (int j = 0; j < nb; ++j) by_shape[g.tb.shape[static_cast<std::size_t>(j)]].push_back(j);
    for (int i = 0; i < na; ++i) {
        auto it = by_shape.find(g.ta.shape[static_cast<std::size_t>(i)]);
        if (it == by_shape.end()) continue;
        for (int j : it->second) {
            cur[idx(i, j)] = 1;
            g.table.rank[idx(i, j)].winning = true;
        }
    }

    // decreasing fixpoint; monotonicity Rk(i+1) <= Rk(i) holds stage by stage
    int stage = 0;
    while (true) {
        std::vector<char> next(cur.size(), 0);
        bool changed = false;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                if (!cur[idx(i, j)]) continue;
                bool ok = true;
                for (int ci : g.ta.children[static_cast<std::size_t>(i)]) {
                    bool reply = false;
                    for (int cj : g.tb.children[static_cast<std::size_t>(j)])
                        if (cur[idx(ci, cj)]) { reply = true; break; }
                    if (!reply) { ok = false; break; }
                }
                if (ok)
                    for (int cj : g.tb.children[static_cast<std::size_t>(j)]) {
                        bool reply = false;
                        for (int ci : g.ta.children[static_cast<std::size_t>(i)])
                            if (cur[idx(ci, cj)]) { reply = true; break; }
                        if (!reply) { ok = false; break; }
                    }
                if (ok) next[idx(i, j)] = 1;
                else changed = true;
            }
        if (!changed) break;  // Rk(stage) = Rk(stage + 1): stabilised
        for (std::size_t p = 0; p < cur.size(); ++p)
            if (cur[p] && !next[p]) g.table.rank[p].value = stage;
        cur = std::move(next);
        ++stage;
    }
    g.table.stabilization_rank = stage;
    for (std::size_t p = 0; p < cur.size(); ++p)
        if (cur[p]) g.table.rank[p].top = true;
    return g;
}

/// The winning relation W(a, b): positions with isomorphic path domains.
inline std::vector<Position> winning_relation(const ForestStructure& a, const ForestStructure& b) {
    GameAnalysis g = analyze_game(a, b);
    std::vector<Position> w;
    for (int i = 0; i < g.table.na; ++i)
        for (int j = 0; j < g.table.nb; ++j)
            if (g.table.at(i, j).winning) w.push_back({g.ta.path_node(i), g.tb.path_node(j)});
    return w;
}

inline RankTable rank_table(const ForestStructure& a, const ForestStructure& b) {
    return analyze_game(a, b).table;
}

inline bool duplicator_wins(const ForestStructure& a, const ForestStructure& b, const Position& p) {
    return analyze_game(a, b).wins(p);
}

inline bool back_and_forth_equivalent(const ForestStructure& a, const ForestStructure& b) {
    GameAnalysis g = analyze_game(a, b);
    return g.wins(g.root_position());
}

/// R-equivalence: back-and-forth equivalence of the unravellings.
inline bool r_equivalent(const Structure& M, const Structure& N, const ComonadSpec& spec) {
    return back_and_forth_equivalent(unravel(spec, M).forest, unravel(spec, N).forest);
}

/// One Duplicator reply per Spoiler move at every stabilised position,
/// ties broken towards the smallest node id. Key: (left node, right node,
/// side moved by Spoiler: 0 = left, 1 = right, moved-to node).
struct StrategyTable {
    std::map<std::tuple<int, int, int, int>, int> reply;
};

inline StrategyTable extract_strategy(const ForestStructure& a, const ForestStructure& b,
                                      const Position& p) {
    GameAnalysis g = analyze_game(a, b);
    if (!g.wins(p)) throw error("no winning strategy from a losing position");
    StrategyTable s;
    for (int i = 0; i < g.table.na; ++i)
        for (int j = 0; j < g.table.nb; ++j) {
            if (!g.table.at(i, j).top) continue;
            for (int ci : g.ta.children[static_cast<std::size_t>(i)])
                for (int cj : g.tb.children[static_cast<std::size_t>(j)]) {
                    if (s.reply.find({i, j, 0, ci}) == s.reply.end() && g.table.at(ci, cj).top)
                        s.reply[{i, j, 0, ci}] = cj;
                    if (s.reply.find({i, j, 1, cj}) == s.reply.end() && g.table.at(ci, cj).top)
                        s.reply[{i, j, 1, cj}] = ci;
                }
        }
    return s;
}

// ---------------------------------------------------------------------------
// Open morphisms and spans. A morphism is open when every commuting square
// of path embeddings over it has a diagonal filler; a span of open
// morphisms certifies back-and-forth equivalence of its feet.
// ---------------------------------------------------------------------------

inline bool is_open(const std::vector<int>& f, const ForestStructure& a, const ForestStructure& b) {
    if (!is_wooded_morphism(f, a, b)) throw error("not a morphism of forest structures");
    PathTree ta = path_nodes(a), tb = path_nodes(b);

    auto image_node = [&](int u) {
        auto e = ta.element[static_cast<std::size_t>(u)];
        if (!e) return 0;  // the root goes to the root
        return tb.node_of_element[static_cast<std::size_t>(f[static_cast<std::size_t>(*e)])];
    };

    // shape(w) must be contained in shape(x) for the chain map to be a
    // homomorphism; pebbling has to match exactly
    auto maps_over = [&](const ChainShape& w, const ChainShape& x) {
        if (w.length != x.length || w.pebbling != x.pebbling) return false;
        for (const auto& at : w.atoms)
            if (!std::binary_search(x.atoms.begin(), x.atoms.end(), at)) return false;
        return true;
    };

    for (int u = 0; u < ta.size(); ++u) {
        int fu = image_node(u);
        // a square with top-left domain d(u) exists only if f restricted to
        // the chain below u is an embedding onto the chain below f(u)
        if (!(ta.shape[static_cast<std::size_t>(u)] == tb.shape[static_cast<std::size_t>(fu)])) continue;
        // walk all descendants w of f(u); each asks for a lift through u
        std::vector<int> wlist;
        {
            std::vector<int> work{fu};
            while (!work.empty()) {
                int w = work.back();
                work.pop_back();
                wlist.push_back(w);
                for (int c : tb.children[static_cast<std::size_t>(w)]) work.push_back(c);
            }
        }
        for (int w : wlist) {
            if (w == fu) continue;
            // search a node x >= u with f(chain(x)) = chain(w) and a
            // homomorphic chain map; lift step by step over the covering
            std::vector<int> wchain;  // nodes from fu (exclusive) up to w
            for (int z = w; z != fu; z = tb.parent[static_cast<std::size_t>(z)]) wchain.push_back(z);
            std::reverse(wchain.begin(), wchain.end());
            std::vector<int> frontier{u};
            for (int z : wchain) {
                std::vector<int> next;
                for (int x : frontier)
                    for (int cx : ta.children[static_cast<std::size_t>(x)])
                        if (image_node(cx) == z) next.push_back(cx);
                frontier = std::move(next);
                if (frontier.empty()) break;
            }
            bool filled = false;
            for (int x : frontier)
                if (maps_over(tb.shape[static_cast<std::size_t>(w)], ta.shape[static_cast<std::size_t>(x)])) {
                    filled = true;
                    break;
                }
            if (!filled) return false;
        }
    }
    return true;
}

/// Certify a span c <- s -> d of open morphisms.
inline bool certify_span(const ForestStructure& c, const ForestStructure& s, const ForestStructure& d,
                         const std::vector<int>& left, const std::vector<int>& right) {
    if (!is_wooded_morphism(left, s, c) || !is_wooded_morphism(right, s, d))
        throw error("span legs must be morphisms of forest structures");
    return is_open(left, s, c) && is_open(right, s, d);
}

}  // namespace bfg
