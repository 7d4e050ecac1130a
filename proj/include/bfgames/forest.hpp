#pragma once

// Forest-ordered structures: the objects played on by back-and-forth games.
// A ForestStructure is a structure together with a forest order (given by a
// parent map), a depth bound, and a flavor tag with the flavor's side data:
//   Plain - no condition beyond the forest order,
//   E     - Gaifman-adjacent elements are comparable,
//   P     - E plus the pebbling discipline,
//   M     - non-empty tree of a pointed structure, point at the root,
//           covering = the transition relation.

#include <optional>
#include <string>
#include <vector>

#include "structures.hpp"

namespace bfg {

enum class Flavor { Plain, E, P, M };

inline std::string flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Plain: return "plain";
        case Flavor::E: return "e";
        case Flavor::P: return "p";
        case Flavor::M: return "m";
    }
    return "?";
}

inline Flavor flavor_from_name(const std::string& s) {
    if (s == "plain") return Flavor::Plain;
    if (s == "e") return Flavor::E;
    if (s == "p") return Flavor::P;
    if (s == "m") return Flavor::M;
    throw error("unknown flavor: " + s);
}

struct ForestStructure {
    Structure carrier;
    std::vector<std::optional<int>> parent;  // absent = root
    std::optional<int> bound;                // max cardinality of a chain; absent = unbounded
    Flavor flavor = Flavor::Plain;
    int pebble_count = 0;                    // flavor P
    std::vector<int> pebbling;               // flavor P, values in 1..pebble_count

    /// Cardinality of the chain below (and including) v.
    int depth(int v) const {
        int d = 0;
        for (std::optional<int> x = v; x; x = parent[static_cast<std::size_t>(*x)]) ++d;
        return d;
    }

    /// The chain below v, root first, v last.
    std::vector<int> down_chain(int v) const {
        std::vector<int> c;
        for (std::optional<int> x = v; x; x = parent[static_cast<std::size_t>(*x)]) c.push_back(*x);
        std::reverse(c.begin(), c.end());
        return c;
    }

    bool less_equal(int x, int y) const {
        for (std::optional<int> z = y; z; z = parent[static_cast<std::size_t>(*z)])
            if (*z == x) return true;
        return false;
    }

    bool comparable(int x, int y) const { return less_equal(x, y) || less_equal(y, x); }
};

namespace detail {

/// Pairs of distinct elements sharing a tuple in some relation.
inline std::vector<std::pair<int, int>> gaifman_edges(const Structure& M) {
    std::set<std::pair<int, int>> edges;
    for (const auto& tab : M.tables)
        for (const Tuple& t : tab)
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] != t[j]) edges.insert({std::min(t[i], t[j]), std::max(t[i], t[j])});
    return {edges.begin(), edges.end()};
}

inline bool parent_map_acyclic(const ForestStructure& a) {
    int n = a.carrier.size;
    if (static_cast<int>(a.parent.size()) != n) return false;
    for (int v = 0; v < n; ++v) {
        int steps = 0;
        for (std::optional<int> x = v; x; x = a.parent[static_cast<std::size_t>(*x)]) {
            if (*x < 0 || *x >= n) return false;
            if (++steps > n) return false;  // cycle
        }
    }
    return true;
}

}  // namespace detail

/// Check every invariant of the declared flavor.
inline bool validate_wooded(const ForestStructure& a) {
    try {
        a.carrier.validate();
    } catch (const error&) {
        return false;
    }
    if (!detail::parent_map_acyclic(a)) return false;
    int n = a.carrier.size;
    if (a.bound) {
        if (*a.bound < 1) return false;
        for (int v = 0; v < n; ++v)
            if (a.depth(v) > *a.bound) return false;
    }
    switch (a.flavor) {
        case Flavor::Plain:
            break;
        case Flavor::E:
            for (auto [x, y] : detail::gaifman_edges(a.carrier))
                if (!a.comparable(x, y)) return false;
            break;
        case Flavor::P: {
            if (a.pebble_count < 1) return false;
            if (static_cast<int>(a.pebbling.size()) != n) return false;
            for (int p : a.pebbling)
                if (p < 1 || p > a.pebble_count) return false;
            for (auto [x, y] : detail::gaifman_edges(a.carrier)) {
                if (!a.comparable(x, y)) return false;
                int lo = a.less_equal(x, y) ? x : y;
                int hi = lo == x ? y : x;
                // p(lo) must not reappear strictly above lo up to hi
                for (std::optional<int> z = hi; z && *z != lo; z = a.parent[static_cast<std::size_t>(*z)])
                    if (a.pebbling[static_cast<std::size_t>(*z)] == a.pebbling[static_cast<std::size_t>(lo)])
                        return false;
            }
            break;
        }
        case Flavor::M: {
            if (n == 0) return false;
            if (!a.carrier.sig.modal || !a.carrier.sig.transition) return false;
            if (!a.carrier.point) return false;
            int roots = 0, root = -1;
            for (int v = 0; v < n; ++v)
                if (!a.parent[static_cast<std::size_t>(v)]) {
                    ++roots;
                    root = v;
                }
            if (roots != 1 || root != *a.carrier.point) return false;
            const auto& trans = a.carrier.table(*a.carrier.sig.transition);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    bool covers = a.parent[static_cast<std::size_t>(y)] &&
                                  *a.parent[static_cast<std::size_t>(y)] == x;
                    if (covers != (trans.count(Tuple{x, y}) > 0)) return false;
                }
            break;
        }
    }
    return true;
}

inline void require_wooded(const ForestStructure& a) {
    if (!validate_wooded(a)) throw error("invalid forest structure for its flavor");
}

/// A path embedding into a, canonically the inclusion of a down-set.
/// Root stands for the least path embedding; for flavor M it coincides
/// with the node of the distinguished point.
struct PathNode {
    std::optional<int> element;  // absent = Root

    friend bool operator==(const PathNode& a, const PathNode& b) { return a.element == b.element; }
};

/// Atom profile of a chain, the carrier-free shape of a path. Indices into
/// the chain are 0-based, root first. Equality of shapes is isomorphism of
/// the path domains (the order isomorphism between chains being unique).
struct ChainShape {
    int length = 0;
    bool pointed = false;
    std::vector<std::pair<int, Tuple>> atoms;  // (relation index, chain-index tuple), sorted
    std::vector<int> pebbling;                 // flavor P

    friend bool operator==(const ChainShape& a, const ChainShape& b) {
        return a.length == b.length && a.pointed == b.pointed && a.atoms == b.atoms &&
               a.pebbling == b.pebbling;
    }
    friend bool operator<(const ChainShape& a, const ChainShape& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.pointed != b.pointed) return a.pointed < b.pointed;
        if (a.atoms != b.atoms) return a.atoms < b.atoms;
        return a.pebbling < b.pebbling;
    }
};

/// The tree of path embeddings into a forest structure. Node 0 is the root
/// (the least path embedding); element nodes follow in element order.
struct PathTree {
    std::vector<std::optional<int>> element;  // node -> carrier element
    std::vector<int> parent;                  // -1 at the root
    std::vector<std::vector<int>> children;
    std::vector<int> depth;                   // chain cardinality of the node's domain
    std::vector<ChainShape> shape;
    std::vector<int> node_of_element;         // carrier element -> node

    int size() const { return static_cast<int>(element.size()); }

    int node_of(const PathNode& p) const {
        if (!p.element) return 0;
        return node_of_element.at(static_cast<std::size_t>(*p.element));
    }

    PathNode path_node(int node) const { return PathNode{element.at(static_cast<std::size_t>(node))}; }

    bool is_chain() const {
        for (const auto& c : children)
            if (c.size() > 1) return false;
        return true;
    }
};

namespace detail {

inline ChainShape chain_shape_of(const ForestStructure& a, const std::vector<int>& chain) {
    ChainShape s;
    s.length = static_cast<int>(chain.size());
    s.pointed = a.flavor == Flavor::M;
    std::vector<int> pos(static_cast<std::size_t>(a.carrier.size), -1);
    for (std::size_t i = 0; i < chain.size(); ++i) pos[static_cast<std::size_t>(chain[i])] = static_cast<int>(i);
    for (std::size_t r = 0; r < a.carrier.tables.size(); ++r) {
        for (const Tuple& t : a.carrier.tables[r]) {
            Tuple idx(t.size());
            bool inside = true;
            for (std::size_t i = 0; i < t.size() && inside; ++i) {
                int p = pos[static_cast<std::size_t>(t[i])];
                if (p < 0) inside = false;
                else idx[i] = p;
            }
            if (inside) s.atoms.push_back({static_cast<int>(r), idx});
        }
    }
    std::sort(s.atoms.begin(), s.atoms.end());
    if (a.flavor == Flavor::P)
        for (int e : chain) s.pebbling.push_back(a.pebbling[static_cast<std::size_t>(e)]);
    return s;
}

}  // namespace detail

/// Build the tree of path embeddings. Precondition: validate_wooded(a).
inline PathTree path_nodes(const ForestStructure& a) {
    require_wooded(a);
    PathTree t;
    int n = a.carrier.size;
    bool modal = a.flavor == Flavor::M;

    if (modal) {
        // the root node is the node of the distinguished point
        t.element.resize(static_cast<std::size_t>(n));
        t.node_of_element.resize(static_cast<std::size_t>(n));
        int root = *a.carrier.point;
        std::vector<int> order;
        order.push_back(root);
        for (int v = 0; v < n; ++v)
            if (v != root) order.push_back(v);
        std::vector<int> node_of(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < order.size(); ++i) node_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
        t.parent.resize(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            int v = order[i];
            t.element[i] = v;
            t.node_of_element[static_cast<std::size_t>(v)] = static_cast<int>(i);
            auto p = a.parent[static_cast<std::size_t>(v)];
            t.parent[i] = p ? node_of[static_cast<std::size_t>(*p)] : -1;
        }
    } else {
        t.element.resize(static_cast<std::size_t>(n) + 1);
        t.node_of_element.resize(static_cast<std::size_t>(n));
        t.parent.assign(static_cast<std::size_t>(n) + 1, -1);
        t.element[0] = std::nullopt;
        for (int v = 0; v < n; ++v) {
            t.element[static_cast<std::size_t>(v) + 1] = v;
            t.node_of_element[static_cast<std::size_t>(v)] = v + 1;
            auto p = a.parent[static_cast<std::size_t>(v)];
            t.parent[static_cast<std::size_t>(v) + 1] = p ? *p + 1 : 0;
        }
    }

    t.children.resize(t.element.size());
    for (std::size_t i = 0; i < t.element.size(); ++i)
        if (t.parent[i] >= 0) t.children[static_cast<std::size_t>(t.parent[i])].push_back(static_cast<int>(i));
    t.depth.resize(t.element.size());
    t.shape.resize(t.element.size());
    for (std::size_t i = 0; i < t.element.size(); ++i) {
        std::vector<int> chain =
            t.element[i] ? a.down_chain(*t.element[i]) : std::vector<int>{};
        t.depth[i] = static_cast<int>(chain.size());
        t.shape[i] = detail::chain_shape_of(a, chain);
    }
    return t;
}

inline PathNode root_path_node(const ForestStructure& a) {
    if (a.flavor == Flavor::M) {
        require_wooded(a);
        return PathNode{*a.carrier.point};
    }
    return PathNode{std::nullopt};
}

/// Domain of a path embedding: the induced substructure on the down-set,
/// with the flavor's side data restricted along the chain.
struct PathDomain {
    Structure structure;
    std::vector<int> elements;  // chain in a, root first
    std::vector<int> pebbling;  // flavor P
};

inline PathDomain path_domain(const ForestStructure& a, const PathNode& node) {
    require_wooded(a);
    std::vector<int> chain;
    if (node.element) {
        if (*node.element < 0 || *node.element >= a.carrier.size) throw error("path node out of range");
        chain = a.down_chain(*node.element);
    } else if (a.flavor == Flavor::M) {
        chain = {*a.carrier.point};
    }
    // re-index along the chain, root = 0
    std::vector<int> pos(static_cast<std::size_t>(a.carrier.size), -1);
    for (std::size_t i = 0; i < chain.size(); ++i) pos[static_cast<std::size_t>(chain[i])] = static_cast<int>(i);
    PathDomain d;
    d.structure.sig = a.carrier.sig;
    d.structure.size = static_cast<int>(chain.size());
    d.structure.tables.resize(a.carrier.tables.size());
    for (std::size_t r = 0; r < a.carrier.tables.size(); ++r) {
        for (const Tuple& t : a.carrier.tables[r]) {
            Tuple idx(t.size());
            bool inside = true;
            for (std::size_t i = 0; i < t.size() && inside; ++i) {
                int p = pos[static_cast<std::size_t>(t[i])];
                if (p < 0) inside = false;
                else idx[i] = p;
            }
            if (inside) d.structure.tables[r].insert(idx);
        }
    }
    if (a.flavor == Flavor::M && !chain.empty()) d.structure.point = 0;
    d.elements = chain;
    if (a.flavor == Flavor::P)
        for (int e : chain) d.pebbling.push_back(a.pebbling[static_cast<std::size_t>(e)]);
    return d;
}

inline ChainShape chain_shape(const ForestStructure& a, const PathNode& node) {
    std::vector<int> chain;
    if (node.element) chain = a.down_chain(*node.element);
    else if (a.flavor == Flavor::M) chain = {*a.carrier.point};
    return detail::chain_shape_of(a, chain);
}

/// A forest structure is a path when its path tree is a chain.
inline bool is_path(const ForestStructure& a) { return path_nodes(a).is_chain(); }

/// Forest morphism (roots to roots, covering to covering) that is also a
/// carrier homomorphism and preserves the flavor's side data.
inline bool is_wooded_morphism(const std::vector<int>& f, const ForestStructure& a,
                               const ForestStructure& b) {
    if (a.flavor != b.flavor) throw error("flavor mismatch");
    if (!is_homomorphism(f, a.carrier, b.carrier)) return false;
    for (int v = 0; v < a.carrier.size; ++v) {
        auto pa = a.parent[static_cast<std::size_t>(v)];
        int fv = f[static_cast<std::size_t>(v)];
        auto pb = b.parent[static_cast<std::size_t>(fv)];
        if (pa) {
            if (!pb || *pb != f[static_cast<std::size_t>(*pa)]) return false;
        } else {
            if (pb) return false;
        }
    }
    if (a.flavor == Flavor::P) {
        if (a.pebble_count != b.pebble_count) return false;
        for (int v = 0; v < a.carrier.size; ++v)
            if (a.pebbling[static_cast<std::size_t>(v)] != b.pebbling[static_cast<std::size_t>(f[static_cast<std::size_t>(v)])])
                return false;
    }
    return true;
}

/// Is a wooded morphism an embedding, i.e. an embedding of the carriers?
inline bool is_wooded_embedding(const std::vector<int>& f, const ForestStructure& a,
                                const ForestStructure& b) {
    if (a.flavor != b.flavor) throw error("flavor mismatch");
    Homomorphism h{a.carrier, b.carrier, f};
    return is_embedding(h);
}

/// Embedding test for a morphism out of a path, decided on the carriers.
inline bool detect_path_embedding(const std::vector<int>& f, const ForestStructure& P,
                                  const ForestStructure& a) {
    if (!is_path(P)) throw error("domain is not a path");
    Homomorphism h{P.carrier, a.carrier, f};
    return is_embedding(h);
}

}  // namespace bfg
