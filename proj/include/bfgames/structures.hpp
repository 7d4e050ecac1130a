#pragma once

// Finite mono-sorted relational structures: homomorphisms, embeddings,
// image factorisation, induced substructures, partial isomorphisms, the
// I-as-equality signature expansion and its collapse, and isomorphism
// search for desk-scale instances.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfg {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Tuple = std::vector<int>;

struct RelationSymbol {
    std::string name;
    int arity = 1;

    friend bool operator==(const RelationSymbol& a, const RelationSymbol& b) {
        return a.name == b.name && a.arity == b.arity;
    }
};

/// A finite purely relational signature. Relations are kept sorted by name
/// so that equal signatures compare equal and serialisation is canonical.
struct Signature {
    std::vector<RelationSymbol> relations;
    std::optional<std::string> identity;    // distinguished binary symbol I
    std::optional<std::string> transition;  // modal transition symbol
    bool modal = false;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < relations.size(); ++i)
            if (relations[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int arity_of(const std::string& name) const {
        int i = index_of(name);
        if (i < 0) throw error("unknown relation symbol: " + name);
        return relations[i].arity;
    }

    void normalize() {
        std::sort(relations.begin(), relations.end(),
                  [](const RelationSymbol& a, const RelationSymbol& b) { return a.name < b.name; });
    }

    void validate() const {
        for (std::size_t i = 0; i < relations.size(); ++i) {
            if (relations[i].arity < 1) throw error("relation arity must be >= 1: " + relations[i].name);
            if (i + 1 < relations.size() && relations[i].name == relations[i + 1].name)
                throw error("duplicate relation symbol: " + relations[i].name);
        }
        if (identity) {
            int i = index_of(*identity);
            if (i < 0) throw error("identity symbol not declared: " + *identity);
            if (relations[i].arity != 2) throw error("identity symbol must be binary");
        }
        if (modal) {
            if (!transition) throw error("modal signature needs a transition symbol");
            for (const auto& r : relations)
                if (r.arity > 2) throw error("modal signature allows only unary and binary symbols");
        }
        if (transition) {
            int i = index_of(*transition);
            if (i < 0) throw error("transition symbol not declared: " + *transition);
            if (relations[i].arity != 2) throw error("transition symbol must be binary");
        }
    }

    friend bool operator==(const Signature& a, const Signature& b) {
        return a.relations == b.relations && a.identity == b.identity &&
               a.transition == b.transition && a.modal == b.modal;
    }
};

/// A finite structure. The universe is 0..size-1; relation tables are sets
/// of tuples, parallel to the signature's relation list.
struct Structure {
    Signature sig;
    int size = 0;
    std::vector<std::set<Tuple>> tables;
    std::optional<int> point;

    const std::set<Tuple>& table(int rel) const { return tables.at(static_cast<std::size_t>(rel)); }

    const std::set<Tuple>& table(const std::string& name) const {
        int i = sig.index_of(name);
        if (i < 0) throw error("unknown relation symbol: " + name);
        return tables[static_cast<std::size_t>(i)];
    }

    bool has_tuple(int rel, const Tuple& t) const { return table(rel).count(t) > 0; }

    void validate() const {
        sig.validate();
        if (size < 0) throw error("negative universe size");
        if (tables.size() != sig.relations.size()) throw error("table count does not match signature");
        for (std::size_t r = 0; r < tables.size(); ++r) {
            for (const Tuple& t : tables[r]) {
                if (static_cast<int>(t.size()) != sig.relations[r].arity)
                    throw error("tuple arity mismatch in relation " + sig.relations[r].name);
                for (int e : t)
                    if (e < 0 || e >= size) throw error("out-of-range element in relation " + sig.relations[r].name);
            }
        }
        if (point && (*point < 0 || *point >= size)) throw error("out-of-range distinguished point");
        if (sig.modal && size > 0 && !point) throw error("modal structure is missing its point");
    }
};

inline Structure make_structure(Signature sig, int size,
                                const std::map<std::string, std::set<Tuple>>& tables = {},
                                std::optional<int> point = std::nullopt) {
    sig.normalize();
    Structure m;
    m.sig = std::move(sig);
    m.size = size;
    m.tables.resize(m.sig.relations.size());
    for (const auto& [name, tuples] : tables) {
        int i = m.sig.index_of(name);
        if (i < 0) throw error("unknown relation symbol: " + name);
        m.tables[static_cast<std::size_t>(i)] = tuples;
    }
    m.point = point;
    m.validate();
    return m;
}

/// Convenience signature with the listed (name, arity) pairs.
inline Signature make_signature(const std::vector<RelationSymbol>& rels,
                                std::optional<std::string> identity = std::nullopt,
                                std::optional<std::string> transition = std::nullopt,
                                bool modal = false) {
    Signature s;
    s.relations = rels;
    s.identity = std::move(identity);
    s.transition = std::move(transition);
    s.modal = modal;
    s.normalize();
    s.validate();
    return s;
}

struct Homomorphism {
    Structure source;
    Structure target;
    std::vector<int> map;
};

/// Does the candidate map preserve all relation tables (and the point)?
inline bool is_homomorphism(const std::vector<int>& h, const Structure& M, const Structure& N) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    if (static_cast<int>(h.size()) != M.size) throw error("map is not total on the source universe");
    for (int v : h)
        if (v < 0 || v >= N.size) throw error("map value out of target range");
    for (std::size_t r = 0; r < M.tables.size(); ++r) {
        for (const Tuple& t : M.tables[r]) {
            Tuple img(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) img[i] = h[static_cast<std::size_t>(t[i])];
            if (!N.has_tuple(static_cast<int>(r), img)) return false;
        }
    }
    if (M.point && N.point && h[static_cast<std::size_t>(*M.point)] != *N.point) return false;
    return true;
}

inline bool is_homomorphism(const Homomorphism& h) { return is_homomorphism(h.map, h.source, h.target); }

inline void require_homomorphism(const Homomorphism& h) {
    if (!is_homomorphism(h)) throw error("expected a homomorphism");
}

/// Embeddings are the injective homomorphisms that also reflect every
/// relation table (the strong monomorphisms of the structure category).
inline bool is_embedding(const Homomorphism& h) {
    require_homomorphism(h);
    std::vector<int> seen(static_cast<std::size_t>(h.target.size), -1);
    for (std::size_t a = 0; a < h.map.size(); ++a) {
        int b = h.map[a];
        if (seen[static_cast<std::size_t>(b)] >= 0) return false;
        seen[static_cast<std::size_t>(b)] = static_cast<int>(a);
    }
    // reflect: a target tuple over the image must come from a source tuple
    for (std::size_t r = 0; r < h.target.tables.size(); ++r) {
        for (const Tuple& t : h.target.tables[r]) {
            Tuple pre(t.size());
            bool in_image = true;
            for (std::size_t i = 0; i < t.size() && in_image; ++i) {
                int p = seen[static_cast<std::size_t>(t[i])];
                if (p < 0) in_image = false;
                else pre[i] = p;
            }
            if (in_image && !h.source.has_tuple(static_cast<int>(r), pre)) return false;
        }
    }
    return true;
}

/// Induced substructure on a subset of the universe, with the inclusion map.
/// Elements are re-indexed in increasing order of their original ids.
inline std::pair<Structure, Homomorphism> induced_substructure(const Structure& M,
                                                               const std::vector<int>& subset) {
    std::vector<int> elems(subset);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (int e : elems)
        if (e < 0 || e >= M.size) throw error("subset element out of range");

    std::vector<int> pos(static_cast<std::size_t>(M.size), -1);
    for (std::size_t i = 0; i < elems.size(); ++i) pos[static_cast<std::size_t>(elems[i])] = static_cast<int>(i);

    Structure S;
    S.sig = M.sig;
    S.size = static_cast<int>(elems.size());
    S.tables.resize(M.tables.size());
    for (std::size_t r = 0; r < M.tables.size(); ++r) {
        for (const Tuple& t : M.tables[r]) {
            Tuple img(t.size());
            bool inside = true;
            for (std::size_t i = 0; i < t.size() && inside; ++i) {
                int p = pos[static_cast<std::size_t>(t[i])];
                if (p < 0) inside = false;
                else img[i] = p;
            }
            if (inside) S.tables[r].insert(img);
        }
    }
    if (M.point && pos[static_cast<std::size_t>(*M.point)] >= 0) S.point = pos[static_cast<std::size_t>(*M.point)];
    if (S.sig.modal && S.size > 0 && !S.point)
        throw error("induced substructure of a modal structure must contain the point");

    Homomorphism incl{S, M, elems};
    return {std::move(S), std::move(incl)};
}

/// (quotient, embedding) factorisation through the image, with the image
/// carrying the relations restricted from the target.
inline std::pair<Homomorphism, Homomorphism> factorize(const Homomorphism& h) {
    require_homomorphism(h);
    std::vector<int> image(h.map);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());

    auto [mid, incl] = induced_substructure(h.target, image);
    std::vector<int> pos(static_cast<std::size_t>(h.target.size), -1);
    for (std::size_t i = 0; i < image.size(); ++i) pos[static_cast<std::size_t>(image[i])] = static_cast<int>(i);

    std::vector<int> q(h.map.size());
    for (std::size_t a = 0; a < h.map.size(); ++a) q[a] = pos[static_cast<std::size_t>(h.map[a])];

    Homomorphism quotient{h.source, mid, std::move(q)};
    return {std::move(quotient), std::move(incl)};
}

/// Is the listed pairing a partial isomorphism, i.e. a well-defined
/// injective assignment under which every atom over the listed elements
/// has the same truth value on both sides?
inline bool is_partial_isomorphism(const Structure& M, const Structure& N,
                                   const std::vector<std::pair<int, int>>& pairs) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    std::map<int, int> fwd, bwd;
    for (auto [a, b] : pairs) {
        if (a < 0 || a >= M.size || b < 0 || b >= N.size) throw error("pair element out of range");
        auto f = fwd.find(a);
        if (f != fwd.end() && f->second != b) return false;
        auto g = bwd.find(b);
        if (g != bwd.end() && g->second != a) return false;
        fwd[a] = b;
        bwd[b] = a;
    }
    std::vector<int> dom;
    for (auto& [a, _] : fwd) dom.push_back(a);
    // every relational atom over the domain must agree
    for (std::size_t r = 0; r < M.tables.size(); ++r) {
        int ar = M.sig.relations[r].arity;
        Tuple t(static_cast<std::size_t>(ar));
        std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
        if (dom.empty() && ar > 0) continue;
        while (true) {
            Tuple s(static_cast<std::size_t>(ar)), u(static_cast<std::size_t>(ar));
            for (int i = 0; i < ar; ++i) {
                s[static_cast<std::size_t>(i)] = dom[idx[static_cast<std::size_t>(i)]];
                u[static_cast<std::size_t>(i)] = fwd[s[static_cast<std::size_t>(i)]];
            }
            if (M.has_tuple(static_cast<int>(r), s) != N.has_tuple(static_cast<int>(r), u)) return false;
            int j = ar - 1;
            while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == dom.size()) {
                idx[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++idx[static_cast<std::size_t>(j)];
        }
    }
    return true;
}

/// Expand a structure over sigma to sigma^I, interpreting the fresh binary
/// symbol I as the identity relation.
inline Structure expand_identity(const Structure& M) {
    if (M.sig.identity) throw error("signature already contains I");
    if (M.sig.index_of("I") >= 0) throw error("signature already contains a symbol named I");
    Structure E;
    E.sig = M.sig;
    E.sig.relations.push_back({"I", 2});
    E.sig.identity = "I";
    E.sig.normalize();
    E.size = M.size;
    E.point = M.point;
    E.tables.resize(E.sig.relations.size());
    for (std::size_t r = 0; r < M.tables.size(); ++r)
        E.tables[static_cast<std::size_t>(E.sig.index_of(M.sig.relations[r].name))] = M.tables[r];
    auto& itab = E.tables[static_cast<std::size_t>(E.sig.index_of("I"))];
    for (int a = 0; a < M.size; ++a) itab.insert(Tuple{a, a});
    E.validate();
    return E;
}

/// Quotient the sigma-reduct of a sigma^I structure by the equivalence
/// relation generated by I. Classes are numbered by their least member.
inline Structure collapse_identity(const Structure& M) {
    if (!M.sig.identity) throw error("structure carries no identity symbol");
    int irel = M.sig.index_of(*M.sig.identity);

    std::vector<int> repr(static_cast<std::size_t>(M.size));
    std::iota(repr.begin(), repr.end(), 0);
    auto find = [&](int x) {
        while (repr[static_cast<std::size_t>(x)] != x) {
            repr[static_cast<std::size_t>(x)] = repr[static_cast<std::size_t>(repr[static_cast<std::size_t>(x)])];
            x = repr[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        repr[static_cast<std::size_t>(b)] = a;  // least member leads
    };
    for (const Tuple& t : M.tables[static_cast<std::size_t>(irel)]) unite(t[0], t[1]);

    std::vector<int> cls(static_cast<std::size_t>(M.size), -1);
    int n = 0;
    for (int a = 0; a < M.size; ++a)
        if (find(a) == a) cls[static_cast<std::size_t>(a)] = n++;
    for (int a = 0; a < M.size; ++a) cls[static_cast<std::size_t>(a)] = cls[static_cast<std::size_t>(find(a))];

    Structure Q;
    Q.sig = M.sig;
    Q.sig.relations.erase(Q.sig.relations.begin() + M.sig.index_of(*M.sig.identity));
    Q.sig.identity = std::nullopt;
    Q.size = n;
    Q.tables.resize(Q.sig.relations.size());
    for (std::size_t r = 0; r < M.tables.size(); ++r) {
        if (static_cast<int>(r) == irel) continue;
        int q = Q.sig.index_of(M.sig.relations[r].name);
        for (const Tuple& t : M.tables[r]) {
            Tuple img(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) img[i] = cls[static_cast<std::size_t>(t[i])];
            Q.tables[static_cast<std::size_t>(q)].insert(img);
        }
    }
    if (M.point) Q.point = cls[static_cast<std::size_t>(*M.point)];
    Q.validate();
    return Q;
}

namespace detail {

// Per-element occurrence counts, one per (relation, coordinate); used to
// prune the isomorphism backtracking.
inline std::vector<std::vector<int>> degree_profiles(const Structure& M) {
    std::vector<std::vector<int>> prof(static_cast<std::size_t>(M.size));
    for (int a = 0; a < M.size; ++a) {
        for (std::size_t r = 0; r < M.tables.size(); ++r) {
            int ar = M.sig.relations[r].arity;
            for (int i = 0; i < ar; ++i) {
                int c = 0;
                for (const Tuple& t : M.tables[r])
                    if (t[static_cast<std::size_t>(i)] == a) ++c;
                prof[static_cast<std::size_t>(a)].push_back(c);
            }
        }
    }
    return prof;
}

inline bool iso_search(const Structure& M, const Structure& N, std::vector<int>& map,
                       std::vector<bool>& used, int next,
                       const std::vector<std::vector<int>>& pm, const std::vector<std::vector<int>>& pn) {
    if (next == M.size) {
        Homomorphism h{M, N, map};
        if (!is_homomorphism(h)) return false;
        return is_embedding(h);  // bijective embedding = isomorphism
    }
    for (int b = 0; b < N.size; ++b) {
        if (used[static_cast<std::size_t>(b)]) continue;
        if (pm[static_cast<std::size_t>(next)] != pn[static_cast<std::size_t>(b)]) continue;
        if (M.point && (*M.point == next) != (N.point && *N.point == b)) continue;
        map[static_cast<std::size_t>(next)] = b;
        used[static_cast<std::size_t>(b)] = true;
        // check atoms among the assigned prefix
        bool ok = true;
        for (std::size_t r = 0; r < M.tables.size() && ok; ++r) {
            for (const Tuple& t : M.tables[r]) {
                bool ready = true;
                for (int e : t) ready = ready && e <= next;
                if (!ready) continue;
                Tuple img(t.size());
                for (std::size_t i = 0; i < t.size(); ++i) img[i] = map[static_cast<std::size_t>(t[i])];
                if (!N.has_tuple(static_cast<int>(r), img)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && iso_search(M, N, map, used, next + 1, pm, pn)) return true;
        used[static_cast<std::size_t>(b)] = false;
    }
    return false;
}

}  // namespace detail

inline std::optional<std::vector<int>> find_isomorphism(const Structure& M, const Structure& N) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    if (M.size != N.size) return std::nullopt;
    for (std::size_t r = 0; r < M.tables.size(); ++r)
        if (M.tables[r].size() != N.tables[r].size()) return std::nullopt;
    if (M.point.has_value() != N.point.has_value()) return std::nullopt;
    auto pm = detail::degree_profiles(M);
    auto pn = detail::degree_profiles(N);
    {
        auto sm = pm, sn = pn;
        std::sort(sm.begin(), sm.end());
        std::sort(sn.begin(), sn.end());
        if (sm != sn) return std::nullopt;
    }
    std::vector<int> map(static_cast<std::size_t>(M.size), -1);
    std::vector<bool> used(static_cast<std::size_t>(N.size), false);
    if (detail::iso_search(M, N, map, used, 0, pm, pn)) return map;
    return std::nullopt;
}

inline bool are_isomorphic(const Structure& M, const Structure& N) {
    return find_isomorphism(M, N).has_value();
}

}  // namespace bfg
