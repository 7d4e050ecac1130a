#pragma once

// The concrete game comonads. unravel builds the forest of plays over a
// structure: all positions the corresponding game can reach, with the
// relations of the base lifted to plays. counit and comultiplication give
// the comonad structure on the carrier; transpose realises the adjunction
// between forest-ordered structures and plain structures.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forest.hpp"
#include "structures.hpp"

namespace bfg {

enum class ComonadKind { EF, Pebble, Modal };

inline std::string comonad_name(ComonadKind k) {
    switch (k) {
        case ComonadKind::EF: return "ef";
        case ComonadKind::Pebble: return "pebble";
        case ComonadKind::Modal: return "modal";
    }
    return "?";
}

inline ComonadKind comonad_from_name(const std::string& s) {
    if (s == "ef") return ComonadKind::EF;
    if (s == "pebble") return ComonadKind::Pebble;
    if (s == "modal") return ComonadKind::Modal;
    throw error("unknown comonad kind: " + s);
}

struct ComonadSpec {
    ComonadKind kind = ComonadKind::EF;
    int k = 1;
    bool with_identity = false;
    std::optional<int> play_bound;  // pebble only; plays are cut at this length

    int effective_bound() const {
        if (kind == ComonadKind::Pebble) return play_bound ? *play_bound : 2 * k;
        return k;
    }

    void validate() const {
        if (k < 1) throw error("comonad resource k must be >= 1");
        if (with_identity && kind == ComonadKind::Modal)
            throw error("the identity expansion applies to the ef and pebble comonads only");
        if (play_bound && kind != ComonadKind::Pebble)
            throw error("--play-bound applies to the pebble comonad only");
        if (play_bound && *play_bound < 1) throw error("play bound must be >= 1");
    }
};

/// The forest of plays of a comonad over a base structure, together with
/// the play behind every carrier element.
struct Unravelling {
    ForestStructure forest;
    Structure base;                        // identity-expanded when requested
    std::vector<std::vector<int>> plays;   // carrier element -> base elements
    std::vector<std::vector<int>> pebbles; // pebble kind: pebble index per move
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;  // (play, pebbles) -> element

    int element_of(const std::vector<int>& play, const std::vector<int>& peb = {}) const {
        auto it = index.find({play, peb});
        if (it == index.end()) throw error("no such play in the unravelling");
        return it->second;
    }
};

namespace detail {

/// Plays live for EF and pebble lifting: a tuple of plays is related when
/// the plays are pairwise prefix-comparable, the moved elements are related
/// in the base, and (pebble case) no coordinate's pebble was overwritten up
/// to the longest play of the tuple.
inline bool prefix_of(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

inline Unravelling unravel_ef(int k, const Structure& base) {
    Unravelling u;
    u.base = base;
    std::vector<std::vector<int>> plays;
    std::vector<std::optional<int>> parent;
    // breadth-first by length so parents precede children
    std::vector<int> frontier;
    for (int len = 1; len <= k; ++len) {
        std::vector<int> next;
        if (len == 1) {
            for (int a = 0; a < base.size; ++a) {
                plays.push_back({a});
                parent.push_back(std::nullopt);
                next.push_back(static_cast<int>(plays.size()) - 1);
            }
        } else {
            for (int p : frontier)
                for (int a = 0; a < base.size; ++a) {
                    std::vector<int> play = plays[static_cast<std::size_t>(p)];
                    play.push_back(a);
                    plays.push_back(std::move(play));
                    parent.push_back(p);
                    next.push_back(static_cast<int>(plays.size()) - 1);
                }
        }
        frontier = std::move(next);
    }

    Structure carrier;
    carrier.sig = base.sig;
    carrier.size = static_cast<int>(plays.size());
    carrier.tables.resize(base.tables.size());

    // relation lifting needs prefix-comparability of every pair in a tuple;
    // a pairwise comparable set of plays is a chain, so tuples are drawn
    // from the down-set of their longest member
    std::vector<std::vector<int>> chain(plays.size());
    for (std::size_t e = 0; e < plays.size(); ++e) {
        std::optional<int> x = static_cast<int>(e);
        while (x) {
            chain[e].push_back(*x);
            x = parent[static_cast<std::size_t>(*x)];
        }
    }
    for (std::size_t r = 0; r < base.tables.size(); ++r) {
        int ar = base.sig.relations[r].arity;
        for (std::size_t e = 0; e < plays.size(); ++e) {
            // tuples whose longest coordinate is e
            const auto& cands = chain[e];
            std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
            while (true) {
                bool uses_e = false;
                Tuple t(static_cast<std::size_t>(ar));
                Tuple lasts(static_cast<std::size_t>(ar));
                for (int i = 0; i < ar; ++i) {
                    int c = cands[idx[static_cast<std::size_t>(i)]];
                    if (c == static_cast<int>(e)) uses_e = true;
                    t[static_cast<std::size_t>(i)] = c;
                    lasts[static_cast<std::size_t>(i)] = plays[static_cast<std::size_t>(c)].back();
                }
                if (uses_e && base.has_tuple(static_cast<int>(r), lasts))
                    carrier.tables[r].insert(t);
                int j = ar - 1;
                while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == cands.size()) {
                    idx[static_cast<std::size_t>(j)] = 0;
                    --j;
                }
                if (j < 0) break;
                ++idx[static_cast<std::size_t>(j)];
            }
        }
    }

    u.forest.carrier = std::move(carrier);
    u.forest.parent = std::move(parent);
    u.forest.bound = k;
    u.forest.flavor = Flavor::E;
    u.plays = std::move(plays);
    for (std::size_t e = 0; e < u.plays.size(); ++e) u.index[{u.plays[e], {}}] = static_cast<int>(e);
    return u;
}

inline Unravelling unravel_pebble(int k, int bound, const Structure& base) {
    Unravelling u;
    u.base = base;
    std::vector<std::vector<int>> plays, pebs;
    std::vector<std::optional<int>> parent;
    std::vector<int> frontier;
    for (int len = 1; len <= bound; ++len) {
        std::vector<int> next;
        auto extend = [&](std::optional<int> from) {
            for (int p = 1; p <= k; ++p)
                for (int a = 0; a < base.size; ++a) {
                    std::vector<int> play, peb;
                    if (from) {
                        play = plays[static_cast<std::size_t>(*from)];
                        peb = pebs[static_cast<std::size_t>(*from)];
                    }
                    play.push_back(a);
                    peb.push_back(p);
                    plays.push_back(std::move(play));
                    pebs.push_back(std::move(peb));
                    parent.push_back(from);
                    next.push_back(static_cast<int>(plays.size()) - 1);
                }
        };
        if (len == 1) {
            extend(std::nullopt);
        } else {
            for (int f : frontier) extend(f);
        }
        frontier = std::move(next);
    }

    std::vector<std::vector<int>> chain(plays.size());
    for (std::size_t e = 0; e < plays.size(); ++e) {
        std::optional<int> x = static_cast<int>(e);
        while (x) {
            chain[e].push_back(*x);
            x = parent[static_cast<std::size_t>(*x)];
        }
    }
    // live(s, t): the pebble placed by the last move of s is not moved again
    // in t strictly after s (s a prefix of t)
    auto live = [&](int s, int t) {
        int ps = pebs[static_cast<std::size_t>(s)].back();
        const auto& pt = pebs[static_cast<std::size_t>(t)];
        for (std::size_t j = plays[static_cast<std::size_t>(s)].size(); j < pt.size(); ++j)
            if (pt[j] == ps) return false;
        return true;
    };

    Structure carrier;
    carrier.sig = base.sig;
    carrier.size = static_cast<int>(plays.size());
    carrier.tables.resize(base.tables.size());
    for (std::size_t r = 0; r < base.tables.size(); ++r) {
        int ar = base.sig.relations[r].arity;
        for (std::size_t e = 0; e < plays.size(); ++e) {
            const auto& cands = chain[e];
            std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
            while (true) {
                bool uses_e = true;
                Tuple t(static_cast<std::size_t>(ar));
                Tuple lasts(static_cast<std::size_t>(ar));
                bool all_live = true;
                {
                    bool found = false;
                    for (int i = 0; i < ar; ++i) {
                        int c = cands[idx[static_cast<std::size_t>(i)]];
                        if (c == static_cast<int>(e)) found = true;
                        t[static_cast<std::size_t>(i)] = c;
                        lasts[static_cast<std::size_t>(i)] = plays[static_cast<std::size_t>(c)].back();
                    }
                    uses_e = found;
                }
                if (uses_e) {
                    for (int i = 0; i < ar && all_live; ++i)
                        all_live = live(t[static_cast<std::size_t>(i)], static_cast<int>(e));
                    if (all_live && base.has_tuple(static_cast<int>(r), lasts))
                        carrier.tables[r].insert(t);
                }
                int j = ar - 1;
                while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == cands.size()) {
                    idx[static_cast<std::size_t>(j)] = 0;
                    --j;
                }
                if (j < 0) break;
                ++idx[static_cast<std::size_t>(j)];
            }
        }
    }

    u.forest.carrier = std::move(carrier);
    u.forest.parent = std::move(parent);
    u.forest.bound = bound;
    u.forest.flavor = Flavor::P;
    u.forest.pebble_count = k;
    for (const auto& p : pebs) u.forest.pebbling.push_back(p.back());
    u.plays = std::move(plays);
    u.pebbles = std::move(pebs);
    for (std::size_t e = 0; e < u.plays.size(); ++e)
        u.index[{u.plays[e], u.pebbles[e]}] = static_cast<int>(e);
    return u;
}

inline Unravelling unravel_modal(int k, const Structure& base) {
    if (!base.sig.modal || !base.sig.transition) throw error("modal unravelling needs a modal signature");
    if (!base.point) throw error("modal unravelling needs a pointed structure");
    int trans = base.sig.index_of(*base.sig.transition);

    Unravelling u;
    u.base = base;
    std::vector<std::vector<int>> plays;
    std::vector<std::optional<int>> parent;
    plays.push_back({*base.point});
    parent.push_back(std::nullopt);
    std::vector<int> frontier{0};
    for (int len = 2; len <= k; ++len) {
        std::vector<int> next;
        for (int f : frontier) {
            int last = plays[static_cast<std::size_t>(f)].back();
            for (int a = 0; a < base.size; ++a) {
                if (!base.has_tuple(trans, Tuple{last, a})) continue;
                std::vector<int> play = plays[static_cast<std::size_t>(f)];
                play.push_back(a);
                plays.push_back(std::move(play));
                parent.push_back(f);
                next.push_back(static_cast<int>(plays.size()) - 1);
            }
        }
        frontier = std::move(next);
    }

    std::vector<std::vector<int>> chain(plays.size());
    for (std::size_t e = 0; e < plays.size(); ++e) {
        std::optional<int> x = static_cast<int>(e);
        while (x) {
            chain[e].push_back(*x);
            x = parent[static_cast<std::size_t>(*x)];
        }
    }

    Structure carrier;
    carrier.sig = base.sig;
    carrier.size = static_cast<int>(plays.size());
    carrier.point = 0;
    carrier.tables.resize(base.tables.size());
    for (std::size_t r = 0; r < base.tables.size(); ++r) {
        int ar = base.sig.relations[r].arity;
        if (static_cast<int>(r) == trans) {
            // the transition relation becomes the covering relation
            for (std::size_t e = 0; e < plays.size(); ++e)
                if (parent[e]) carrier.tables[r].insert(Tuple{*parent[e], static_cast<int>(e)});
            continue;
        }
        if (ar == 1) {
            for (std::size_t e = 0; e < plays.size(); ++e)
                if (base.has_tuple(static_cast<int>(r), Tuple{plays[e].back()}))
                    carrier.tables[r].insert(Tuple{static_cast<int>(e)});
            continue;
        }
        // any other binary symbol lifts like in the EF case
        for (std::size_t e = 0; e < plays.size(); ++e)
            for (int c : chain[e]) {
                Tuple fwd{c, static_cast<int>(e)}, bwd{static_cast<int>(e), c};
                if (base.has_tuple(static_cast<int>(r),
                                   Tuple{plays[static_cast<std::size_t>(c)].back(), plays[e].back()}))
                    carrier.tables[r].insert(fwd);
                if (base.has_tuple(static_cast<int>(r),
                                   Tuple{plays[e].back(), plays[static_cast<std::size_t>(c)].back()}))
                    carrier.tables[r].insert(bwd);
            }
    }

    u.forest.carrier = std::move(carrier);
    u.forest.parent = std::move(parent);
    u.forest.bound = k;
    u.forest.flavor = Flavor::M;
    u.plays = std::move(plays);
    for (std::size_t e = 0; e < u.plays.size(); ++e) u.index[{u.plays[e], {}}] = static_cast<int>(e);
    return u;
}

}  // namespace detail

inline Unravelling unravel(const ComonadSpec& spec, const Structure& M) {
    spec.validate();
    Structure base = spec.with_identity ? expand_identity(M) : M;
    base.validate();
    Unravelling u;
    switch (spec.kind) {
        case ComonadKind::EF: u = detail::unravel_ef(spec.k, base); break;
        case ComonadKind::Pebble: u = detail::unravel_pebble(spec.k, spec.effective_bound(), base); break;
        case ComonadKind::Modal: u = detail::unravel_modal(spec.k, base); break;
    }
    return u;
}

/// Counit of the comonad: a play goes to its last move. This is a
/// homomorphism from the carrier of the unravelling to the base.
inline Homomorphism counit(const ComonadSpec& spec, const Structure& M) {
    Unravelling u = unravel(spec, M);
    std::vector<int> eps(u.plays.size());
    for (std::size_t e = 0; e < u.plays.size(); ++e) eps[e] = u.plays[e].back();
    return Homomorphism{u.forest.carrier, u.base, std::move(eps)};
}

/// Comultiplication: a play goes to its sequence of non-empty prefixes,
/// which is a play over the carrier of the unravelling itself.
inline Homomorphism comultiplication(const ComonadSpec& spec, const Structure& M) {
    Unravelling inner = unravel(spec, M);
    // the carrier is already identity-expanded, so lift it as it stands
    Unravelling outer;
    switch (spec.kind) {
        case ComonadKind::EF: outer = detail::unravel_ef(spec.k, inner.forest.carrier); break;
        case ComonadKind::Pebble:
            outer = detail::unravel_pebble(spec.k, spec.effective_bound(), inner.forest.carrier);
            break;
        case ComonadKind::Modal: outer = detail::unravel_modal(spec.k, inner.forest.carrier); break;
    }
    std::vector<int> delta(inner.plays.size());
    for (std::size_t e = 0; e < inner.plays.size(); ++e) {
        std::vector<int> prefixes;  // elements of the inner carrier
        std::optional<int> x = static_cast<int>(e);
        while (x) {
            prefixes.push_back(*x);
            x = inner.forest.parent[static_cast<std::size_t>(*x)];
        }
        std::reverse(prefixes.begin(), prefixes.end());
        std::vector<int> peb =
            spec.kind == ComonadKind::Pebble ? inner.pebbles[e] : std::vector<int>{};
        delta[e] = outer.element_of(prefixes, peb);
    }
    return Homomorphism{inner.forest.carrier, outer.forest.carrier, std::move(delta)};
}

/// Transpose of a homomorphism f from the carrier of a forest structure to
/// the base: u in a goes to the play (f(v) for v along the chain below u).
/// The result is a map from a's carrier into the unravelling's carrier.
inline std::vector<int> transpose(const ComonadSpec& spec, const std::vector<int>& f,
                                  const ForestStructure& a, const Structure& M) {
    spec.validate();
    require_wooded(a);
    Unravelling u = unravel(spec, M);
    if (!is_homomorphism(f, a.carrier, u.base)) throw error("transpose input is not a homomorphism");
    Flavor want = spec.kind == ComonadKind::EF      ? Flavor::E
                  : spec.kind == ComonadKind::Pebble ? Flavor::P
                                                     : Flavor::M;
    if (a.flavor != want) throw error("flavor mismatch");
    if (spec.kind == ComonadKind::Pebble && a.pebble_count != spec.k)
        throw error("pebble count mismatch");
    for (int v = 0; v < a.carrier.size; ++v)
        if (a.depth(v) > spec.effective_bound()) throw error("chain in a exceeds the comonad bound");
    std::vector<int> g(static_cast<std::size_t>(a.carrier.size));
    for (int v = 0; v < a.carrier.size; ++v) {
        std::vector<int> play, peb;
        for (int x : a.down_chain(v)) {
            play.push_back(f[static_cast<std::size_t>(x)]);
            if (spec.kind == ComonadKind::Pebble) peb.push_back(a.pebbling[static_cast<std::size_t>(x)]);
        }
        g[static_cast<std::size_t>(v)] = u.element_of(play, peb);
    }
    return g;
}

/// Inverse transpose: compose with the counit.
inline std::vector<int> transpose_inverse(const ComonadSpec& spec, const std::vector<int>& g,
                                          const ForestStructure& a, const Structure& M) {
    spec.validate();
    Unravelling u = unravel(spec, M);
    std::vector<int> f(static_cast<std::size_t>(a.carrier.size));
    for (int v = 0; v < a.carrier.size; ++v) {
        int node = g[static_cast<std::size_t>(v)];
        if (node < 0 || node >= static_cast<int>(u.plays.size())) throw error("node out of range");
        f[static_cast<std::size_t>(v)] = u.plays[static_cast<std::size_t>(node)].back();
    }
    return f;
}

}  // namespace bfg
