#pragma once

// Rank-defining formula synthesis. Over a finite relational signature the
// positions of rank >= r in the game on unravellings are definable by
// finite first-order formulas built by recursion on r: rank 0 fixes the
// isomorphism type of the position's path domain; the step conjoins, per
// Spoiler move on the left, an existential clause asserting a matching
// extension, and per move kind on the right, a universal clause sending
// every extension back to some left successor. Plays that revisit elements
// are tracked by the I relation of the identity-expanded signature, so the
// extension certificates are exact relational atom patterns and carry no
// equality literals.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "comonads.hpp"
#include "forest.hpp"
#include "games.hpp"
#include "logic.hpp"
#include "structures.hpp"

namespace bfg {

// ---------------------------------------------------------------------------
// Tuple diagrams and the embedding formula: the conjunction of the negated
// atoms that fail in the presented structure. A tuple satisfying both the
// diagram and this formula induces an embedding of the presented structure.
// ---------------------------------------------------------------------------

struct TupleDiagram {
    Signature sig;
    std::vector<std::string> variables;
    std::vector<std::pair<int, Tuple>> atoms;       // (relation, variable-index tuple)
    std::vector<std::pair<int, int>> equalities;    // variable-index pairs
    Structure presented;                            // variable classes with the projected atoms
    std::vector<int> var_class;                     // variable index -> presented element
};

inline TupleDiagram make_tuple_diagram(Signature sig, std::vector<std::string> variables,
                                       std::vector<std::pair<int, Tuple>> atoms,
                                       std::vector<std::pair<int, int>> equalities = {}) {
    sig.normalize();
    sig.validate();
    int n = static_cast<int>(variables.size());
    for (const auto& [r, t] : atoms) {
        if (r < 0 || r >= static_cast<int>(sig.relations.size())) throw error("atom relation out of range");
        if (static_cast<int>(t.size()) != sig.relations[static_cast<std::size_t>(r)].arity)
            throw error("atom arity mismatch");
        for (int i : t)
            if (i < 0 || i >= n) throw error("atom variable index out of range");
    }
    std::vector<int> repr(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) repr[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (repr[static_cast<std::size_t>(x)] != x) x = repr[static_cast<std::size_t>(x)] = repr[static_cast<std::size_t>(repr[static_cast<std::size_t>(x)])];
        return x;
    };
    for (auto [i, j] : equalities) {
        if (i < 0 || i >= n || j < 0 || j >= n) throw error("equality variable index out of range");
        int a = find(i), b = find(j);
        if (a != b) repr[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

    TupleDiagram d;
    d.sig = sig;
    d.variables = std::move(variables);
    d.atoms = std::move(atoms);
    std::sort(d.atoms.begin(), d.atoms.end());
    d.atoms.erase(std::unique(d.atoms.begin(), d.atoms.end()), d.atoms.end());
    d.equalities = std::move(equalities);

    d.var_class.resize(static_cast<std::size_t>(n));
    int classes = 0;
    std::map<int, int> renumber;
    for (int i = 0; i < n; ++i) {
        int root = find(i);
        auto [it, fresh] = renumber.insert({root, classes});
        if (fresh) ++classes;
        d.var_class[static_cast<std::size_t>(i)] = it->second;
    }
    d.presented.sig = sig;
    d.presented.size = classes;
    d.presented.tables.resize(sig.relations.size());
    for (const auto& [r, t] : d.atoms) {
        Tuple img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = d.var_class[static_cast<std::size_t>(t[i])];
        d.presented.tables[static_cast<std::size_t>(r)].insert(img);
    }
    d.presented.validate();
    return d;
}

/// Whether the assignment satisfies the diagram, i.e. induces a
/// homomorphism out of the presented structure.
inline bool diagram_holds(const TupleDiagram& d, const Structure& M, const Tuple& values) {
    if (values.size() != d.variables.size()) throw error("assignment length mismatch");
    for (auto [i, j] : d.equalities)
        if (values[static_cast<std::size_t>(i)] != values[static_cast<std::size_t>(j)]) return false;
    for (const auto& [r, t] : d.atoms) {
        Tuple img(t.size());
        for (std::size_t x = 0; x < t.size(); ++x) img[x] = values[static_cast<std::size_t>(t[x])];
        if (!M.has_tuple(r, img)) return false;
    }
    return true;
}

/// The induced homomorphism from the presented structure.
inline Homomorphism diagram_homomorphism(const TupleDiagram& d, const Structure& M, const Tuple& values) {
    if (!diagram_holds(d, M, values)) throw error("assignment does not satisfy the diagram");
    std::vector<int> h(static_cast<std::size_t>(d.presented.size), -1);
    for (std::size_t i = 0; i < d.var_class.size(); ++i)
        h[static_cast<std::size_t>(d.var_class[i])] = values[i];
    return Homomorphism{d.presented, M, std::move(h)};
}

/// Conjunction of the negations of every atomic formula (equalities
/// included) that fails in the presented structure at the generators.
inline FormulaPtr emb_formula(const TupleDiagram& d) {
    std::vector<FormulaPtr> conj;
    int n = static_cast<int>(d.variables.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d.var_class[static_cast<std::size_t>(i)] != d.var_class[static_cast<std::size_t>(j)])
                conj.push_back(f_not(f_eq(d.variables[static_cast<std::size_t>(i)],
                                          d.variables[static_cast<std::size_t>(j)])));
    for (std::size_t r = 0; r < d.sig.relations.size(); ++r) {
        int ar = d.sig.relations[r].arity;
        std::vector<int> idx(static_cast<std::size_t>(ar), 0);
        if (n == 0) break;
        while (true) {
            Tuple img(static_cast<std::size_t>(ar));
            std::vector<std::string> args;
            for (int i = 0; i < ar; ++i) {
                img[static_cast<std::size_t>(i)] = d.var_class[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
                args.push_back(d.variables[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
            }
            if (!d.presented.has_tuple(static_cast<int>(r), img))
                conj.push_back(f_not(f_atom(d.sig.relations[r].name, args)));
            int j = ar - 1;
            while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == n) {
                idx[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++idx[static_cast<std::size_t>(j)];
        }
    }
    return f_and(std::move(conj));
}

// ---------------------------------------------------------------------------
// Rank-defining formulas
// ---------------------------------------------------------------------------

struct HintikkaRequest {
    ComonadSpec spec;
    Structure M;
    PathNode node;     // position's left component, in the unravelling of M
    ChainShape shape;  // target path shape Q for the right component
    int rank = 0;
};

namespace detail {

/// How a (relation, chain-index-tuple) slot behaves on plays of the flavor.
enum class SlotKind {
    Transparent,  // present in the node's shape iff the base atom holds
    Forced,       // always present (modal covering steps)
    Masked,       // never present, whatever the base says
};

struct ShapeLogic {
    const Signature* sig = nullptr;  // signature of the unravelling's carrier
    Flavor flavor = Flavor::E;
    std::optional<int> transition;   // relation index, flavor M

    SlotKind classify(const ChainShape& q, int rel, const Tuple& t) const {
        if (flavor == Flavor::P) {
            int mx = 0;
            for (int i : t) mx = std::max(mx, i);
            for (int i : t) {
                // the pebble placed at step i must survive to step mx
                for (int j = i + 1; j <= mx; ++j)
                    if (q.pebbling[static_cast<std::size_t>(j)] == q.pebbling[static_cast<std::size_t>(i)])
                        return SlotKind::Masked;
            }
            return SlotKind::Transparent;
        }
        if (flavor == Flavor::M && transition && rel == *transition) {
            if (t.size() == 2 && t[1] == t[0] + 1) return SlotKind::Forced;
            return SlotKind::Masked;
        }
        return SlotKind::Transparent;
    }

    /// Every slot over chain indices 0..len-1; new_only keeps those that
    /// mention the top index len-1.
    std::vector<std::pair<int, Tuple>> slots(int len, bool new_only) const {
        std::vector<std::pair<int, Tuple>> out;
        for (std::size_t r = 0; r < sig->relations.size(); ++r) {
            int ar = sig->relations[r].arity;
            Tuple idx(static_cast<std::size_t>(ar), 0);
            if (len == 0) continue;
            while (true) {
                bool top = false;
                for (int i : idx) top = top || i == len - 1;
                if (!new_only || top) out.push_back({static_cast<int>(r), idx});
                int j = ar - 1;
                while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == len) {
                    idx[static_cast<std::size_t>(j)] = 0;
                    --j;
                }
                if (j < 0) break;
                ++idx[static_cast<std::size_t>(j)];
            }
        }
        return out;
    }

    bool shape_has(const ChainShape& q, int rel, const Tuple& t) const {
        return std::binary_search(q.atoms.begin(), q.atoms.end(), std::make_pair(rel, t));
    }

    /// Exact atom pattern of a shape as a formula over z1..zlen: positive
    /// atoms for present transparent and forced slots, negated atoms for
    /// absent transparent slots, nothing for masked slots.
    FormulaPtr pattern(const ChainShape& q, const std::vector<std::string>& vars, bool new_only) const {
        std::vector<FormulaPtr> conj;
        for (const auto& [rel, t] : slots(q.length, new_only)) {
            SlotKind kind = classify(q, rel, t);
            if (kind == SlotKind::Masked) continue;
            std::vector<std::string> args;
            for (int i : t) args.push_back(vars[static_cast<std::size_t>(i)]);
            FormulaPtr atom = f_atom(sig->relations[static_cast<std::size_t>(rel)].name, args);
            bool present = shape_has(q, rel, t);
            if (kind == SlotKind::Forced || present) conj.push_back(atom);
            else conj.push_back(f_not(atom));
        }
        return f_and(std::move(conj));
    }

    /// A shape is admissible when its atoms sit on unmasked slots and every
    /// forced slot is filled; pebbling values must lie in range.
    bool admissible(const ChainShape& q, int pebbles) const {
        if (flavor == Flavor::P) {
            if (static_cast<int>(q.pebbling.size()) != q.length) return false;
            for (int p : q.pebbling)
                if (p < 1 || p > pebbles) return false;
        } else if (!q.pebbling.empty()) {
            return false;
        }
        if ((flavor == Flavor::M) != q.pointed) return false;
        for (const auto& [rel, t] : q.atoms)
            if (classify(q, rel, t) == SlotKind::Masked) return false;
        for (const auto& [rel, t] : slots(q.length, false))
            if (classify(q, rel, t) == SlotKind::Forced && !shape_has(q, rel, t)) return false;
        return true;
    }
};

struct HintikkaSynth {
    ComonadSpec spec;
    Unravelling u;
    PathTree tree;
    ShapeLogic logic;
    std::map<std::pair<int, int>, FormulaPtr> memo;  // (node, rank) -> theta
    std::vector<std::string> vars;                   // z1, z2, ...

    explicit HintikkaSynth(const ComonadSpec& s, const Structure& M)
        : spec(s), u(unravel(s, M)), tree(path_nodes(u.forest)) {
        logic.sig = &u.forest.carrier.sig;
        logic.flavor = u.forest.flavor;
        if (u.forest.carrier.sig.transition)
            logic.transition = u.forest.carrier.sig.index_of(*u.forest.carrier.sig.transition);
        int top = spec.effective_bound();
        for (int i = 1; i <= top + 1; ++i) vars.push_back("z" + std::to_string(i));
    }

    HintikkaSynth(const HintikkaSynth&) = delete;
    HintikkaSynth& operator=(const HintikkaSynth&) = delete;

    /// Theta at a node against its own shape; free variables z1..z_depth.
    FormulaPtr theta(int node, int rank) {
        auto it = memo.find({node, rank});
        if (it != memo.end()) return it->second;
        FormulaPtr result;
        int d = tree.depth[static_cast<std::size_t>(node)];
        if (rank == 0 || d == spec.effective_bound()) {
            // no moves remain on either side once the play bound is reached
            result = f_true();
        } else {
            std::vector<FormulaPtr> parts;
            const auto& kids = tree.children[static_cast<std::size_t>(node)];
            // forth: every Spoiler step on the left has a matching extension
            for (int m2 : kids) {
                FormulaPtr inner = f_and({logic.pattern(tree.shape[static_cast<std::size_t>(m2)], vars, true),
                                          theta(m2, rank - 1)});
                parts.push_back(f_exists(vars[static_cast<std::size_t>(d)], inner));
            }
            // back: every extension on the right lands on some left successor
            struct MoveKind {
                std::optional<int> pebble;  // pebble kind
                FormulaPtr precondition;    // modal kind
            };
            std::vector<MoveKind> kinds;
            if (u.forest.flavor == Flavor::P) {
                for (int p = 1; p <= u.forest.pebble_count; ++p) kinds.push_back({p, nullptr});
            } else if (u.forest.flavor == Flavor::M) {
                FormulaPtr pre = f_atom(*u.forest.carrier.sig.transition,
                                        {vars[static_cast<std::size_t>(d) - 1], vars[static_cast<std::size_t>(d)]});
                kinds.push_back({std::nullopt, pre});
            } else {
                kinds.push_back({std::nullopt, nullptr});
            }
            for (const MoveKind& kind : kinds) {
                std::map<ChainShape, std::vector<int>> groups;
                for (int m2 : kids) {
                    const ChainShape& q = tree.shape[static_cast<std::size_t>(m2)];
                    if (kind.pebble && q.pebbling.back() != *kind.pebble) continue;
                    groups[q].push_back(m2);
                }
                std::vector<FormulaPtr> options;
                for (const auto& [q, members] : groups) {
                    std::vector<FormulaPtr> thetas;
                    for (int m2 : members) thetas.push_back(theta(m2, rank - 1));
                    options.push_back(f_and({logic.pattern(q, vars, true), f_or(std::move(thetas))}));
                }
                FormulaPtr body = f_or(std::move(options));
                if (kind.precondition) body = f_or({f_not(kind.precondition), body});
                parts.push_back(f_forall(vars[static_cast<std::size_t>(d)], body));
            }
            result = f_and(std::move(parts));
        }
        result = simplify(result);
        memo[{node, rank}] = result;
        return result;
    }
};

}  // namespace detail

/// Reusable synthesis handle: unravels M once and memoizes theta between
/// calls, which matters when formulas for many positions and ranks of the
/// same structure are needed.
class HintikkaSynthesizer {
public:
    HintikkaSynthesizer(const ComonadSpec& spec, const Structure& M)
        : synth_(std::make_unique<detail::HintikkaSynth>(spec, M)) {}

    const PathTree& tree() const { return synth_->tree; }
    const Unravelling& unravelling() const { return synth_->u; }

    /// Theta of a node against its own path shape.
    FormulaPtr theta_at(const PathNode& node, int rank) {
        if (rank < 0) throw error("rank must be non-negative");
        return synth_->theta(synth_->tree.node_of(node), rank);
    }

    /// Theta of a node against an arbitrary admissible target shape.
    FormulaPtr theta_against(const PathNode& node, const ChainShape& shape, int rank) {
        if (rank < 0) throw error("rank must be non-negative");
        int pebbles = synth_->spec.kind == ComonadKind::Pebble ? synth_->spec.k : 0;
        if (!synth_->logic.admissible(shape, pebbles)) throw error("shape is not a path of this flavor");
        if (shape.length > synth_->spec.effective_bound()) throw error("shape exceeds the comonad bound");
        int n = synth_->tree.node_of(node);
        if (!(synth_->tree.shape[static_cast<std::size_t>(n)] == shape)) return f_false();
        return synth_->theta(n, rank);
    }

    FormulaPtr root_sentence(int rank) {
        if (rank < 0) throw error("rank must be non-negative");
        FormulaPtr theta = synth_->theta(0, rank);
        if (synth_->spec.kind == ComonadKind::Modal) {
            FormulaPtr profile = synth_->logic.pattern(synth_->tree.shape[0], synth_->vars, false);
            return simplify(f_and({profile, theta}));
        }
        return theta;
    }

private:
    std::unique_ptr<detail::HintikkaSynth> synth_;
};

/// Theta for a position component m and a target path shape Q: at rank 0 it
/// is the isomorphism check of the path domains; at rank r+1 it conjoins the
/// forth and back clauses. Evaluating it on N at a tuple inducing a path
/// embedding of shape Q into the unravelling of N decides rank >= r of the
/// corresponding game position.
inline FormulaPtr hintikka_theta(const HintikkaRequest& req) {
    req.spec.validate();
    HintikkaSynthesizer synth(req.spec, req.M);
    return synth.theta_against(req.node, req.shape, req.rank);
}

/// The root sentence: satisfied by N exactly when Duplicator survives r
/// rounds from the root position of the game on the unravellings. For the
/// modal comonad the result has one free variable z1 denoting the point.
inline FormulaPtr root_hintikka_sentence(const ComonadSpec& spec, const Structure& M, int rank) {
    spec.validate();
    HintikkaSynthesizer synth(spec, M);
    return synth.root_sentence(rank);
}

/// Evaluate a root sentence on N, expanding the identity relation when the
/// comonad asks for it and binding z1 to the point in the modal case.
inline bool satisfies_root_sentence(const ComonadSpec& spec, const Structure& N, const FormulaPtr& f) {
    Structure target = spec.with_identity ? expand_identity(N) : N;
    Assignment v;
    if (spec.kind == ComonadKind::Modal) {
        if (!target.point) throw error("modal evaluation needs a pointed structure");
        v["z1"] = *target.point;
    }
    return evaluate(target, f, v);
}

struct Distinguisher {
    FormulaPtr sentence;  // true on M, false on N
    int rank = 0;         // least r such that the root position is not of rank >= r
};

/// A separating sentence for non-equivalent structures, or nothing.
inline std::optional<Distinguisher> distinguishing_sentence(const ComonadSpec& spec, const Structure& M,
                                                            const Structure& N) {
    Unravelling um = unravel(spec, M), un = unravel(spec, N);
    GameAnalysis g = analyze_game(um.forest, un.forest);
    const Rank& root = g.at(g.root_position());
    if (root.top) return std::nullopt;
    Distinguisher d;
    d.rank = root.winning ? root.value + 1 : 0;
    d.sentence = root_hintikka_sentence(spec, M, d.rank);
    return d;
}

}  // namespace bfg
