#pragma once

// First-order formulas over a relational signature: evaluation, quantifier
// rank, simplification, an s-expression wire format, and two equivalence
// oracles that work by formula enumeration and evaluation only (no game
// machinery), so they can cross-check the game solver.

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "structures.hpp"

namespace bfg {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Atom, Equal, Not, And, Or, Exists, Forall };
    Kind kind;
    std::string rel;                 // Atom
    std::vector<std::string> args;   // Atom / Equal (two entries)
    std::string var;                 // Exists / Forall
    std::vector<FormulaPtr> subs;    // Not: 1, And/Or: n, quantifiers: 1
};

inline FormulaPtr f_atom(std::string rel, std::vector<std::string> args) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Atom;
    f->rel = std::move(rel);
    f->args = std::move(args);
    return f;
}

inline FormulaPtr f_eq(std::string a, std::string b) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Equal;
    f->args = {std::move(a), std::move(b)};
    return f;
}

inline FormulaPtr f_not(FormulaPtr sub) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Not;
    f->subs = {std::move(sub)};
    return f;
}

inline FormulaPtr f_and(std::vector<FormulaPtr> subs) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::And;
    f->subs = std::move(subs);
    return f;
}

inline FormulaPtr f_or(std::vector<FormulaPtr> subs) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Or;
    f->subs = std::move(subs);
    return f;
}

inline FormulaPtr f_exists(std::string var, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Exists;
    f->var = std::move(var);
    f->subs = {std::move(body)};
    return f;
}

inline FormulaPtr f_forall(std::string var, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Forall;
    f->var = std::move(var);
    f->subs = {std::move(body)};
    return f;
}

inline FormulaPtr f_true() { return f_and({}); }
inline FormulaPtr f_false() { return f_or({}); }

inline bool is_true(const FormulaPtr& f) { return f->kind == Formula::Kind::And && f->subs.empty(); }
inline bool is_false(const FormulaPtr& f) { return f->kind == Formula::Kind::Or && f->subs.empty(); }

using Assignment = std::map<std::string, int>;

inline void free_variables(const FormulaPtr& f, std::set<std::string>& out) {
    switch (f->kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Equal:
            for (const auto& v : f->args) out.insert(v);
            break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& s : f->subs) free_variables(s, out);
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::set<std::string> inner;
            free_variables(f->subs[0], inner);
            inner.erase(f->var);
            out.insert(inner.begin(), inner.end());
            break;
        }
    }
}

inline std::set<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> out;
    free_variables(f, out);
    return out;
}

/// Tarskian satisfaction. Empty conjunction is true, empty disjunction false.
inline bool evaluate(const Structure& M, const FormulaPtr& f, const Assignment& v) {
    switch (f->kind) {
        case Formula::Kind::Atom: {
            int rel = M.sig.index_of(f->rel);
            if (rel < 0) throw error("unknown relation symbol: " + f->rel);
            if (static_cast<int>(f->args.size()) != M.sig.relations[static_cast<std::size_t>(rel)].arity)
                throw error("arity mismatch for " + f->rel);
            Tuple t(f->args.size());
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                auto it = v.find(f->args[i]);
                if (it == v.end()) throw error("unbound variable: " + f->args[i]);
                t[i] = it->second;
            }
            return M.has_tuple(rel, t);
        }
        case Formula::Kind::Equal: {
            auto a = v.find(f->args[0]), b = v.find(f->args[1]);
            if (a == v.end()) throw error("unbound variable: " + f->args[0]);
            if (b == v.end()) throw error("unbound variable: " + f->args[1]);
            return a->second == b->second;
        }
        case Formula::Kind::Not:
            return !evaluate(M, f->subs[0], v);
        case Formula::Kind::And:
            for (const auto& s : f->subs)
                if (!evaluate(M, s, v)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& s : f->subs)
                if (evaluate(M, s, v)) return true;
            return false;
        case Formula::Kind::Exists: {
            Assignment w(v);
            for (int a = 0; a < M.size; ++a) {
                w[f->var] = a;
                if (evaluate(M, f->subs[0], w)) return true;
            }
            return false;
        }
        case Formula::Kind::Forall: {
            Assignment w(v);
            for (int a = 0; a < M.size; ++a) {
                w[f->var] = a;
                if (!evaluate(M, f->subs[0], w)) return false;
            }
            return true;
        }
    }
    throw error("corrupt formula");
}

inline bool evaluate_sentence(const Structure& M, const FormulaPtr& f) { return evaluate(M, f, {}); }

inline int quantifier_rank(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Equal:
            return 0;
        case Formula::Kind::Not:
            return quantifier_rank(f->subs[0]);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            int m = 0;
            for (const auto& s : f->subs) m = std::max(m, quantifier_rank(s));
            return m;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            return 1 + quantifier_rank(f->subs[0]);
    }
    throw error("corrupt formula");
}

inline int node_count(const FormulaPtr& f) {
    int n = 1;
    for (const auto& s : f->subs) n += node_count(s);
    return n;
}

// ---------------------------------------------------------------------------
// s-expression wire format, e.g. (exists x (and (R x y) (not (= x y))))
// ---------------------------------------------------------------------------

inline std::string to_sexpr(const FormulaPtr& f) {
    std::ostringstream os;
    switch (f->kind) {
        case Formula::Kind::Atom:
            os << '(' << f->rel;
            for (const auto& a : f->args) os << ' ' << a;
            os << ')';
            break;
        case Formula::Kind::Equal:
            os << "(= " << f->args[0] << ' ' << f->args[1] << ')';
            break;
        case Formula::Kind::Not:
            os << "(not " << to_sexpr(f->subs[0]) << ')';
            break;
        case Formula::Kind::And:
            if (f->subs.empty()) { os << "true"; break; }
            os << "(and";
            for (const auto& s : f->subs) os << ' ' << to_sexpr(s);
            os << ')';
            break;
        case Formula::Kind::Or:
            if (f->subs.empty()) { os << "false"; break; }
            os << "(or";
            for (const auto& s : f->subs) os << ' ' << to_sexpr(s);
            os << ')';
            break;
        case Formula::Kind::Exists:
            os << "(exists " << f->var << ' ' << to_sexpr(f->subs[0]) << ')';
            break;
        case Formula::Kind::Forall:
            os << "(forall " << f->var << ' ' << to_sexpr(f->subs[0]) << ')';
            break;
    }
    return os.str();
}

namespace detail {

struct SexprParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token() {
        skip();
        if (pos >= text.size()) throw error("unexpected end of formula text");
        if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        return text.substr(start, pos - start);
    }

    std::string peek() {
        std::size_t save = pos;
        std::string t = token();
        pos = save;
        return t;
    }

    FormulaPtr parse() {
        std::string t = token();
        if (t == "true") return f_true();
        if (t == "false") return f_false();
        if (t != "(") throw error("expected '(' in formula text");
        std::string head = token();
        if (head == "not") {
            FormulaPtr sub = parse();
            expect_close();
            return f_not(std::move(sub));
        }
        if (head == "and" || head == "or") {
            std::vector<FormulaPtr> subs;
            while (peek() != ")") subs.push_back(parse());
            expect_close();
            return head == "and" ? f_and(std::move(subs)) : f_or(std::move(subs));
        }
        if (head == "exists" || head == "forall") {
            std::string var = token();
            FormulaPtr body = parse();
            expect_close();
            return head == "exists" ? f_exists(var, std::move(body)) : f_forall(var, std::move(body));
        }
        if (head == "=") {
            std::string a = token(), b = token();
            expect_close();
            return f_eq(a, b);
        }
        std::vector<std::string> args;
        while (peek() != ")") args.push_back(token());
        expect_close();
        return f_atom(head, std::move(args));
    }

    void expect_close() {
        if (token() != ")") throw error("expected ')' in formula text");
    }
};

}  // namespace detail

inline FormulaPtr parse_sexpr(const std::string& text) {
    detail::SexprParser p{text};
    FormulaPtr f = p.parse();
    p.skip();
    if (p.pos != text.size()) throw error("trailing text after formula");
    return f;
}

/// Structural equality via the canonical print.
inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    return to_sexpr(a) == to_sexpr(b);
}

// ---------------------------------------------------------------------------
// Simplification: constant folding, flattening, deduplication. The result is
// logically equivalent and never has a larger quantifier rank.
// ---------------------------------------------------------------------------

inline FormulaPtr simplify(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Equal:
            return f;
        case Formula::Kind::Not: {
            FormulaPtr s = simplify(f->subs[0]);
            if (is_true(s)) return f_false();
            if (is_false(s)) return f_true();
            if (s->kind == Formula::Kind::Not) return s->subs[0];
            return f_not(s);
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool conj = f->kind == Formula::Kind::And;
            std::vector<FormulaPtr> out;
            std::set<std::string> seen;
            bool absorbed = false;
            auto push = [&](const FormulaPtr& s) {
                if (conj ? is_false(s) : is_true(s)) { absorbed = true; return; }
                if (conj ? is_true(s) : is_false(s)) return;  // unit
                std::string key = to_sexpr(s);
                if (seen.insert(key).second) out.push_back(s);
            };
            for (const auto& raw : f->subs) {
                FormulaPtr s = simplify(raw);
                if (s->kind == f->kind) {
                    for (const auto& inner : s->subs) push(inner);
                } else {
                    push(s);
                }
                if (absorbed) return conj ? f_false() : f_true();
            }
            if (out.size() == 1) return out[0];
            return conj ? f_and(std::move(out)) : f_or(std::move(out));
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            FormulaPtr s = simplify(f->subs[0]);
            if ((is_true(s) || is_false(s)) && f->kind == Formula::Kind::Forall) {
                // forall over a possibly empty universe is not constant-foldable
                // for false bodies, but a true body stays true
                if (is_true(s)) return f_true();
            }
            return f->kind == Formula::Kind::Exists ? f_exists(f->var, s) : f_forall(f->var, s);
        }
    }
    throw error("corrupt formula");
}

// ---------------------------------------------------------------------------
// Rank-k equivalence oracle.
//
// Enumerates, bottom-up by quantifier rank, a canonical negation-normal
// family of formulas with free variables x1..xd that is complete for
// distinguishing M and N at quantifier rank <= k: at each stratum the
// candidate formulas are deduplicated semantically over all assignments into
// M and N (two formulas with the same truth profile are interchangeable for
// distinguishing purposes, so one canonical representative is kept), and the
// quantifier step only needs the representatives because exists/forall
// distribute over the disjunctions a profile class stands for. The budget
// caps how many representatives any stratum may hold; exceeding it is
// reported, never treated as equivalence.
// ---------------------------------------------------------------------------

struct OracleResult {
    enum class Verdict { Equivalent, Distinguished, BudgetExhausted };
    Verdict verdict = Verdict::Equivalent;
    FormulaPtr sentence;  // set when Distinguished: true on M, false on N
    int rank = 0;         // quantifier rank of the distinguishing stratum
};

namespace detail {

struct OracleContext {
    const Structure& M;
    const Structure& N;
    int k;
    int budget;

    // coordinate space at depth d: (structure, assignment in that structure)
    struct Cell {
        std::vector<int> type;           // coordinate -> class id
        std::vector<FormulaPtr> rep;     // class id -> canonical representative
        int classes = 0;
    };

    std::vector<std::string> vars;

    OracleContext(const Structure& m, const Structure& n, int k_, int budget_)
        : M(m), N(n), k(k_), budget(budget_) {
        for (int i = 1; i <= k; ++i) vars.push_back("x" + std::to_string(i));
    }

    long coord_count(int d) const {
        long m = 1, n = 1;
        for (int i = 0; i < d; ++i) {
            m *= M.size;
            n *= N.size;
        }
        return m + n;
    }

    // decode coordinate index into (structure, tuple of elements)
    const Structure& coord_structure(int d, long c) const {
        long m = 1;
        for (int i = 0; i < d; ++i) m *= M.size;
        return c < m ? M : N;
    }

    std::vector<int> coord_tuple(int d, long c) const {
        long m = 1;
        for (int i = 0; i < d; ++i) m *= M.size;
        const Structure& S = c < m ? M : N;
        long x = c < m ? c : c - m;
        std::vector<int> t(static_cast<std::size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = static_cast<int>(x % S.size);
            x /= S.size;
        }
        return t;
    }

    // rank-0 classes at depth d: atomic types
    Cell base_cell(int d) const {
        Cell cell;
        long n = coord_count(d);
        std::map<std::vector<char>, int> ids;
        std::vector<std::vector<char>> keys(static_cast<std::size_t>(n));

        // atom slots: every relation over every index tuple, then equalities
        struct Slot {
            bool equality;
            int rel;
            std::vector<int> idx;  // 0-based variable indices
        };
        std::vector<Slot> slots;
        for (std::size_t r = 0; r < M.sig.relations.size(); ++r) {
            int ar = M.sig.relations[r].arity;
            std::vector<int> idx(static_cast<std::size_t>(ar), 0);
            if (d == 0 && ar > 0) continue;
            while (true) {
                slots.push_back({false, static_cast<int>(r), idx});
                int j = ar - 1;
                while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == d) {
                    idx[static_cast<std::size_t>(j)] = 0;
                    --j;
                }
                if (j < 0) break;
                ++idx[static_cast<std::size_t>(j)];
            }
        }
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) slots.push_back({true, 0, {i, j}});

        for (long c = 0; c < n; ++c) {
            const Structure& S = coord_structure(d, c);
            std::vector<int> t = coord_tuple(d, c);
            std::vector<char> key;
            key.reserve(slots.size());
            for (const Slot& s : slots) {
                bool v;
                if (s.equality) {
                    v = t[static_cast<std::size_t>(s.idx[0])] == t[static_cast<std::size_t>(s.idx[1])];
                } else {
                    Tuple u(s.idx.size());
                    for (std::size_t i = 0; i < s.idx.size(); ++i)
                        u[i] = t[static_cast<std::size_t>(s.idx[i])];
                    v = S.has_tuple(s.rel, u);
                }
                key.push_back(v ? 1 : 0);
            }
            keys[static_cast<std::size_t>(c)] = std::move(key);
        }
        cell.type.resize(static_cast<std::size_t>(n));
        for (long c = 0; c < n; ++c) {
            auto [it, fresh] = ids.insert({keys[static_cast<std::size_t>(c)], cell.classes});
            if (fresh) {
                ++cell.classes;
                // canonical literal conjunction for this atomic type
                std::vector<FormulaPtr> lits;
                for (std::size_t s = 0; s < slots.size(); ++s) {
                    FormulaPtr at;
                    if (slots[s].equality) {
                        at = f_eq(vars[static_cast<std::size_t>(slots[s].idx[0])],
                                  vars[static_cast<std::size_t>(slots[s].idx[1])]);
                    } else {
                        std::vector<std::string> args;
                        for (int i : slots[s].idx) args.push_back(vars[static_cast<std::size_t>(i)]);
                        at = f_atom(M.sig.relations[static_cast<std::size_t>(slots[s].rel)].name, args);
                    }
                    lits.push_back(keys[static_cast<std::size_t>(c)][s] ? at : f_not(at));
                }
                cell.rep.push_back(f_and(std::move(lits)));
            }
            cell.type[static_cast<std::size_t>(c)] = it->second;
        }
        return cell;
    }

    // refine depth-d classes by the set of depth-(d+1) classes reachable by
    // extending the assignment with one more element
    bool refine(int d, const Cell& below, Cell& cell) const {
        long n = coord_count(d);
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<int> newtype(static_cast<std::size_t>(n));
        std::vector<FormulaPtr> newrep;
        int classes = 0;
        for (long c = 0; c < n; ++c) {
            const Structure& S = coord_structure(d, c);
            long m = 1;
            for (int i = 0; i < d; ++i) m *= M.size;
            bool in_m = c < m;
            long base = in_m ? c : c - m;
            std::set<int> profile;
            long below_m = 1;
            for (int i = 0; i < d + 1; ++i) below_m *= M.size;
            for (int a = 0; a < S.size; ++a) {
                long cc = base * S.size + a + (in_m ? 0 : below_m);
                profile.insert(below.type[static_cast<std::size_t>(cc)]);
            }
            std::vector<int> prof(profile.begin(), profile.end());
            auto [it, fresh] = ids.insert({{cell.type[static_cast<std::size_t>(c)], prof}, classes});
            if (fresh) {
                ++classes;
                std::vector<FormulaPtr> parts;
                parts.push_back(cell.rep[static_cast<std::size_t>(cell.type[static_cast<std::size_t>(c)])]);
                std::vector<FormulaPtr> some;
                for (int t : prof) {
                    parts.push_back(f_exists(vars[static_cast<std::size_t>(d)],
                                             below.rep[static_cast<std::size_t>(t)]));
                    some.push_back(below.rep[static_cast<std::size_t>(t)]);
                }
                parts.push_back(f_forall(vars[static_cast<std::size_t>(d)], f_or(std::move(some))));
                newrep.push_back(f_and(std::move(parts)));
            }
            newtype[static_cast<std::size_t>(c)] = it->second;
        }
        cell.type = std::move(newtype);
        cell.rep = std::move(newrep);
        cell.classes = classes;
        return classes <= budget;
    }
};

/// Keep the smallest distinguishing sub-sentence, descending into conjuncts.
inline FormulaPtr minimize_witness(const Structure& M, const Structure& N, FormulaPtr f) {
    if (evaluate_sentence(M, f) == evaluate_sentence(N, f))
        throw error("internal: witness candidate does not distinguish");
    for (;;) {
        if (f->kind != Formula::Kind::And && f->kind != Formula::Kind::Or) break;
        FormulaPtr next;
        for (const auto& s : f->subs) {
            if (evaluate_sentence(M, s) != evaluate_sentence(N, s)) {
                next = s;
                break;
            }
        }
        if (!next) break;
        f = next;
    }
    if (evaluate_sentence(M, f)) return f;
    return f_not(f);
}

}  // namespace detail

inline OracleResult rank_k_equivalent_oracle(const Structure& M, const Structure& N, int k,
                                             int budget = 4096) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    OracleResult res;
    detail::OracleContext ctx(M, N, k, budget);

    // cells[d][r] = rank-r classes at depth d, needed for d + r <= k
    std::vector<std::vector<detail::OracleContext::Cell>> cells(static_cast<std::size_t>(k) + 1);
    for (int d = 0; d <= k; ++d) {
        cells[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(k - d) + 1);
        cells[static_cast<std::size_t>(d)][0] = ctx.base_cell(d);
        if (cells[static_cast<std::size_t>(d)][0].classes > budget) {
            res.verdict = OracleResult::Verdict::BudgetExhausted;
            return res;
        }
    }

    auto check_top = [&](int r) -> bool {
        const auto& top = cells[0][static_cast<std::size_t>(r)];
        // depth 0 has exactly two coordinates: the empty assignments of M and N
        return top.type[0] != top.type[1];
    };

    for (int r = 0; r <= k; ++r) {
        if (r > 0) {
            for (int d = 0; d <= k - r; ++d) {
                auto& cell = cells[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)];
                cell = cells[static_cast<std::size_t>(d)][static_cast<std::size_t>(r) - 1];
                if (!ctx.refine(d, cells[static_cast<std::size_t>(d) + 1][static_cast<std::size_t>(r) - 1],
                                cell)) {
                    res.verdict = OracleResult::Verdict::BudgetExhausted;
                    return res;
                }
            }
        }
        if (check_top(r)) {
            const auto& top = cells[0][static_cast<std::size_t>(r)];
            res.verdict = OracleResult::Verdict::Distinguished;
            res.rank = r;
            FormulaPtr full = top.rep[static_cast<std::size_t>(top.type[0])];
            res.sentence = simplify(detail::minimize_witness(M, N, full));
            return res;
        }
    }
    res.verdict = OracleResult::Verdict::Equivalent;
    return res;
}

// ---------------------------------------------------------------------------
// Best-effort k-variable oracle: plain syntactic enumeration of canonical
// negation-normal formulas over a fixed set of variables, smallest first.
// Practical only with severe budgets.
// ---------------------------------------------------------------------------

inline OracleResult kvar_equivalent_oracle(const Structure& M, const Structure& N, int nvars,
                                           int budget) {
    if (!(M.sig == N.sig)) throw error("signature mismatch");
    std::vector<std::string> vars;
    for (int i = 1; i <= nvars; ++i) vars.push_back("x" + std::to_string(i));

    std::vector<FormulaPtr> pool;
    std::set<std::string> seen;
    auto add = [&](const FormulaPtr& f) {
        if (static_cast<int>(pool.size()) >= budget) return false;
        FormulaPtr s = simplify(f);
        if (seen.insert(to_sexpr(s)).second) pool.push_back(s);
        return true;
    };

    // literals
    for (std::size_t r = 0; r < M.sig.relations.size(); ++r) {
        int ar = M.sig.relations[r].arity;
        std::vector<int> idx(static_cast<std::size_t>(ar), 0);
        while (true) {
            std::vector<std::string> args;
            for (int i : idx) args.push_back(vars[static_cast<std::size_t>(i)]);
            FormulaPtr at = f_atom(M.sig.relations[r].name, args);
            add(at);
            add(f_not(at));
            int j = ar - 1;
            while (j >= 0 && idx[static_cast<std::size_t>(j)] + 1 == nvars) {
                idx[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++idx[static_cast<std::size_t>(j)];
        }
    }
    for (int i = 0; i < nvars; ++i)
        for (int j = i + 1; j < nvars; ++j) {
            add(f_eq(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]));
            add(f_not(f_eq(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)])));
        }

    OracleResult res;
    std::size_t scanned = 0;
    std::size_t grown_until = 0;
    while (true) {
        // test any new sentences
        for (; scanned < pool.size(); ++scanned) {
            const FormulaPtr& f = pool[scanned];
            if (!free_variables(f).empty()) continue;
            if (evaluate_sentence(M, f) != evaluate_sentence(N, f)) {
                res.verdict = OracleResult::Verdict::Distinguished;
                res.sentence = evaluate_sentence(M, f) ? f : f_not(f);
                res.rank = quantifier_rank(res.sentence);
                return res;
            }
        }
        if (static_cast<int>(pool.size()) >= budget || grown_until == pool.size()) break;
        // grow: quantify everything new first, then pairwise combinations;
        // quantifier nesting is what distinguishing sentences usually need
        std::size_t upto = pool.size();
        for (std::size_t i = grown_until; i < upto && static_cast<int>(pool.size()) < budget; ++i)
            for (const auto& v : vars) {
                add(f_exists(v, pool[i]));
                add(f_forall(v, pool[i]));
            }
        for (std::size_t i = grown_until; i < upto && static_cast<int>(pool.size()) < budget; ++i)
            for (std::size_t j = 0; j <= i && static_cast<int>(pool.size()) < budget; ++j) {
                add(f_and({pool[i], pool[j]}));
                add(f_or({pool[i], pool[j]}));
            }
        grown_until = upto;
    }
    res.verdict = static_cast<int>(pool.size()) >= budget ? OracleResult::Verdict::BudgetExhausted
                                                          : OracleResult::Verdict::Equivalent;
    return res;
}

}  // namespace bfg
