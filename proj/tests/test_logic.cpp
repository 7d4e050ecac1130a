#include <catch2/catch_amalgamated.hpp>

#include "bfgames/logic.hpp"
#include "helpers.hpp"

using namespace bfg;
using namespace testutil;

TEST_CASE("evaluate implements Tarskian satisfaction") {
    Structure one = binary_structure(1, {});
    Structure two = binary_structure(2, {});

    SECTION("empty conjunction is true, empty disjunction is false") {
        CHECK(evaluate_sentence(one, f_true()));
        CHECK_FALSE(evaluate_sentence(one, f_false()));
    }
    SECTION("two distinct elements") {
        FormulaPtr f = f_exists("x", f_exists("y", f_not(f_eq("x", "y"))));
        CHECK_FALSE(evaluate_sentence(one, f));
        CHECK(evaluate_sentence(two, f));
    }
    SECTION("transitivity holds in a closed order") {
        Structure lo = linear_order(3);
        FormulaPtr body = f_or({f_not(f_and({f_atom("<", {"x", "y"}), f_atom("<", {"y", "z"})})),
                                f_atom("<", {"x", "z"})});
        FormulaPtr trans = f_forall("x", f_forall("y", f_forall("z", body)));
        CHECK(evaluate_sentence(lo, trans));
        Structure succ = make_structure(make_signature({{"<", 2}}), 3,
                                        {{"<", {{0, 1}, {1, 2}}}});  // not transitively closed
        CHECK_FALSE(evaluate_sentence(succ, trans));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(evaluate_sentence(one, f_atom("R", {"x"})), error);       // arity
        CHECK_THROWS_AS(evaluate_sentence(one, f_atom("R", {"x", "y"})), error);  // unbound
        CHECK_THROWS_AS(evaluate_sentence(one, f_atom("Q", {"x", "y"})), error);  // unknown symbol
    }
}

TEST_CASE("quantifier_rank") {
    CHECK(quantifier_rank(f_atom("R", {"x", "y"})) == 0);
    CHECK(quantifier_rank(f_exists("x", f_exists("y", f_not(f_eq("x", "y"))))) == 2);
    FormulaPtr r1 = f_exists("x", f_atom("R", {"x", "x"}));
    FormulaPtr r3 = f_exists("x", f_exists("y", f_exists("z", f_atom("R", {"x", "z"}))));
    CHECK(quantifier_rank(f_and({r1, r3})) == 3);
}

TEST_CASE("simplify folds constants and deduplicates") {
    FormulaPtr phi = f_atom("R", {"x", "y"});
    CHECK(is_false(simplify(f_and({f_false(), phi}))));
    CHECK(formula_equal(simplify(f_and({phi})), phi));
    CHECK(formula_equal(simplify(f_not(f_not(phi))), phi));
    CHECK(formula_equal(simplify(f_and({phi, phi})), phi));
    CHECK(is_true(simplify(f_or({f_true(), phi}))));
    // flattening
    FormulaPtr nested = f_and({f_and({phi, f_true()}), f_atom("R", {"y", "x"})});
    CHECK(node_count(simplify(nested)) <= node_count(nested));
}

TEST_CASE("simplify preserves meaning on all small structures and assignments") {
    std::vector<FormulaPtr> samples = {
        f_and({f_and({f_atom("R", {"x", "y"}), f_true()}), f_not(f_not(f_eq("x", "y")))}),
        f_or({f_false(), f_exists("z", f_and({f_atom("R", {"x", "z"}), f_atom("R", {"z", "y"})}))}),
        f_forall("x", f_or({f_atom("R", {"x", "x"}), f_not(f_atom("R", {"x", "x"}))})),
        f_not(f_or({f_atom("R", {"x", "x"}), f_and({})})),
        f_exists("x", f_forall("y", f_or({f_eq("x", "y"), f_atom("R", {"x", "y"})}))),
    };
    for (const FormulaPtr& f : samples) {
        FormulaPtr s = simplify(f);
        CHECK(quantifier_rank(s) <= quantifier_rank(f));
        for (int n = 0; n <= 3; ++n) {
            for (const Structure& m : (n <= 2 ? all_binary_structures(n)
                                              : std::vector<Structure>{chain(3), binary_structure(3, {})})) {
                auto vars = free_variables(f);
                std::vector<std::string> vs(vars.begin(), vars.end());
                for (const auto& vals : all_maps(static_cast<int>(vs.size()), m.size)) {
                    Assignment v;
                    for (std::size_t i = 0; i < vs.size(); ++i) v[vs[i]] = vals[i];
                    if (!vars.empty() && m.size == 0) continue;
                    CHECK(evaluate(m, f, v) == evaluate(m, s, v));
                }
            }
        }
    }
}

TEST_CASE("s-expressions round-trip") {
    std::string text = "(exists x (and (R x y) (not (= x y))))";
    FormulaPtr f = parse_sexpr(text);
    CHECK(to_sexpr(f) == text);
    CHECK(to_sexpr(parse_sexpr(to_sexpr(f))) == to_sexpr(f));
    CHECK(to_sexpr(f_true()) == "true");
    CHECK(to_sexpr(f_false()) == "false");
    CHECK(formula_equal(parse_sexpr("true"), f_true()));
    CHECK(formula_equal(parse_sexpr("(and)"), f_true()));
    CHECK(formula_equal(parse_sexpr("(or)"), f_false()));
    CHECK_THROWS_AS(parse_sexpr("(and (R x)"), error);
    CHECK_THROWS_AS(parse_sexpr("(R x) junk"), error);

    // property: parse . print is the identity on generated formulas
    std::mt19937 rng(7);
    std::vector<FormulaPtr> pool = {f_atom("R", {"x", "y"}), f_eq("x", "y"), f_true(), f_false()};
    for (int i = 0; i < 200; ++i) {
        unsigned op = rng() % 5;
        FormulaPtr a = pool[rng() % pool.size()];
        FormulaPtr b = pool[rng() % pool.size()];
        FormulaPtr f2;
        switch (op) {
            case 0: f2 = f_not(a); break;
            case 1: f2 = f_and({a, b}); break;
            case 2: f2 = f_or({a, b}); break;
            case 3: f2 = f_exists("v" + std::to_string(i % 3), a); break;
            default: f2 = f_forall("v" + std::to_string(i % 3), a); break;
        }
        pool.push_back(f2);
        CHECK(formula_equal(parse_sexpr(to_sexpr(f2)), f2));
    }
}

TEST_CASE("positive existential formulas are preserved by homomorphisms") {
    // if h : M -> N and M |= phi(a) with phi built from atoms, and, or,
    // exists, then N |= phi(h a)
    std::vector<FormulaPtr> positives = {
        f_atom("R", {"x", "y"}),
        f_exists("z", f_and({f_atom("R", {"x", "z"}), f_atom("R", {"z", "y"})})),
        f_or({f_atom("R", {"x", "x"}), f_exists("z", f_atom("R", {"z", "y"}))}),
        f_exists("u", f_exists("z", f_and({f_atom("R", {"u", "z"}), f_atom("R", {"z", "u"})}))),
    };
    for (int n = 1; n <= 2; ++n)
        for (const Structure& M : all_binary_structures(n))
            for (int m = 1; m <= 3; ++m) {
                std::vector<Structure> targets =
                    m <= 2 ? all_binary_structures(m) : std::vector<Structure>{chain(3)};
                for (const Structure& N : targets)
                    for (const auto& h : all_homomorphisms(M, N))
                        for (const FormulaPtr& phi : positives)
                            for (int x = 0; x < M.size; ++x)
                                for (int y = 0; y < M.size; ++y) {
                                    Assignment v{{"x", x}, {"y", y}};
                                    if (!evaluate(M, phi, v)) continue;
                                    Assignment w{{"x", h[static_cast<std::size_t>(x)]},
                                                 {"y", h[static_cast<std::size_t>(y)]}};
                                    CHECK(evaluate(N, phi, w));
                                }
            }
}

TEST_CASE("rank_k_equivalent_oracle") {
    SECTION("a structure is equivalent to itself") {
        Structure m = chain(3);
        auto r = rank_k_equivalent_oracle(m, m, 3);
        CHECK(r.verdict == OracleResult::Verdict::Equivalent);
    }
    SECTION("one vs two elements, k = 2") {
        Structure one = binary_structure(1, {});
        Structure two = binary_structure(2, {});
        auto r = rank_k_equivalent_oracle(one, two, 2);
        REQUIRE(r.verdict == OracleResult::Verdict::Distinguished);
        CHECK(r.rank == 2);
        REQUIRE(r.sentence);
        CHECK(evaluate_sentence(one, r.sentence) != evaluate_sentence(two, r.sentence));
        CHECK(quantifier_rank(r.sentence) <= 2);
        // the canonical two-element sentence separates the same way
        FormulaPtr pair_exists = f_exists("x", f_exists("y", f_not(f_eq("x", "y"))));
        CHECK(evaluate_sentence(one, pair_exists) != evaluate_sentence(two, pair_exists));
    }
    SECTION("linear orders three vs four across ranks") {
        Structure a = linear_order(3), b = linear_order(4);
        CHECK(rank_k_equivalent_oracle(a, b, 2).verdict == OracleResult::Verdict::Equivalent);
        auto r = rank_k_equivalent_oracle(a, b, 3);
        REQUIRE(r.verdict == OracleResult::Verdict::Distinguished);
        CHECK(r.rank == 3);
        CHECK(evaluate_sentence(a, r.sentence));
        CHECK_FALSE(evaluate_sentence(b, r.sentence));
    }
    SECTION("soundness: any returned witness distinguishes") {
        std::mt19937 rng(11);
        auto classes = binary_classes(2);
        for (const Structure& M : classes)
            for (const Structure& N : classes)
                for (int k = 0; k <= 2; ++k) {
                    auto r = rank_k_equivalent_oracle(M, N, k);
                    if (r.verdict == OracleResult::Verdict::Distinguished) {
                        REQUIRE(r.sentence);
                        CHECK(evaluate_sentence(M, r.sentence) != evaluate_sentence(N, r.sentence));
                        CHECK(quantifier_rank(r.sentence) <= k);
                    }
                }
        (void)rng;
    }
    SECTION("a tiny budget is reported, not silently treated as equivalence") {
        Structure a = linear_order(3), b = linear_order(4);
        auto r = rank_k_equivalent_oracle(a, b, 3, 2);
        CHECK(r.verdict == OracleResult::Verdict::BudgetExhausted);
    }
}

TEST_CASE("k-variable oracle is best-effort but sound") {
    Structure one = binary_structure(1, {});
    Structure two = binary_structure(2, {});
    auto r = kvar_equivalent_oracle(one, two, 2, 2000);
    REQUIRE(r.verdict == OracleResult::Verdict::Distinguished);
    CHECK(evaluate_sentence(one, r.sentence) != evaluate_sentence(two, r.sentence));

    auto same = kvar_equivalent_oracle(one, one, 2, 300);
    CHECK(same.verdict != OracleResult::Verdict::Distinguished);
}
