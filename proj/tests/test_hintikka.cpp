#include <catch2/catch_amalgamated.hpp>

#include "bfgames/hintikka.hpp"
#include "helpers.hpp"

using namespace bfg;
using namespace testutil;

namespace {

ComonadSpec efi(int k) { return ComonadSpec{ComonadKind::EF, k, true, std::nullopt}; }

/// Assignment binding z1..zd to the play behind a node.
Assignment play_assignment(const Unravelling& u, const PathTree& t, int node) {
    Assignment v;
    if (t.element[static_cast<std::size_t>(node)]) {
        const auto& play = u.plays[static_cast<std::size_t>(*t.element[static_cast<std::size_t>(node)])];
        for (std::size_t i = 0; i < play.size(); ++i) v["z" + std::to_string(i + 1)] = play[i];
    }
    return v;
}

/// Exactness of theta on a pair: every position, every rank up to rmax.
void check_exactness(const ComonadSpec& spec, const Structure& M, const Structure& N, int rmax) {
    HintikkaSynthesizer synth(spec, M);
    Unravelling un = unravel(spec, N);
    GameAnalysis g = analyze_game(synth.unravelling().forest, un.forest);
    const PathTree& tm = g.ta;
    const PathTree& tn = g.tb;
    for (int n = 0; n < tn.size(); ++n) {
        Assignment v = play_assignment(un, tn, n);
        for (int m = 0; m < tm.size(); ++m) {
            const Rank& rk = g.table.at(m, n);
            for (int r = 0; r <= rmax; ++r) {
                bool expect = rk.top || (rk.winning && rk.value >= r);
                FormulaPtr theta =
                    synth.theta_against(tm.path_node(m), tn.shape[static_cast<std::size_t>(n)], r);
                bool got = evaluate(un.base, theta, v);
                REQUIRE(got == expect);
            }
        }
    }
}

}  // namespace

TEST_CASE("tuple diagrams present structures on variable classes") {
    Signature sig = one_binary();
    SECTION("distinct variables, one atom") {
        TupleDiagram d = make_tuple_diagram(sig, {"x", "y"}, {{0, {0, 1}}});
        CHECK(d.presented.size == 2);
        CHECK(d.presented.table("R").count({0, 1}) == 1);
    }
    SECTION("equalities merge variable classes and transport atoms") {
        TupleDiagram d = make_tuple_diagram(sig, {"x", "y"}, {{0, {0, 1}}}, {{0, 1}});
        CHECK(d.presented.size == 1);
        CHECK(d.presented.table("R").count({0, 0}) == 1);
    }
}

TEST_CASE("emb_formula lists the negated failing atoms") {
    SECTION("all atoms present leaves the injectivity literals only") {
        Signature sig = make_signature({{"U", 1}});
        TupleDiagram d = make_tuple_diagram(sig, {"x"}, {{0, {0}}});
        FormulaPtr f = emb_formula(d);
        CHECK(is_true(f));  // one variable, its atom present: nothing to negate
    }
    SECTION("a single missing unary atom is negated") {
        Signature sig = make_signature({{"U", 1}});
        TupleDiagram d = make_tuple_diagram(sig, {"x"}, {});
        CHECK(to_sexpr(simplify(emb_formula(d))) == "(not (U x))");
    }
    SECTION("the two-variable diagram over the identity-expanded signature") {
        Signature sig = make_signature({{"<", 2}, {"I", 2}}, "I");
        TupleDiagram d = make_tuple_diagram(sig, {"x", "y"},
                                            {{sig.index_of("I"), {0, 0}},
                                             {sig.index_of("I"), {1, 1}},
                                             {sig.index_of("<"), {0, 1}}});
        FormulaPtr f = emb_formula(d);
        // expected negations: <(y,x), I(x,y), I(y,x), <(x,x), <(y,y); the
        // inequality literal also appears since the classes are distinct
        std::string text = to_sexpr(f);
        for (const std::string& part :
             {"(not (< y x))", "(not (I x y))", "(not (I y x))", "(not (< x x))", "(not (< y y))",
              "(not (= x y))"}) {
            INFO(text);
            CHECK(text.find(part) != std::string::npos);
        }
    }
    SECTION("verdict matches is_embedding for diagram-induced homomorphisms") {
        // exhaustively: small diagrams against the corpus up to size 4
        Signature sig = one_binary();
        std::vector<TupleDiagram> diagrams;
        for (int atoms = 0; atoms < 16; ++atoms) {
            std::vector<std::pair<int, Tuple>> at;
            if (atoms & 1) at.push_back({0, {0, 0}});
            if (atoms & 2) at.push_back({0, {0, 1}});
            if (atoms & 4) at.push_back({0, {1, 0}});
            if (atoms & 8) at.push_back({0, {1, 1}});
            diagrams.push_back(make_tuple_diagram(sig, {"x", "y"}, at));
            diagrams.push_back(make_tuple_diagram(sig, {"x", "y"}, at, {{0, 1}}));
        }
        std::vector<Structure> corpus = binary_classes(3);
        corpus.push_back(chain(4));
        corpus.push_back(binary_structure(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
        for (const TupleDiagram& d : diagrams) {
            FormulaPtr femb = emb_formula(d);
            for (const Structure& M : corpus) {
                for (int x = 0; x < M.size; ++x)
                    for (int y = 0; y < M.size; ++y) {
                        Tuple values{x, y};
                        if (!diagram_holds(d, M, values)) continue;
                        Homomorphism h = diagram_homomorphism(d, M, values);
                        Assignment v{{"x", x}, {"y", y}};
                        CHECK(evaluate(M, femb, v) == is_embedding(h));
                    }
            }
        }
    }
}

TEST_CASE("hintikka_theta base cases") {
    Structure m = chain(2);
    SECTION("rank 0 against the matching shape is the true formula") {
        HintikkaSynthesizer synth(efi(2), m);
        const PathTree& t = synth.tree();
        for (int n = 0; n < t.size(); ++n)
            CHECK(is_true(synth.theta_at(t.path_node(n), 0)));
    }
    SECTION("rank 0 against a mismatched shape is the false formula") {
        HintikkaSynthesizer synth(efi(2), m);
        ChainShape wrong;  // empty chain against a depth-one node
        const PathTree& t = synth.tree();
        int node1 = -1;
        for (int n = 0; n < t.size(); ++n)
            if (t.depth[static_cast<std::size_t>(n)] == 1) node1 = n;
        REQUIRE(node1 >= 0);
        CHECK(is_false(synth.theta_against(t.path_node(node1), wrong, 0)));
        // mismatched chain lengths likewise
        CHECK(is_false(synth.theta_against(t.path_node(node1),
                                           t.shape[static_cast<std::size_t>(0)], 0)));
    }
    SECTION("request api mirrors the synthesizer") {
        HintikkaRequest req;
        req.spec = efi(2);
        req.M = m;
        req.node = PathNode{std::nullopt};
        req.shape = ChainShape{};
        req.rank = 0;
        CHECK(is_true(hintikka_theta(req)));
    }
    SECTION("invalid shapes are rejected") {
        HintikkaRequest req;
        req.spec = efi(2);
        req.M = m;
        req.node = PathNode{std::nullopt};
        req.shape = ChainShape{};
        req.shape.pebbling = {1};  // pebbling data on an EF shape
        req.rank = 0;
        CHECK_THROWS_AS(hintikka_theta(req), error);
    }
}

TEST_CASE("theta of a two-chain node agrees with the rank table position-wise") {
    Structure m = chain(2);
    for (int rmax : {1, 2}) {
        for (const Structure& n : binary_classes(3)) check_exactness(efi(2), m, n, rmax);
    }
}

TEST_CASE("exactness across the small corpus, all flavors") {
    SECTION("identity-expanded EF at k=2") {
        auto classes = binary_classes(2);
        for (const Structure& M : classes)
            for (const Structure& N : classes) check_exactness(efi(2), M, N, 3);
    }
    SECTION("plain EF at k=2") {
        auto classes = binary_classes(2);
        ComonadSpec spec{ComonadKind::EF, 2, false, std::nullopt};
        for (const Structure& M : classes)
            for (const Structure& N : classes) check_exactness(spec, M, N, 3);
    }
    SECTION("pebble at k=2 with a short play bound") {
        ComonadSpec spec{ComonadKind::Pebble, 2, false, 2};
        std::vector<Structure> sample = {binary_structure(1, {}), binary_structure(1, {{0, 0}}),
                                         binary_structure(2, {{0, 1}}), chain(2)};
        for (const Structure& M : sample)
            for (const Structure& N : sample) check_exactness(spec, M, N, 2);
    }
    SECTION("pebble with identity at k=2") {
        ComonadSpec spec{ComonadKind::Pebble, 2, true, 2};
        std::vector<Structure> sample = {binary_structure(1, {}), binary_structure(2, {{0, 1}})};
        for (const Structure& M : sample)
            for (const Structure& N : sample) check_exactness(spec, M, N, 2);
    }
    SECTION("modal at k=3") {
        Signature sig = make_signature({{"p", 1}, {"t", 2}}, std::nullopt, "t", true);
        std::vector<Structure> sample = {
            make_structure(sig, 1, {}, 0),
            make_structure(sig, 1, {{"t", {{0, 0}}}}, 0),
            make_structure(sig, 2, {{"p", {{1}}}, {"t", {{0, 1}}}}, 0),
            make_structure(sig, 2, {{"t", {{0, 1}, {1, 0}}}}, 0),
            make_structure(sig, 3, {{"p", {{2}}}, {"t", {{0, 1}, {1, 2}, {2, 0}}}}, 0),
        };
        for (const Structure& M : sample)
            for (const Structure& N : sample) {
                ComonadSpec spec{ComonadKind::Modal, 3, false, std::nullopt};
                HintikkaSynthesizer synth(spec, M);
                Unravelling un = unravel(spec, N);
                GameAnalysis g = analyze_game(synth.unravelling().forest, un.forest);
                for (int n = 0; n < g.tb.size(); ++n) {
                    Assignment v = play_assignment(un, g.tb, n);
                    for (int mm = 0; mm < g.ta.size(); ++mm) {
                        const Rank& rk = g.table.at(mm, n);
                        for (int r = 0; r <= 3; ++r) {
                            bool expect = rk.top || (rk.winning && rk.value >= r);
                            FormulaPtr theta = synth.theta_against(
                                g.ta.path_node(mm), g.tb.shape[static_cast<std::size_t>(n)], r);
                            CHECK(evaluate(un.base, theta, v) == expect);
                        }
                    }
                }
            }
    }
}

TEST_CASE("root sentences characterise surviving r rounds") {
    SECTION("rank 0 with empty-root flavors is the true sentence") {
        CHECK(is_true(root_hintikka_sentence(efi(2), chain(2), 0)));
        CHECK(is_true(root_hintikka_sentence(ComonadSpec{ComonadKind::Pebble, 2, false, 2},
                                             chain(2), 0)));
    }
    SECTION("a structure satisfies its own root sentence at every rank") {
        for (const Structure& m : binary_classes(2))
            for (int r = 0; r <= 3; ++r) {
                FormulaPtr f = root_hintikka_sentence(efi(2), m, r);
                CHECK(satisfies_root_sentence(efi(2), m, f));
            }
    }
    SECTION("linear orders: the size-three sentence at rank three excludes size four") {
        Structure a = linear_order(3), b = linear_order(4);
        FormulaPtr f3 = root_hintikka_sentence(efi(3), a, 3);
        CHECK(satisfies_root_sentence(efi(3), a, f3));
        CHECK_FALSE(satisfies_root_sentence(efi(3), b, f3));
        FormulaPtr f2 = root_hintikka_sentence(efi(2), a, 2);
        CHECK(satisfies_root_sentence(efi(2), b, f2));  // equivalent at k=2
    }
    SECTION("sentence truth matches the rank table on the corpus") {
        auto classes = binary_classes(2);
        for (const Structure& M : classes) {
            HintikkaSynthesizer synth(efi(2), M);
            for (const Structure& N : classes) {
                Unravelling un = unravel(efi(2), N);
                GameAnalysis g = analyze_game(synth.unravelling().forest, un.forest);
                const Rank& root = g.at(g.root_position());
                for (int r = 0; r <= 3; ++r) {
                    bool expect = root.top || (root.winning && root.value >= r);
                    CHECK(satisfies_root_sentence(efi(2), N, synth.root_sentence(r)) == expect);
                }
            }
        }
    }
}

TEST_CASE("distinguishing sentences") {
    SECTION("equivalent inputs give nothing") {
        Structure m = chain(3);
        CHECK_FALSE(distinguishing_sentence(efi(2), m, m).has_value());
        Structure a = linear_order(3), b = linear_order(4);
        CHECK_FALSE(distinguishing_sentence(efi(2), a, b).has_value());
    }
    SECTION("one vs two elements at k=2") {
        Structure one = binary_structure(1, {});
        Structure two = binary_structure(2, {});
        auto d = distinguishing_sentence(efi(2), one, two);
        REQUIRE(d.has_value());
        CHECK(d->rank == 2);
        CHECK(satisfies_root_sentence(efi(2), one, d->sentence));
        CHECK_FALSE(satisfies_root_sentence(efi(2), two, d->sentence));
        // logically the witness plays the role of a two-element counter:
        // the canonical sentence distinguishes the same way
        FormulaPtr pair_sentence =
            f_exists("u", f_exists("v", f_not(f_atom("I", {"u", "v"}))));
        Structure eone = expand_identity(one), etwo = expand_identity(two);
        CHECK(evaluate_sentence(eone, pair_sentence) != evaluate_sentence(etwo, pair_sentence));
    }
    SECTION("modal structures with differing root letters split at rank zero") {
        Signature sig = make_signature({{"p", 1}, {"t", 2}}, std::nullopt, "t", true);
        Structure m = make_structure(sig, 1, {{"p", {{0}}}}, 0);
        Structure n = make_structure(sig, 1, {}, 0);
        ComonadSpec spec{ComonadKind::Modal, 1, false, std::nullopt};
        auto d = distinguishing_sentence(spec, m, n);
        REQUIRE(d.has_value());
        CHECK(d->rank == 0);  // the root position is already outside W
        CHECK(satisfies_root_sentence(spec, m, d->sentence));
        CHECK_FALSE(satisfies_root_sentence(spec, n, d->sentence));
    }
    SECTION("soundness and rank bounds across the corpus") {
        auto classes = binary_classes(2);
        for (const Structure& M : classes)
            for (const Structure& N : classes)
                for (int k = 1; k <= 2; ++k) {
                    auto d = distinguishing_sentence(efi(k), M, N);
                    CHECK(d.has_value() != r_equivalent(M, N, efi(k)));
                    if (d) {
                        CHECK(satisfies_root_sentence(efi(k), M, d->sentence));
                        CHECK_FALSE(satisfies_root_sentence(efi(k), N, d->sentence));
                        CHECK(quantifier_rank(d->sentence) <= d->rank);
                        CHECK(d->rank <= k);
                    }
                }
    }
}

TEST_CASE("synthesised formulas stay finite and within the rank budget") {
    Structure m = binary_structure(3, {{0, 1}, {1, 2}, {2, 0}});
    HintikkaSynthesizer synth(efi(3), m);
    const PathTree& t = synth.tree();
    for (int r = 0; r <= 3; ++r) {
        FormulaPtr f = synth.theta_at(t.path_node(0), r);
        CHECK(quantifier_rank(f) <= r);
        // crude branching bound: alternations over |M| successors and the
        // shape alternatives, one quantifier per rank step
        CHECK(node_count(f) < 200000);
    }
}
