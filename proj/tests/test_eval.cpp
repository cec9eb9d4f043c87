#include <doctest.h>

#include <random>

#include "finlog/eval.hpp"
#include "finlog/formula_gen.hpp"
#include "finlog/parser.hpp"

using namespace finlog;

namespace {

Structure make(const std::string& text) {
    return parse_structure(text);
}

bool holds(const Structure& s, const std::string& formula, const EvalEnv& env = {}) {
    return eval_sentence(s, parse_formula(formula), env);
}

}  // namespace

TEST_CASE("counting quantifier") {
    auto s = make("size 3\nrel P/1: (0); (1)");
    CHECK(holds(s, "E>=2 x. P(x)"));
    CHECK_FALSE(holds(s, "E>=3 x. P(x)"));
}

TEST_CASE("equicardinality quantifier") {
    auto s = make("size 4\nrel P/1: (0); (1)\nrel R/1: (2); (3)");
    CHECK(holds(s, "I x y. (P(x)) (R(y))"));
    auto t = make("size 4\nrel P/1: (0); (1)\nrel R/1: (2)");
    CHECK_FALSE(holds(t, "I x y. (P(x)) (R(y))"));
}

TEST_CASE("well-ordering quantifier is the strict-total-order test") {
    auto chain = make("size 3\nrel R/2: (0,1); (1,2); (0,2)");
    CHECK(holds(chain, "W x y. R(x,y)"));
    auto cyc = make("size 2\nrel R/2: (0,1); (1,0)");
    CHECK_FALSE(holds(cyc, "W x y. R(x,y)"));

    // agrees with the brute-force irreflexive+transitive+total check
    StructureEnumerator en(Vocabulary::of({{"R", 2}}), 3);
    Structure s(Vocabulary{}, 0);
    auto w = parse_formula("W x y. R(x,y)");
    Evaluator ev(w);
    while (en.next(s)) {
        auto tuples = s.interpretation("R").tuples();
        std::set<Tuple> rel(tuples.begin(), tuples.end());
        auto at = [&](int a, int b) { return rel.count({a, b}) > 0; };
        bool ok = true;
        for (int a = 0; a < 3; ++a) {
            ok = ok && !at(a, a);
            for (int b = 0; b < 3; ++b) {
                if (a != b)
                    ok = ok && (at(a, b) != at(b, a));
                for (int c = 0; c < 3; ++c)
                    if (at(a, b) && at(b, c))
                        ok = ok && at(a, c);
            }
        }
        CHECK(ev.sentence(s) == ok);
    }
}

TEST_CASE("oracle quantifier matches the existential on every size-2 unary structure") {
    EvalEnv env;
    env.with_oracle(oracle_nonempty_p());
    auto via_oracle = parse_formula("QK[nonempty-P] x. P(x)");
    auto via_exists = parse_formula("exists x. P(x)");
    auto all = all_structures(Vocabulary::of({{"P", 1}}), 2);
    REQUIRE(all.size() == 4);
    for (const auto& s : all)
        CHECK(eval_sentence(s, via_oracle, env) == eval_sentence(s, via_exists, env));

    auto witness = make("size 2\nrel P/1: (0)");
    CHECK(eval_sentence(witness, via_oracle, env));
}

TEST_CASE("semantic values") {
    auto s = make("size 3\nrel P/1: (0); (2)");
    auto v = eval_value(s, parse_formula("P(x)"), {"x"});
    CHECK(v.tuples == std::set<Tuple>{{0}, {2}});

    auto t = make("size 2\nrel P/1: (0)");
    auto pair = eval_value(t, parse_formula("P(x) & P(y)"), {"x", "y"});
    CHECK(pair.tuples == std::set<Tuple>{{0, 0}});

    auto r = make("size 3\nrel R/2: (0,1); (2,1)");
    auto proj = eval_value(r, parse_formula("exists y. R(x,y)"), {"x"});
    CHECK(proj.tuples == std::set<Tuple>{{0}, {2}});
}

TEST_CASE("sentences as empty-variable values") {
    auto s = make("size 2\nrel P/1: (0)");
    CHECK(eval_value(s, parse_formula("exists x. P(x)"), {}).tuples ==
          std::set<Tuple>{Tuple{}});
    CHECK(eval_value(s, parse_formula("forall x. P(x)"), {}).tuples.empty());
}

TEST_CASE("evaluation errors") {
    auto s = make("size 2\nrel P/1: (0)");
    CHECK_THROWS_AS(holds(s, "Q x. P(x)"), EvalError);  // unbound schematic Q
    {
        EvalEnv env;
        env.with_q(QInterpretation::named("hartig"));
        CHECK_THROWS_AS(holds(s, "Q x. P(x)", env), EvalError);  // binary built-in
        env.with_q(QInterpretation::count_threshold(1));
        CHECK(holds(s, "Q x. P(x)", env));
    }
    CHECK_THROWS_AS(holds(s, "QK[mystery] x. P(x)"), EvalError);
    CHECK_THROWS_AS(eval_sentence(Structure(Vocabulary::of({{"P", 1}}), 0),
                                  parse_formula("exists x. P(x)")),
                    EvalError);
    CHECK_THROWS_AS(eval_sentence(s, parse_formula("P(x)")), EvalError);  // free variable
    CHECK_THROWS_AS(holds(s, "R(x,x) | exists x. x = x"), EvalError);  // unknown symbol
}

TEST_CASE("Hartig is the two-sided Rescher (sizes <= 3 spot check)") {
    auto hartig = parse_formula("I x y. (P(x)) (R(y))");
    auto two_sided = parse_formula("J x y. (P(x)) (R(y)) & J y x. (R(y)) (P(x))");
    Evaluator h(hartig), j(two_sided);
    for (int n = 1; n <= 3; ++n) {
        StructureEnumerator en(Vocabulary::of({{"P", 1}, {"R", 1}}), n);
        Structure s(Vocabulary{}, 0);
        while (en.next(s))
            CHECK(h.sentence(s) == j.sentence(s));
    }
}

TEST_CASE("counting with threshold 1 is the existential") {
    GenOptions o;
    o.max_depth = 3;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
        auto body = random_formula(rng, o);
        std::vector<FormulaPtr> both{mk_count_at_least(1, "x", body), mk_exists("x", body)};
        Evaluator a(both[0]), b(both[1]);
        for (int n = 1; n <= 3; ++n) {
            StructureEnumerator en(o.vocabulary, n);
            Structure s(Vocabulary{}, 0);
            while (en.next(s)) {
                std::vector<std::string> vars;
                for (int id : both[0]->free_ids)
                    vars.push_back(var_name(id));
                CHECK(a.value(s, vars).tuples == b.value(s, vars).tuples);
            }
        }
    }
}

TEST_CASE("truth is isomorphism invariant on a generated corpus (sizes <= 3)") {
    GenOptions o;
    o.with_schematic_q = true;
    o.oracles = {{"even-P", 1}};
    EvalEnv env;
    env.with_oracle(oracle_even_p());
    env.with_q(QInterpretation::count_threshold(2));
    auto corpus = sentence_corpus(42, o, 60, true);
    for (const auto& f : corpus) {
        Evaluator ev(f, env);
        for (int n = 1; n <= 3; ++n) {
            StructureEnumerator en(o.vocabulary, n, 1u << 22);
            Structure s(Vocabulary{}, 0);
            while (en.next(s)) {
                bool base = ev.sentence(s);
                for_each_permutation(n, [&](const Bijection& pi) {
                    CHECK(ev.sentence(apply_bijection(s, pi)) == base);
                    return true;
                });
            }
        }
    }
}

TEST_CASE("image law for semantic values (sizes <= 3)") {
    GenOptions o;
    o.max_depth = 3;
    std::mt19937_64 rng(99);
    for (int i = 0; i < 25; ++i) {
        auto f = random_formula(rng, o);
        std::vector<std::string> vars;
        for (int id : f->free_ids)
            vars.push_back(var_name(id));
        Evaluator ev(f);
        for (int n = 1; n <= 3; ++n) {
            StructureEnumerator en(o.vocabulary, n, 1u << 22);
            Structure s(Vocabulary{}, 0);
            int step = 0;
            while (en.next(s)) {
                if (n == 3 && (step++ % 17) != 0)
                    continue;
                auto base = ev.value(s, vars);
                for_each_permutation(n, [&](const Bijection& pi) {
                    auto image = ev.value(apply_bijection(s, pi), vars);
                    std::set<Tuple> mapped;
                    for (const auto& t : base.tuples)
                        mapped.insert(pi.image(t));
                    CHECK(image.tuples == mapped);
                    return true;
                });
            }
        }
    }
}

TEST_CASE("empty-set conventions of the cardinality quantifiers") {
    auto s = make("size 2\nrel P/1:\nrel R/1:");
    CHECK(holds(s, "I x y. (P(x)) (R(y))"));   // both empty: equal
    CHECK(holds(s, "J x y. (P(x)) (R(y))"));   // at least as many as zero
    auto t = make("size 2\nrel P/1:\nrel R/1: (0)");
    CHECK_FALSE(holds(t, "I x y. (P(x)) (R(y))"));
    CHECK_FALSE(holds(t, "J x y. (P(x)) (R(y))"));
    CHECK(holds(t, "J y x. (R(y)) (P(x))"));
}

TEST_CASE("oracle closure probe finds planted violations") {
    CHECK_FALSE(check_isomorphism_closed(oracle_even_p(), 3).has_value());

    ClassOracle leaky{"leaky", Vocabulary::of({{"P", 1}}),
                      [](const Structure& s) { return s.interpretation("P").contains({0}); }};
    auto violation = check_isomorphism_closed(leaky, 2);
    REQUIRE(violation.has_value());
    CHECK(leaky.membership(violation->witness) !=
          leaky.membership(apply_bijection(violation->witness, violation->pi)));
}
