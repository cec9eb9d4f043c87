#include <doctest.h>

#include <random>

#include "finlog/definability.hpp"
#include "finlog/formula.hpp"
#include "finlog/formula_gen.hpp"
#include "finlog/parser.hpp"

using namespace finlog;

TEST_CASE("parse: quantifier examples") {
    auto f = parse_formula("exists x. P(x)");
    const auto* q = std::get_if<QuantNode>(&f->node);
    REQUIRE(q);
    CHECK_FALSE(q->universal);
    CHECK(var_name(q->var) == "x");
    const auto* rel = std::get_if<RelNode>(&q->body->node);
    REQUIRE(rel);
    CHECK(rel->symbol == "P");

    auto c = parse_formula("E>=2 x. P(x)");
    const auto* count = std::get_if<CountNode>(&c->node);
    REQUIRE(count);
    CHECK(count->threshold == 2);

    auto h = parse_formula("I x y. (P(x)) (R(y))");
    const auto* cmp = std::get_if<CompareQNode>(&h->node);
    REQUIRE(cmp);
    CHECK(cmp->equal);
    CHECK(var_name(cmp->left_var) == "x");
    CHECK(var_name(cmp->right_var) == "y");
}

TEST_CASE("parse: precedence and associativity") {
    // ! > & > | > -> > <->, -> right associative
    CHECK(equal(parse_formula("P(x) & Q0(x) | R0(x)"),
                mk_or(mk_and(mk_rel("P", {"x"}), mk_rel("Q0", {"x"})), mk_rel("R0", {"x"}))));
    CHECK(equal(parse_formula("P(x) -> Q0(x) -> R0(x)"),
                mk_implies(mk_rel("P", {"x"}),
                           mk_implies(mk_rel("Q0", {"x"}), mk_rel("R0", {"x"})))));
    CHECK(equal(parse_formula("!P(x) & Q0(x)"),
                mk_and(mk_not(mk_rel("P", {"x"})), mk_rel("Q0", {"x"}))));
    // quantifiers bind weakest
    CHECK(equal(parse_formula("exists x. P(x) & Q0(x)"),
                mk_exists("x", mk_and(mk_rel("P", {"x"}), mk_rel("Q0", {"x"})))));
    CHECK(equal(parse_formula("P(x) -> forall y. Q0(y) | R0(y)"),
                mk_implies(mk_rel("P", {"x"}),
                           mk_forall("y", mk_or(mk_rel("Q0", {"y"}), mk_rel("R0", {"y"}))))));
}

TEST_CASE("render examples") {
    CHECK(render(mk_exists("x", mk_rel("P", {"x"}))) == "exists x. P(x)");
    CHECK(render(parse_formula("And{P(x), x = y, true}")) == "And{P(x), x = y, true}");
}

TEST_CASE("round-trip on the first Keisler axiom text") {
    std::string text = "!Q x. (x = y | x = z)";
    auto f = parse_formula(text);
    auto once = render(f);
    CHECK(equal(parse_formula(once), f));
    CHECK(render(parse_formula(once)) == once);  // fixed point after one cycle
}

TEST_CASE("parse(render()) is the identity on generated ASTs") {
    GenOptions o;
    o.max_depth = 6;
    o.with_schematic_q = true;
    o.oracles = {{"K", 1}};
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 1000; ++i) {
        auto f = random_formula(rng, o);
        auto text = render(f);
        CAPTURE(text);
        auto back = parse_formula(text);
        REQUIRE(equal(back, f));
        CHECK(render(back) == text);  // idempotent on strings
    }
}

TEST_CASE("grammar accepts renderings of the synthesized formulas") {
    for (int n = 0; n <= 4; ++n) {
        auto e = eta(n);
        CHECK(equal(parse_formula(render(e)), e));
        auto ep = eta_prime(n);
        CHECK(equal(parse_formula(render(ep)), ep));
    }
    Structure s(Vocabulary::of({{"R", 2}}), 3);
    s.set_interpretation("R", {{0, 1}, {1, 2}});
    auto phi = characterizing_phi(s, Bijection::identity(3)).phi;
    CHECK(equal(parse_formula(render(phi)), phi));
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_formula("exists x P(x)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 10);
        CHECK(e.expected.find("'.'") != std::string::npos);
        CHECK(e.found == "P");
    }
    CHECK_THROWS_AS(parse_formula("P(x) &"), ParseError);
    CHECK_THROWS_AS(parse_formula("P(x"), ParseError);
    CHECK_THROWS_AS(parse_formula("E>=0 x. P(x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("W x x. R(x,x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("forall exists. P(x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("P(x) extra"), ParseError);
}

TEST_CASE("check_wf: arity and free-variable violations") {
    auto voc = Vocabulary::of({{"P", 1}});

    auto bad = mk_rel("P", {"x", "y"});
    auto violations = check_wf(*bad, voc);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("arity") != std::string::npos);

    CHECK(check_wf(*parse_formula("exists x. P(x)"), voc).empty());

    auto free = check_wf(*parse_formula("P(x)"), voc, true);
    REQUIRE(free.size() == 1);
    CHECK(free[0].message.find("free variable") != std::string::npos);

    auto unknown = check_wf(*parse_formula("R(x,y)"), voc);
    REQUIRE(unknown.size() == 1);
    CHECK(unknown[0].message.find("unknown relation") != std::string::npos);

    std::vector<std::pair<std::string, int>> oracle_arities{{"K", 1}};
    CHECK(check_wf(*parse_formula("QK[K] x. P(x)"), voc, true, &oracle_arities).empty());
    auto bad_oracle = check_wf(*parse_formula("QK[K] x y. P(x)"), voc, true, &oracle_arities);
    CHECK(bad_oracle.size() == 1);
}

TEST_CASE("substitution and freeness") {
    auto f = parse_formula("P(x) & exists y. R(x,y)");
    int x = intern_var("x"), y = intern_var("y"), z = intern_var("z");

    CHECK(is_free_in(*f, x));
    CHECK_FALSE(is_free_in(*f, y));

    CHECK(is_free_for(*f, x, z));
    CHECK_FALSE(is_free_for(*f, x, y));  // y is captured by the binder

    auto g = substitute_free(f, x, z);
    CHECK(render(g) == "P(z) & (exists y. R(z, y))");
    // bound occurrences stay put
    auto h = substitute_free(parse_formula("exists x. P(x)"), x, z);
    CHECK(render(h) == "exists x. P(x)");
}

TEST_CASE("inferred vocabulary and oracle references") {
    auto f = parse_formula("R(x,y) & P(x) & QK[K] z. R(z,z)");
    auto voc = inferred_vocabulary(*f);
    REQUIRE(voc.size() == 2);
    CHECK(voc.symbols()[0].name == "R");  // first occurrence order
    CHECK(voc.symbols()[1].name == "P");
    auto oracles = oracle_references(*f);
    REQUIRE(oracles.size() == 1);
    CHECK(oracles[0] == std::pair<std::string, int>{"K", 1});

    CHECK_THROWS_AS(inferred_vocabulary(*parse_formula("P(x) & P(x,y)")), VocabularyError);
}

TEST_CASE("big connectives require at least one part") {
    CHECK_THROWS_AS(mk_big_and({}), Error);
    CHECK_THROWS_AS(mk_big_or({}), Error);
}
