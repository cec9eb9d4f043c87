#include <doctest.h>

#include <random>

#include "finlog/formula_gen.hpp"
#include "finlog/parser.hpp"
#include "finlog/spectra.hpp"

using namespace finlog;

TEST_CASE("spectrum of a fixed-size sentence") {
    auto two = parse_formula("exists x. exists y. !(x = y) & forall z. (z = x | z = y)");
    auto report = spectrum(two, Vocabulary{}, 5);
    CHECK(report.realized == std::vector<int>{2});
    CHECK(report.model_counts.at(2) == 1);
    CHECK(report.model_counts.at(3) == 0);
}

TEST_CASE("spectrum of the hidden-pairing projection is the even sizes") {
    ProjectionDefinition d{
        Vocabulary::of({{"S", 2}}), Vocabulary{},
        parse_formula("(forall x. exists y. S(x,y)) & (forall x. forall y. S(x,y) -> S(y,x))"
                      " & (forall x. !S(x,x))"
                      " & (forall x. forall y. forall z. S(x,y) & S(x,z) -> y = z)")};
    auto report = spectrum(d, 5, {}, std::uint64_t{1} << 26);
    CHECK(report.realized == std::vector<int>{2, 4});
}

TEST_CASE("spectrum of eta'_3") {
    auto report = spectrum(eta_prime(3), 5);
    CHECK(report.realized == std::vector<int>{3});
    CHECK(report.class_counts.at(3) == 1);
    CHECK(report.model_counts.at(3) == 6);
}

TEST_CASE("min_model_size") {
    CHECK(min_model_size(parse_formula("exists x. x = x"), Vocabulary{}, 5) == 1);
    CHECK(min_model_size(eta_prime(3), 5) == 3);
    CHECK_FALSE(min_model_size(parse_formula("exists x. !(x = x)"), Vocabulary{}, 5)
                    .has_value());
}

TEST_CASE("ls_check verdicts") {
    auto two = parse_formula("E>=2 x. x = x & !(E>=3 y. y = y)");
    {
        auto r = ls_check({two}, Vocabulary{}, SizeClass::explicit_set({2}),
                          SizeClass::explicit_set({1, 2, 3}), 5);
        CHECK(r.results[0].verdict == LsVerdict::Holds);
    }
    {
        auto r = ls_check({eta_prime(3)}, inferred_vocabulary(*eta_prime(3)),
                          SizeClass::explicit_set({3}), SizeClass::explicit_set({1}), 5);
        CHECK(r.results[0].verdict == LsVerdict::FailsInRange);
    }
    {
        auto r = ls_check({parse_formula("exists x. !(x = x)")}, Vocabulary{},
                          SizeClass::all(), SizeClass::all(), 4);
        CHECK(r.results[0].verdict == LsVerdict::Vacuous);
    }
    {
        // a D-model may exist beyond the window: inconclusive
        auto r = ls_check({two}, Vocabulary{}, SizeClass::explicit_set({2}),
                          SizeClass::explicit_set({9}), 5);
        CHECK(r.results[0].verdict == LsVerdict::Inconclusive);
    }
}

TEST_CASE("model counting and class counting agree on emptiness (sizes <= 4)") {
    GenOptions o;
    o.vocabulary = Vocabulary::of({{"P", 1}});
    o.variables = {"x", "y"};
    auto corpus = sentence_corpus(11, o, 25, true);
    for (const auto& f : corpus) {
        auto report = spectrum(f, o.vocabulary, 4);
        for (int n = 1; n <= 4; ++n)
            CHECK((report.model_counts.at(n) == 0) == (report.class_counts.at(n) == 0));
    }
}

TEST_CASE("every subset of [1..4] is a spectrum") {
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<FormulaPtr> parts;
        std::vector<int> expected;
        for (int n = 1; n <= 4; ++n)
            if (mask & (1u << (n - 1))) {
                parts.push_back(exactly_n_elements(n));
                expected.push_back(n);
            }
        FormulaPtr f = parts.empty() ? mk_false() : mk_big_or(parts);
        auto report = spectrum(f, Vocabulary{}, 5);
        CHECK(report.realized == expected);
    }
}

TEST_CASE("spectrum laws for the big connectives") {
    GenOptions o;
    o.vocabulary = Vocabulary::of({{"P", 1}});
    o.variables = {"x", "y"};
    o.max_depth = 3;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_sentence(rng, o);
        auto g = random_sentence(rng, o);
        auto fr = spectrum(f, o.vocabulary, 3).realized;
        auto gr = spectrum(g, o.vocabulary, 3).realized;
        auto onion = spectrum(mk_big_or({f, g}), o.vocabulary, 3).realized;
        std::set<int> expect(fr.begin(), fr.end());
        expect.insert(gr.begin(), gr.end());
        CHECK(onion == std::vector<int>(expect.begin(), expect.end()));

        auto meet = spectrum(mk_and(f, g), o.vocabulary, 3).realized;
        for (int n : meet) {
            CHECK(std::count(fr.begin(), fr.end(), n) == 1);
            CHECK(std::count(gr.begin(), gr.end(), n) == 1);
        }
    }
}

TEST_CASE("per-size definitions only realize their size") {
    auto def = define_class_at_size(oracle_even_p(), 2);
    auto report = spectrum(def.members, 3);
    CHECK(report.realized == std::vector<int>{2});
}

TEST_CASE("limit/successor order sentences at finite sizes") {
    auto lim = phi_limit_order();
    auto suc = phi_successor_order();
    // both parse back from their rendering
    CHECK(equal(parse_formula(render(lim)), lim));
    CHECK(equal(parse_formula(render(suc)), suc));

    // intended content lives on infinite cardinals; finitely the first has no
    // models at all and the second holds on every linear order
    auto lim_report = spectrum(lim, 4);
    CHECK(lim_report.realized.empty());
    auto suc_report = spectrum(suc, 4);
    CHECK(suc_report.realized == std::vector<int>{1, 2, 3, 4});
    for (int n = 1; n <= 4; ++n) {
        std::uint64_t orders = 1;
        for (int i = 2; i <= n; ++i)
            orders *= std::uint64_t(i);
        CHECK(suc_report.model_counts.at(n) == orders);
        CHECK(suc_report.class_counts.at(n) == 1);
    }
}

TEST_CASE("size class parsing and window exhaustion") {
    CHECK(SizeClass::parse("all").contains(7));
    CHECK(SizeClass::parse("{1,2,3}").contains(2));
    CHECK_FALSE(SizeClass::parse("{1,2,3}").contains(4));
    CHECK(SizeClass::parse("2..5").contains(5));
    CHECK_FALSE(SizeClass::parse("2..5").contains(6));
    CHECK(SizeClass::parse("3..").contains(100));
    CHECK(SizeClass::parse("even").contains(4));
    CHECK(SizeClass::parse("odd").contains(3));
    CHECK(SizeClass::parse("mod 3 = 1").contains(7));
    CHECK(SizeClass::parse("4").contains(4));

    CHECK(SizeClass::parse("{1,2,3}").exhausted_by(3));
    CHECK_FALSE(SizeClass::parse("{1,9}").exhausted_by(3));
    CHECK(SizeClass::parse("2..5").exhausted_by(5));
    CHECK_FALSE(SizeClass::parse("3..").exhausted_by(100));
    CHECK_FALSE(SizeClass::parse("even").exhausted_by(100));
    CHECK_FALSE(SizeClass::parse("all").exhausted_by(100));

    CHECK_THROWS_AS(SizeClass::parse("nope nope"), ConfigError);
    CHECK(SizeClass::parse("{1, 2}").to_string() == "{1,2}");
}

TEST_CASE("spectrum budget") {
    CHECK_THROWS_AS(spectrum(parse_formula("exists x. R(x,x)"), 4, {}, 1000), BudgetError);
}
