#include <doctest.h>

#include <random>

#include "finlog/operations.hpp"
#include "finlog/parser.hpp"

using namespace finlog;

TEST_CASE("intersection is permutation invariant") {
    auto report = is_permutation_invariant(LocalOperation::intersection(2, 1));
    CHECK(report.invariant);
    CHECK(report.checked == 32);  // 16 input pairs x 2 permutations
}

TEST_CASE("a rule naming a fixed element is not invariant, with the documented witness") {
    LocalOperation f{2, {1}, 1, [](const std::vector<ValueSet>& in) {
                         ValueSet out = in[0];
                         out.insert({0});
                         return out;
                     }};
    auto report = is_permutation_invariant(f);
    REQUIRE_FALSE(report.invariant);
    const auto& cex = *report.counterexample;
    CHECK(cex.inputs == std::vector<ValueSet>{{}});           // first input in order: empty
    CHECK(cex.pi.mapping() == std::vector<int>{1, 0});        // the swap
    CHECK(cex.output_of_images == ValueSet{{0}});             // f(pi''empty)
    CHECK(cex.image_of_output == ValueSet{{1}});              // pi''f(empty)
    CHECK(replay_counterexample(f, cex));
}

TEST_CASE("existential projection is invariant (2 permutations x 16 inputs)") {
    auto report = is_permutation_invariant(LocalOperation::projection(2, 2));
    CHECK(report.invariant);
    CHECK(report.checked == 32);
}

TEST_CASE("global invariance across sizes") {
    CHECK(is_bijection_invariant(GlobalOperation::intersection(1), 3).invariant);

    // depends only on the size: invariant
    GlobalOperation size_gate{{1}, 1, [](int n) {
                                  return LocalOperation{
                                      n, {1}, 1, [n](const std::vector<ValueSet>& in) {
                                          return n <= 2 ? in[0] : ValueSet{};
                                      }};
                              }};
    CHECK(is_bijection_invariant(size_gate, 3).invariant);

    // mentions a fixed element: refuted at size 2 already
    GlobalOperation pins_zero{{1}, 1, [](int n) {
                                  return LocalOperation{
                                      n, {1}, 1, [](const std::vector<ValueSet>& in) {
                                          ValueSet out = in[0];
                                          out.insert({0});
                                          return out;
                                      }};
                              }};
    auto report = is_bijection_invariant(pins_zero, 3);
    REQUIRE_FALSE(report.invariant);
    CHECK(report.counterexample->domain_size == 2);
}

TEST_CASE("describes: conjunction, disjunction, and a failing formula") {
    for (int n = 1; n <= 3; ++n) {
        CHECK(describes(parse_formula("P0(x) & P1(x)"), LocalOperation::intersection(n, 1),
                        {"P0", "P1"})
                  .describes);
        CHECK(describes(parse_formula("P0(x) | P1(x)"), LocalOperation::union_of(n, 1),
                        {"P0", "P1"})
                  .describes);
    }
    auto report =
        describes(parse_formula("P0(x)"), LocalOperation::intersection(2, 1), {"P0", "P1"});
    REQUIRE_FALSE(report.describes);
    CHECK(report.counterexample->inputs == std::vector<ValueSet>{{{0}}, {}});
    CHECK(report.counterexample->formula_value == ValueSet{{0}});
    CHECK(report.counterexample->operation_value == ValueSet{});
}

TEST_CASE("describes: projection and complement") {
    CHECK(describes(parse_formula("exists y. P0(x,y)"), LocalOperation::projection(3, 2), {"P0"})
              .describes);
    CHECK(describes(parse_formula("!P0(x)"), LocalOperation::complement(3, 1), {"P0"})
              .describes);
}

TEST_CASE("class_of_operation: membership counts and shapes") {
    auto k = class_of_operation(GlobalOperation::intersection(1));
    REQUIRE(k.vocabulary.symbols().size() == 3);
    int members = 0;
    auto all = all_structures(k.vocabulary, 2);
    REQUIRE(all.size() == 64);
    for (const auto& s : all) {
        // brute force: P must equal P0 and P1 intersected
        std::set<Tuple> expect;
        for (const auto& t : s.interpretation("P0").tuples())
            if (s.interpretation("P1").contains(t))
                expect.insert(t);
        auto p = s.interpretation("P").tuples();
        bool in = std::set<Tuple>(p.begin(), p.end()) == expect;
        CHECK(k.membership(s) == in);
        members += in;
    }
    CHECK(members == 16);

    // identity operation: members are exactly the structures with P = P0
    GlobalOperation identity{{1}, 1, [](int n) {
                                 return LocalOperation{n, {1}, 1,
                                                       [](const std::vector<ValueSet>& in) {
                                                           return in[0];
                                                       }};
                             }};
    auto ki = class_of_operation(identity);
    for (const auto& s : all_structures(ki.vocabulary, 2))
        CHECK(ki.membership(s) == (s.interpretation("P0") == s.interpretation("P")));
}

TEST_CASE("operation_of_class on the nonempty class") {
    auto g = operation_of_class(oracle_nonempty_p());
    auto f = g.local(2);
    CHECK(f.apply({{{0}}}) == ValueSet{{0}, {1}});
    CHECK(f.apply({{}}) == ValueSet{});
}

TEST_CASE("invariance transfer, both translations (sizes <= 3)") {
    // operation -> class: bijection-invariant iff isomorphism closed
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 12; ++trial) {
        // random global operation given by a per-size table over masks
        bool pin_element = trial % 3 == 0;
        auto g = GlobalOperation{
            {1}, 1, [pin_element, salt = rng()](int n) {
                return LocalOperation{
                    n, {1}, 1, [pin_element, salt, n](const std::vector<ValueSet>& in) {
                        if (pin_element) {
                            ValueSet out = in[0];
                            if (n >= 2)
                                out.insert({n - 1});
                            return out;
                        }
                        // cardinality-driven rule: invariant by construction
                        std::size_t c = (in[0].size() + std::size_t(salt % 3)) % 3;
                        ValueSet out;
                        if (c != 1)
                            for (int e = 0; e < n; ++e)
                                out.insert({e});
                        return out;
                    }};
            }};
        bool op_invariant = is_bijection_invariant(g, 3).invariant;
        bool class_closed = !check_isomorphism_closed(class_of_operation(g), 3).has_value();
        CHECK(op_invariant == class_closed);
    }

    // class -> operation: isomorphism closed iff bijection-invariant
    std::vector<ClassOracle> oracles{oracle_nonempty_p(), oracle_even_p(), oracle_even_size(),
                                     oracle_all(), oracle_empty()};
    ClassOracle leaky{"leaky", Vocabulary::of({{"P", 1}}),
                      [](const Structure& s) { return s.interpretation("P").contains({0}); }};
    oracles.push_back(leaky);
    for (const auto& k : oracles) {
        bool closed = !check_isomorphism_closed(k, 3).has_value();
        bool invariant = is_bijection_invariant(operation_of_class(k), 3).invariant;
        CHECK(closed == invariant);
    }
}

TEST_CASE("described operations define their class by the biconditional sentence") {
    struct Pair {
        const char* formula;
        GlobalOperation op;
    };
    std::vector<Pair> pairs{
        {"P0(x) & P1(x)", GlobalOperation::intersection(1)},
        {"P0(x) | P1(x)", GlobalOperation::union_of(1)},
        {"!P0(x)", GlobalOperation::complement(1)},
        {"exists y. P0(x,y)", GlobalOperation::projection(2)},
    };
    for (auto& [text, op] : pairs) {
        auto phi = parse_formula(text);
        for (int n = 1; n <= 3; ++n)
            REQUIRE(describes(phi, op.local(n), std::holds_alternative<RelNode>(phi->node) ||
                                                        op.input_arities.size() == 1
                                                    ? std::vector<std::string>{"P0"}
                                                    : std::vector<std::string>{"P0", "P1"})
                        .describes);

        // (1) -> (2): forall x. (P(x) <-> phi) defines K_f at each size
        auto k = class_of_operation(op);
        auto defining = mk_forall("x", mk_iff(mk_rel("P", {"x"}), phi));
        Evaluator ev(defining);
        for (int n = 1; n <= 2; ++n)
            for (const auto& s : all_structures(k.vocabulary, n))
                CHECK(ev.sentence(s) == k.membership(s));

        // (2) -> (3): the existential and complemented-universal expansion
        // forms have the same semantic value, namely the operation itself
        Vocabulary inputs_only(
            std::vector<Symbol>(k.vocabulary.symbols().begin(),
                                k.vocabulary.symbols().end() - 1));
        Vocabulary hidden = Vocabulary::of({k.vocabulary.symbols().back()});
        for (int n = 1; n <= 2; ++n) {
            for (const auto& s : all_structures(inputs_only, n)) {
                std::vector<ValueSet> in;
                for (std::size_t i = 0; i < inputs_only.size(); ++i) {
                    auto ts = s.interpretation(i).tuples();
                    in.emplace_back(ts.begin(), ts.end());
                }
                ValueSet expected = op.local(n).apply(in);
                for (int e = 0; e < n; ++e) {
                    Tuple a{e};
                    bool exists_form = false, forall_form = true;
                    for (const auto& ext : all_expansions(s, hidden)) {
                        bool def = ev.sentence(ext);
                        bool has = ext.interpretation("P").contains(a);
                        exists_form = exists_form || (def && has);
                        forall_form = forall_form && (!def || has);
                    }
                    CHECK(exists_form == forall_form);
                    CHECK(exists_form == (expected.count(a) > 0));
                }
            }
        }
    }
}

TEST_CASE("operation tables: parse, defaults, invariance") {
    std::string text =
        "op glue\n"
        "size 2\n"
        "inputs 1\n"
        "output 1\n"
        "entry (0) => (0)\n"
        "entry (1) => (1)\n"
        "entry (0); (1) => (0); (1)\n";
    auto f = parse_operation_table(text);
    CHECK(f.domain_size == 2);
    CHECK(f.apply({{{0}}}) == ValueSet{{0}});
    CHECK(f.apply({{}}) == ValueSet{});  // unlisted entry defaults to empty

    CHECK(is_permutation_invariant(f).invariant);

    auto bad = parse_operation_table(
        "op bias\nsize 2\ninputs 1\noutput 1\nentry - => (0)\n");
    auto report = is_permutation_invariant(bad);
    REQUIRE_FALSE(report.invariant);
    CHECK(replay_counterexample(bad, *report.counterexample));

    CHECK_THROWS_AS(parse_operation_table("size 2\n"), ParseError);
    CHECK_THROWS_AS(parse_operation_table(
                        "op x\nsize 2\ninputs 1\noutput 1\nentry (0) | (1) => -\n"),
                    ParseError);
}

TEST_CASE("invariance scan budget") {
    CHECK_THROWS_AS(is_permutation_invariant(LocalOperation::intersection(3, 2), 1000),
                    BudgetError);
}
