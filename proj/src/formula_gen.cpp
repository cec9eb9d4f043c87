#include "finlog/formula_gen.hpp"

#include <algorithm>

#include "finlog/errors.hpp"

namespace finlog {

namespace {

int pick(std::mt19937_64& rng, int bound) {
    return int(rng() % std::uint64_t(bound));
}

std::string pick_var(std::mt19937_64& rng, const GenOptions& o) {
    return o.variables[std::size_t(pick(rng, int(o.variables.size())))];
}

FormulaPtr atom(std::mt19937_64& rng, const GenOptions& o) {
    int choices = int(o.vocabulary.size()) + 2;  // relations, equality, constant
    int c = pick(rng, choices);
    if (c < int(o.vocabulary.size())) {
        const Symbol& sym = o.vocabulary.symbols()[std::size_t(c)];
        std::vector<std::string> args;
        for (int i = 0; i < sym.arity; ++i)
            args.push_back(pick_var(rng, o));
        return mk_rel(sym.name, args);
    }
    if (c == int(o.vocabulary.size()))
        return mk_equal(pick_var(rng, o), pick_var(rng, o));
    return mk_bool(pick(rng, 2) == 0);
}

}  // namespace

FormulaPtr random_formula(std::mt19937_64& rng, const GenOptions& o, int depth) {
    if (depth >= o.max_depth)
        return atom(rng, o);

    enum Kind {
        Atom, NotK, AndK, OrK, ImpliesK, IffK, BigK,
        ExistsK, ForallK, CountK, SchematicK, HartigK, RescherK, WellOrderK, OracleK,
    };
    std::vector<Kind> kinds{Atom, Atom, NotK, AndK, OrK, ImpliesK, IffK, ExistsK, ForallK};
    if (o.with_big_connectives)
        kinds.push_back(BigK);
    if (o.with_counting)
        kinds.push_back(CountK);
    if (o.with_schematic_q)
        kinds.push_back(SchematicK);
    if (o.with_hartig)
        kinds.push_back(HartigK);
    if (o.with_rescher)
        kinds.push_back(RescherK);
    if (o.with_well_order)
        kinds.push_back(WellOrderK);
    if (!o.oracles.empty())
        kinds.push_back(OracleK);

    switch (kinds[std::size_t(pick(rng, int(kinds.size())))]) {
        case Atom:
            return atom(rng, o);
        case NotK:
            return mk_not(random_formula(rng, o, depth + 1));
        case AndK:
            return mk_and(random_formula(rng, o, depth + 1), random_formula(rng, o, depth + 1));
        case OrK:
            return mk_or(random_formula(rng, o, depth + 1), random_formula(rng, o, depth + 1));
        case ImpliesK:
            return mk_implies(random_formula(rng, o, depth + 1),
                              random_formula(rng, o, depth + 1));
        case IffK:
            return mk_iff(random_formula(rng, o, depth + 1), random_formula(rng, o, depth + 1));
        case BigK: {
            int parts = 1 + pick(rng, 3);
            std::vector<FormulaPtr> ps;
            for (int i = 0; i < parts; ++i)
                ps.push_back(random_formula(rng, o, depth + 1));
            return pick(rng, 2) == 0 ? mk_big_and(std::move(ps)) : mk_big_or(std::move(ps));
        }
        case ExistsK:
            return mk_exists(pick_var(rng, o), random_formula(rng, o, depth + 1));
        case ForallK:
            return mk_forall(pick_var(rng, o), random_formula(rng, o, depth + 1));
        case CountK:
            return mk_count_at_least(1 + pick(rng, o.max_count_threshold), pick_var(rng, o),
                                     random_formula(rng, o, depth + 1));
        case SchematicK:
            return mk_schematic_q(pick_var(rng, o), random_formula(rng, o, depth + 1));
        case HartigK:
            return mk_hartig(pick_var(rng, o), pick_var(rng, o),
                             random_formula(rng, o, depth + 1),
                             random_formula(rng, o, depth + 1));
        case RescherK:
            return mk_rescher(pick_var(rng, o), pick_var(rng, o),
                              random_formula(rng, o, depth + 1),
                              random_formula(rng, o, depth + 1));
        case WellOrderK: {
            auto x = pick_var(rng, o);
            auto y = pick_var(rng, o);
            if (x == y)
                y = x == o.variables[0] ? o.variables[1] : o.variables[0];
            return mk_well_order(x, y, random_formula(rng, o, depth + 1));
        }
        case OracleK: {
            const auto& [name, arity] =
                o.oracles[std::size_t(pick(rng, int(o.oracles.size())))];
            if (arity > int(o.variables.size()))
                return atom(rng, o);
            auto vars = o.variables;
            std::shuffle(vars.begin(), vars.end(), rng);
            vars.resize(std::size_t(arity));
            return mk_oracle_q(name, vars, random_formula(rng, o, depth + 1));
        }
    }
    return atom(rng, o);
}

FormulaPtr random_sentence(std::mt19937_64& rng, const GenOptions& o) {
    auto f = random_formula(rng, o, 0);
    while (!f->free_ids.empty()) {
        const std::string& v = var_name(f->free_ids.front());
        f = pick(rng, 2) == 0 ? mk_exists(v, std::move(f)) : mk_forall(v, std::move(f));
    }
    return f;
}

std::vector<FormulaPtr> sentence_corpus(std::uint64_t seed, const GenOptions& o,
                                        std::size_t count, bool cover_quantifiers) {
    std::vector<FormulaPtr> out;
    if (cover_quantifiers && !o.vocabulary.empty()) {
        const Symbol& sym = o.vocabulary.symbols()[0];
        auto base_at = [&](const std::string& v) {
            return mk_rel(sym.name, std::vector<std::string>(std::size_t(sym.arity), v));
        };
        auto base_x = base_at("x");
        out.push_back(mk_exists("x", base_x));
        out.push_back(mk_forall("x", base_x));
        if (o.with_counting)
            out.push_back(mk_count_at_least(2, "x", base_x));
        if (o.with_schematic_q)
            out.push_back(mk_schematic_q("x", base_x));
        if (o.with_hartig)
            out.push_back(mk_hartig("x", "y", base_x, base_at("y")));
        if (o.with_rescher)
            out.push_back(mk_rescher("x", "y", base_x, base_at("y")));
        if (o.with_well_order)
            out.push_back(mk_well_order("x", "y", sym.arity == 2
                                                      ? mk_rel(sym.name, {"x", "y"})
                                                      : mk_and(base_x, mk_equal("x", "y"))));
        for (const auto& [name, arity] : o.oracles) {
            if (arity <= int(o.variables.size())) {
                std::vector<std::string> vars(o.variables.begin(),
                                              o.variables.begin() + arity);
                out.push_back(mk_oracle_q(name, vars, base_at(vars[0])));
            }
        }
    }
    std::mt19937_64 rng(seed);
    while (out.size() < count)
        out.push_back(random_sentence(rng, o));
    return out;
}

}  // namespace finlog
