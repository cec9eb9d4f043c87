#include "finlog/definability.hpp"

#include <algorithm>

#include "finlog/errors.hpp"

namespace finlog {

namespace {

FormulaPtr ord_atom(const std::string& smaller, const std::string& larger) {
    return mk_rel(kOrderSymbol, {smaller, larger});
}

void reject_order_symbol(const Vocabulary& v, const char* where) {
    if (v.contains(kOrderSymbol))
        throw VocabularyError(std::string(where) + ": vocabulary already contains " +
                              kOrderSymbol);
}

}  // namespace

void EtaPool::grow(int alpha) {
    if (alpha > cap_)
        throw BudgetError("ordinal " + std::to_string(alpha) + " beyond the size cap " +
                              std::to_string(cap_),
                          std::uint64_t(alpha), std::uint64_t(cap_));
    // eta_x[b] has free variable x, binds y, and refers to eta_y[g] for g < b;
    // the mirrored family swaps the roles, so every instance is shared.
    while (int(eta_x_.size()) <= alpha) {
        int b = int(eta_x_.size());
        auto build = [&](const std::string& free_v, const std::string& bound_v,
                         const std::vector<FormulaPtr>& inner) -> FormulaPtr {
            if (b == 0)
                return mk_forall(bound_v, mk_implies(ord_atom(bound_v, free_v), mk_false()));
            std::vector<FormulaPtr> below(inner.begin(), inner.begin() + b);
            auto bound_part = mk_forall(
                bound_v, mk_implies(ord_atom(bound_v, free_v),
                                    below.size() == 1 ? below[0] : mk_big_or(below)));
            std::vector<FormulaPtr> witnesses;
            for (int g = 0; g < b; ++g)
                witnesses.push_back(
                    mk_exists(bound_v, mk_and(ord_atom(bound_v, free_v), inner[g])));
            auto witness_part = witnesses.size() == 1 ? witnesses[0]
                                                      : mk_big_and(std::move(witnesses));
            return mk_and(std::move(bound_part), std::move(witness_part));
        };
        eta_x_.push_back(build("x", "y", eta_y_));
        eta_y_.push_back(build("y", "x", eta_x_));
    }
}

FormulaPtr EtaPool::at(int alpha, const std::string& var) {
    grow(alpha);
    if (var == "x")
        return eta_x_[std::size_t(alpha)];
    if (var == "y")
        return eta_y_[std::size_t(alpha)];
    auto key = std::make_pair(alpha, var);
    if (auto it = tops_.find(key); it != tops_.end())
        return it->second;
    // free variable `var`, bound variable y; the inner instances come from
    // the shared y-family
    FormulaPtr top;
    if (alpha == 0) {
        top = mk_forall("y", mk_implies(ord_atom("y", var), mk_false()));
    } else {
        std::vector<FormulaPtr> below(eta_y_.begin(), eta_y_.begin() + alpha);
        auto bound_part = mk_forall(
            "y", mk_implies(ord_atom("y", var),
                            below.size() == 1 ? below[0] : mk_big_or(below)));
        std::vector<FormulaPtr> witnesses;
        for (int g = 0; g < alpha; ++g)
            witnesses.push_back(mk_exists("y", mk_and(ord_atom("y", var), eta_y_[g])));
        top = mk_and(bound_part,
                     witnesses.size() == 1 ? witnesses[0] : mk_big_and(std::move(witnesses)));
    }
    tops_.emplace(key, top);
    return top;
}

FormulaPtr EtaPool::prime(int alpha) {
    grow(alpha);
    if (alpha == 0)
        return mk_forall("y", mk_false());
    std::vector<FormulaPtr> below(eta_y_.begin(), eta_y_.begin() + alpha);
    auto cover = mk_forall("y", below.size() == 1 ? below[0] : mk_big_or(below));
    std::vector<FormulaPtr> witnesses;
    for (int g = 0; g < alpha; ++g)
        witnesses.push_back(mk_exists("y", eta_y_[g]));
    return mk_and(std::move(cover),
                  witnesses.size() == 1 ? witnesses[0] : mk_big_and(std::move(witnesses)));
}

FormulaPtr eta(int alpha, const std::string& var, int cap) {
    EtaPool pool(cap);
    return pool.at(alpha, var);
}

FormulaPtr eta_prime(int alpha, int cap) {
    EtaPool pool(cap);
    return pool.prime(alpha);
}

namespace {

CharacterizingSentence characterizing_phi_pooled(const Structure& s,
                                                 const Bijection& enumeration, EtaPool& pool) {
    if (s.size() < 1)
        throw DimensionError("characterizing sentence needs a non-empty structure");
    if (enumeration.size() != s.size())
        throw DimensionError("enumeration bijection size does not match the structure");
    reject_order_symbol(s.vocabulary(), "characterizing sentence");

    int n = s.size();
    std::vector<FormulaPtr> blocks;
    for (std::size_t sym_i = 0; sym_i < s.vocabulary().size(); ++sym_i) {
        const Symbol& sym = s.vocabulary().symbols()[sym_i];
        const auto& interp = s.interpretation(sym_i);
        int r = sym.arity;
        if (r == 0) {
            auto atom = mk_rel(sym.name, {});
            blocks.push_back(interp.contains({}) ? atom : mk_not(atom));
            continue;
        }
        std::vector<std::string> vars;
        for (int i = 0; i < r; ++i)
            vars.push_back("x" + std::to_string(i + 1));
        // one conjunct per index tuple: the guard pins each variable to the
        // position given by the enumeration, the conclusion copies the atomic
        // diagram
        std::vector<FormulaPtr> conjuncts;
        Tuple indices(std::size_t(r), 0);
        while (true) {
            Tuple elements(std::size_t(r), 0);
            for (int i = 0; i < r; ++i)
                elements[std::size_t(i)] = enumeration(indices[std::size_t(i)]);
            auto atom = mk_rel(sym.name, vars);
            FormulaPtr conclusion = interp.contains(elements) ? atom : mk_not(atom);
            FormulaPtr guard;
            if (r == 1) {
                guard = pool.at(indices[0], vars[0]);
            } else if (r == 2) {
                guard = mk_and(pool.at(indices[0], vars[0]), pool.at(indices[1], vars[1]));
            } else {
                std::vector<FormulaPtr> parts;
                for (int i = 0; i < r; ++i)
                    parts.push_back(pool.at(indices[std::size_t(i)], vars[std::size_t(i)]));
                guard = mk_big_and(std::move(parts));
            }
            conjuncts.push_back(mk_implies(std::move(guard), std::move(conclusion)));
            // next index tuple, last position fastest
            bool done = true;
            for (std::size_t i = indices.size(); i-- > 0;) {
                if (++indices[i] < n) {
                    done = false;
                    break;
                }
                indices[i] = 0;
            }
            if (done)
                break;
        }
        FormulaPtr body = conjuncts.size() == 1 ? conjuncts[0]
                                                : mk_big_and(std::move(conjuncts));
        for (int i = r; i-- > 0;)
            body = mk_forall(vars[std::size_t(i)], std::move(body));
        blocks.push_back(std::move(body));
    }
    FormulaPtr phi;
    if (blocks.empty())
        phi = mk_true();
    else if (blocks.size() == 1)
        phi = blocks[0];
    else
        phi = mk_big_and(std::move(blocks));
    return CharacterizingSentence{s, std::move(phi), kOrderSymbol};
}

}  // namespace

CharacterizingSentence characterizing_phi(const Structure& s, const Bijection& enumeration,
                                          int cap) {
    EtaPool pool(cap);
    return characterizing_phi_pooled(s, enumeration, pool);
}

SizeDefinition define_class_at_size(const ClassOracle& k, int size, std::uint64_t budget,
                                    int cap) {
    if (size < 1)
        throw DimensionError("per-size definition needs size >= 1");
    reject_order_symbol(k.vocabulary, "per-size definition");

    // bucket by isomorphism class; the oracle must answer uniformly inside
    // each class
    std::map<Structure, bool> classes;  // canonical form -> member
    std::vector<Structure> reps;
    std::vector<bool> rep_member;
    std::vector<std::pair<Structure, bool>> everyone;
    StructureEnumerator en(k.vocabulary, size, budget);
    Structure s(k.vocabulary, size);
    while (en.next(s)) {
        bool member = k.membership(s);
        everyone.emplace_back(s, member);
        Structure canon = canonical_form(s);
        auto it = classes.find(canon);
        if (it == classes.end()) {
            classes.emplace(std::move(canon), member);
            reps.push_back(s);
            rep_member.push_back(member);
        } else if (it->second != member) {
            throw ConfigError("class oracle '" + k.name +
                              "' is not isomorphism closed: it answers differently inside "
                              "one isomorphism class at size " +
                              std::to_string(size));
        }
    }

    // The disjunction runs over every member at this size, not just class
    // representatives: each disjunct fixes the atomic diagram relative to the
    // adjoined order, so dropping order-variants would break the universal
    // expansion form.
    EtaPool pool(cap);
    std::vector<FormulaPtr> member_phis, complement_phis;
    for (const auto& [structure, member] : everyone) {
        auto phi = characterizing_phi_pooled(structure, Bijection::identity(size), pool).phi;
        (member ? member_phis : complement_phis).push_back(std::move(phi));
    }
    auto disjunction = [](std::vector<FormulaPtr> parts) -> FormulaPtr {
        if (parts.empty())
            return mk_false();
        if (parts.size() == 1)
            return parts[0];
        return mk_big_or(std::move(parts));
    };
    FormulaPtr theta_members = disjunction(std::move(member_phis));
    FormulaPtr theta_complement = disjunction(std::move(complement_phis));
    FormulaPtr order_shape = pool.prime(size);

    Vocabulary full = k.vocabulary.extended_with(Vocabulary::of({{kOrderSymbol, 2}}));
    SizeDefinition out;
    out.size = size;
    out.members = ProjectionDefinition{full, k.vocabulary,
                                       mk_and(order_shape, theta_members)};
    out.complement = ProjectionDefinition{full, k.vocabulary,
                                          mk_and(order_shape, theta_complement)};
    out.theta_members = theta_members;
    out.theta_complement = theta_complement;
    out.members_universal = mk_implies(order_shape, theta_members);
    out.complement_universal = mk_implies(order_shape, theta_complement);
    out.representatives = std::move(reps);
    out.representative_in_class = std::move(rep_member);
    return out;
}

SigmaChecker::SigmaChecker(const ProjectionDefinition& d, EvalEnv env)
    : visible_(d.visible),
      hidden_([&] {
          if (!d.visible.subset_of(d.full))
              throw VocabularyError("visible vocabulary is not a subset of the full one");
          std::vector<Symbol> extra;
          for (const auto& sym : d.full.symbols())
              if (!d.visible.contains(sym.name))
                  extra.push_back(sym);
          return Vocabulary(std::move(extra));
      }()),
      evaluator_(d.sentence, std::move(env)) {}

bool SigmaChecker::member(const Structure& s, std::uint64_t budget) const {
    if (s.vocabulary() != visible_)
        throw VocabularyError("structure vocabulary does not match the visible vocabulary");
    ExpansionEnumerator en(s, hidden_, budget);
    Structure e(s.vocabulary(), 0);
    while (en.next(e))
        if (evaluator_.sentence(e))
            return true;
    return false;
}

bool sigma_membership(const ProjectionDefinition& d, const Structure& s, const EvalEnv& env,
                      std::uint64_t budget) {
    return SigmaChecker(d, env).member(s, budget);
}

DeltaReport delta_check(const ProjectionDefinition& pos, const ProjectionDefinition& neg,
                        int max_size, const EvalEnv& env, std::uint64_t budget) {
    if (pos.visible != neg.visible)
        throw VocabularyError("delta check needs a common visible vocabulary");
    SigmaChecker p(pos, env), q(neg, env);
    DeltaReport report;
    report.max_size = max_size;
    for (int n = 1; n <= max_size; ++n) {
        StructureEnumerator en(pos.visible, n, budget);
        Structure s(pos.visible, n);
        while (en.next(s)) {
            ++report.structures_checked;
            bool a = p.member(s, budget);
            bool b = q.member(s, budget);
            if (a == b)
                report.violations.push_back(DeltaViolation{s, a, b});
        }
    }
    report.certified = report.violations.empty();
    return report;
}

}  // namespace finlog
