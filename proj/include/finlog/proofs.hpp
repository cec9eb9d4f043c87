#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "finlog/formula.hpp"
#include "finlog/structure.hpp"

namespace finlog {

/// Recorded schema instantiation: formula metavariables (A, B, C) and
/// variable metavariables (x, y, z, t). Which names mean what is fixed by
/// each schema (docs/axioms.md).
struct MetaSubst {
    std::map<std::string, FormulaPtr> formulas;
    std::map<std::string, std::string> variables;

    std::string to_string() const;
};

struct Premise {
    int index;  // 1-based into the declared premise list
};
struct FoAxiom {
    std::string schema;  // e.g. "P1", "UI", "EQSUB"
    std::optional<MetaSubst> subst;  // absent: search for a match
};
struct KeislerAxiom {
    int index;  // 1..4
    std::optional<MetaSubst> subst;
};
struct ModusPonens {
    int antecedent;   // line holding A
    int implication;  // line holding A -> B
};
struct Generalization {
    int from;
    std::string var;
};

using Justification = std::variant<Premise, FoAxiom, KeislerAxiom, ModusPonens, Generalization>;

struct ProofLine {
    FormulaPtr formula;
    Justification justification;
};

struct Proof {
    std::vector<FormulaPtr> premises;
    std::vector<ProofLine> lines;

    FormulaPtr conclusion() const { return lines.back().formula; }
};

struct CheckResult {
    bool accepted = false;
    int failed_line = 0;  // 1-based; 0 when accepted
    std::string reason;
};

/// Validates every line: premises must match the declared list, axiom lines
/// must instantiate their schema (recorded substitutions are verified, not
/// searched; a missing substitution triggers the bounded matcher), modus
/// ponens must cite earlier lines of the right shapes, and generalization
/// must not bind a variable free in the premises.
CheckResult check_proof(const Proof& p);

/// First Keisler schema (1..4) the formula instantiates, with the witnessing
/// substitution. Purely first-order tautologies are not Keisler instances.
std::optional<std::pair<int, MetaSubst>> match_keisler_axiom(const FormulaPtr& f);

/// Bounded search across the fixed first-order schema list (docs/axioms.md).
/// For the substitution schemas (UI, EI, EQSUB) the search covers the
/// uniform-replacement instances; partial replacements are still checkable
/// with a recorded substitution.
std::optional<std::pair<std::string, MetaSubst>> match_fo_axiom(const FormulaPtr& f);

FormulaPtr instantiate_keisler(int index, const MetaSubst& subst);
FormulaPtr instantiate_fo(const std::string& schema, const MetaSubst& subst);

/// Known first-order schema ids, in match order.
const std::vector<std::string>& fo_schema_ids();

/// Proof file format (docs/file-formats.md):
///   <n>. <formula> ; <justification>
/// with justification one of: premise <i> | ax0 <id> [subst] | ax<1-4>
/// [subst] | mp <i> <j> | gen <i> <var>, and [subst] like
/// [A := P(x); x := y]. Line numbers run 1.. in order; '#' starts a comment.
Proof parse_proof(const std::string& text);
std::string format_proof(const Proof& p);

struct SoundnessCex {
    int axiom;
    FormulaPtr instance;  // universally closed
    Structure structure;
};

struct SoundnessReport {
    std::vector<SoundnessCex> counterexamples;
    std::uint64_t instances = 0;
    std::uint64_t evaluations = 0;
};

/// Reads Q as "at least k" and evaluates a deterministic pool of schema
/// instances on every structure of size 1..max_size over each instance's own
/// vocabulary (kept to at most one relation symbol so the scans stay small).
/// Returns every (instance, structure) pair where the instance is false.
SoundnessReport soundness_scan(int k, int max_size, const std::set<int>& axioms,
                               std::uint64_t seed = 1,
                               std::uint64_t budget = kDefaultBudget);

/// The instance pool the scanner uses, for inspection and tests.
std::vector<std::pair<int, FormulaPtr>> soundness_instance_pool(const std::set<int>& axioms,
                                                                std::uint64_t seed = 1);

}  // namespace finlog
