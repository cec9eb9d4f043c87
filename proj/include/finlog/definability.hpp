#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finlog/eval.hpp"
#include "finlog/formula.hpp"
#include "finlog/structure.hpp"

namespace finlog {

/// Auxiliary binary order symbol adjoined by the characterizing-sentence
/// constructions. Barred from user vocabularies.
inline constexpr const char* kOrderSymbol = "$ord";

inline constexpr int kDefaultOrdinalCap = 64;

/// Builder for the order-characterizing formulas; the instances for one pool
/// share subformulas, so evaluation memoization applies across them.
class EtaPool {
public:
    explicit EtaPool(int cap = kDefaultOrdinalCap) : cap_(cap) {}

    /// eta_alpha(var): over a linear order, holds of a point with exactly
    /// alpha predecessors (the predecessors ordered like alpha).
    FormulaPtr at(int alpha, const std::string& var = "x");

    /// eta'_alpha: the whole order has type alpha.
    FormulaPtr prime(int alpha);

private:
    void grow(int alpha);

    int cap_;
    // alternating bound variables keep the instances shared: entries with
    // free variable "x" bind "y" and vice versa
    std::vector<FormulaPtr> eta_x_, eta_y_;
    std::map<std::pair<int, std::string>, FormulaPtr> tops_;
};

/// Empty big connectives follow the usual conventions (empty disjunction =
/// false, empty conjunction = true), collapsed at construction.
FormulaPtr eta(int alpha, const std::string& var = "x", int cap = kDefaultOrdinalCap);
FormulaPtr eta_prime(int alpha, int cap = kDefaultOrdinalCap);

struct CharacterizingSentence {
    Structure target;
    FormulaPtr phi;           // the atomic-diagram transcription Phi
    std::string order_symbol;  // kOrderSymbol
};

/// Phi for the structure as enumerated by f: together with eta'_n it pins the
/// structure down to isomorphism. (enumeration(i) is the element listed i-th;
/// the adjoined order sorts the domain in enumeration order.)
CharacterizingSentence characterizing_phi(const Structure& s, const Bijection& enumeration,
                                          int cap = kDefaultOrdinalCap);

struct ProjectionDefinition {
    Vocabulary full;
    Vocabulary visible;  // subset of full
    FormulaPtr sentence;
};

/// Both halves of the per-size definition of a model class: the members'
/// projection definition and the complement's, plus the raw disjunctions and
/// the universal-form sentences for the two-sided expansion reading.
struct SizeDefinition {
    int size = 0;
    ProjectionDefinition members;
    ProjectionDefinition complement;
    FormulaPtr theta_members;
    FormulaPtr theta_complement;
    FormulaPtr members_universal;     // eta'_n -> theta_members
    FormulaPtr complement_universal;  // eta'_n -> theta_complement
    std::vector<Structure> representatives;  // one per isomorphism class, enumeration order
    std::vector<bool> representative_in_class;
};

/// One characterizing disjunct per isomorphism-class representative of the
/// class at the given size; sound because the disjuncts are isomorphism
/// invariant. An oracle that disagrees within an isomorphism class is a hard
/// configuration error.
SizeDefinition define_class_at_size(const ClassOracle& k, int size,
                                    std::uint64_t budget = kDefaultBudget,
                                    int cap = kDefaultOrdinalCap);

/// Expansion-search membership: true iff some expansion of s to the full
/// vocabulary satisfies the sentence.
bool sigma_membership(const ProjectionDefinition& d, const Structure& s,
                      const EvalEnv& env = {}, std::uint64_t budget = kDefaultBudget);

/// Reusable expansion-search checker (one evaluator for many structures).
class SigmaChecker {
public:
    SigmaChecker(const ProjectionDefinition& d, EvalEnv env = {});
    bool member(const Structure& s, std::uint64_t budget = kDefaultBudget) const;

private:
    Vocabulary visible_;
    Vocabulary hidden_;
    Evaluator evaluator_;
};

struct DeltaViolation {
    Structure structure;
    bool pos_accepts;
    bool neg_accepts;
};

struct DeltaReport {
    bool certified = false;
    int max_size = 0;
    std::uint64_t structures_checked = 0;
    std::vector<DeltaViolation> violations;  // enumeration order, sizes ascending
};

/// Certifies a Delta-pair over all structures of size 1..max_size: exactly
/// one of pos/neg must accept each structure.
DeltaReport delta_check(const ProjectionDefinition& pos, const ProjectionDefinition& neg,
                        int max_size, const EvalEnv& env = {},
                        std::uint64_t budget = kDefaultBudget);

}  // namespace finlog
