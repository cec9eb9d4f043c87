#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "finlog/vocabulary.hpp"

namespace finlog {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Global variable-name interner. Nodes store variable ids; evaluation
/// assignments are flat arrays indexed by id.
int intern_var(const std::string& name);
std::string var_name(int id);

struct BoolNode {
    bool value;
};
struct RelNode {
    std::string symbol;
    std::vector<int> args;
};
struct EqualNode {
    int lhs;
    int rhs;
};
struct NotNode {
    FormulaPtr sub;
};
enum class Conn { And, Or, Implies, Iff };
struct BinaryNode {
    Conn op;
    FormulaPtr lhs;
    FormulaPtr rhs;
};
/// Finite explicit conjunction/disjunction, the finitary fragment of the
/// infinitary connectives. The part list is never empty.
struct BigNode {
    bool conjunction;
    std::vector<FormulaPtr> parts;
};
struct QuantNode {
    bool universal;
    int var;
    FormulaPtr body;
};
/// "At least k witnesses"; a missing threshold is the schematic Q, bound to a
/// concrete threshold at evaluation time.
struct CountNode {
    std::optional<int> threshold;
    int var;
    FormulaPtr body;
};
/// I (equal = true) and J (equal = false): |left-set| == / >= |right-set|.
struct CompareQNode {
    bool equal;
    int left_var;
    int right_var;
    FormulaPtr left;
    FormulaPtr right;
};
struct WellOrderNode {
    int left_var;
    int right_var;
    FormulaPtr body;
};
/// Q_K: the relation defined by the body, together with the domain, must lie
/// in the named model class.
struct OracleQNode {
    std::string oracle;
    std::vector<int> vars;
    FormulaPtr body;
};

using FormulaNode = std::variant<BoolNode, RelNode, EqualNode, NotNode, BinaryNode, BigNode,
                                 QuantNode, CountNode, CompareQNode, WellOrderNode, OracleQNode>;

class Formula {
public:
    Formula(FormulaNode node, std::vector<int> free_ids)
        : node(std::move(node)), free_ids(std::move(free_ids)) {}

    FormulaNode node;
    std::vector<int> free_ids;  // sorted, deduplicated

    bool is_sentence() const { return free_ids.empty(); }
};

FormulaPtr mk_bool(bool value);
FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_rel(const std::string& symbol, const std::vector<std::string>& vars);
FormulaPtr mk_equal(const std::string& lhs, const std::string& rhs);
FormulaPtr mk_not(FormulaPtr sub);
FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_iff(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_big_and(std::vector<FormulaPtr> parts);
FormulaPtr mk_big_or(std::vector<FormulaPtr> parts);
FormulaPtr mk_exists(const std::string& var, FormulaPtr body);
FormulaPtr mk_forall(const std::string& var, FormulaPtr body);
FormulaPtr mk_count_at_least(int threshold, const std::string& var, FormulaPtr body);
FormulaPtr mk_schematic_q(const std::string& var, FormulaPtr body);
FormulaPtr mk_hartig(const std::string& x, const std::string& y, FormulaPtr left,
                     FormulaPtr right);
FormulaPtr mk_rescher(const std::string& x, const std::string& y, FormulaPtr left,
                      FormulaPtr right);
FormulaPtr mk_well_order(const std::string& x, const std::string& y, FormulaPtr body);
FormulaPtr mk_oracle_q(const std::string& oracle, const std::vector<std::string>& vars,
                       FormulaPtr body);

/// Structural equality; alpha-equivalent formulas with different variable
/// names are NOT equal.
bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

/// Concrete syntax; parse(render(f)) is structurally equal to f.
std::string render(const Formula& f);
inline std::string render(const FormulaPtr& f) { return render(*f); }

bool is_free_in(const Formula& f, int var);
bool is_free_in(const Formula& f, const std::string& var);

/// Replaces free occurrences of `var` by `replacement` (variables only).
FormulaPtr substitute_free(const FormulaPtr& f, int var, int replacement);

/// True when substituting `replacement` for free `var` captures nothing.
bool is_free_for(const Formula& f, int var, int replacement);

void visit_children(const Formula& f, const std::function<void(const FormulaPtr&)>& fn);

/// Relation symbols with arities taken from their occurrences, in first
/// occurrence order; inconsistent arities raise VocabularyError.
Vocabulary inferred_vocabulary(const Formula& f);

/// Oracle names with the arity of their variable list, first occurrence order.
std::vector<std::pair<std::string, int>> oracle_references(const Formula& f);

/// True when the formula contains a schematic Q node.
bool uses_schematic_q(const Formula& f);

struct WfViolation {
    std::string where;    // rendering of the offending node
    std::string message;
};

/// Empty iff every relation atom matches the vocabulary, every oracle
/// quantifier matches the supplied arities (when given), and — in sentence
/// mode — no variable occurs free.
std::vector<WfViolation> check_wf(const Formula& f, const Vocabulary& v,
                                  bool require_sentence = false,
                                  const std::vector<std::pair<std::string, int>>* oracle_arities =
                                      nullptr);

}  // namespace finlog
