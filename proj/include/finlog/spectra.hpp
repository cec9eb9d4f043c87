#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finlog/definability.hpp"
#include "finlog/eval.hpp"

namespace finlog {

/// A decidable class of sizes: everything, an explicit finite set, an
/// interval (possibly unbounded above), or a residue class.
class SizeClass {
public:
    static SizeClass all();
    static SizeClass explicit_set(std::set<int> sizes);
    static SizeClass interval(int lo, std::optional<int> hi);
    static SizeClass residue(int modulus, int remainder);
    static SizeClass even();
    static SizeClass odd();

    /// Text forms: "all", "{1,2,3}", "2..5", "3..", "even", "odd",
    /// "mod 3 = 1".
    static SizeClass parse(const std::string& text);

    bool contains(int n) const;
    /// True when the class has no element above max, so a scan up to max is
    /// conclusive about the whole class.
    bool exhausted_by(int max) const;
    std::string to_string() const;

private:
    enum class Kind { All, Explicit, Interval, Residue };
    Kind kind_ = Kind::All;
    std::set<int> set_;
    int lo_ = 1;
    std::optional<int> hi_;
    int modulus_ = 2, remainder_ = 0;
};

struct SpectrumReport {
    std::string subject;  // rendered sentence or oracle name
    int max_size = 0;
    std::vector<int> realized;                     // sizes with at least one model
    std::map<int, std::uint64_t> model_counts;     // exact, per size
    std::map<int, std::uint64_t> class_counts;     // isomorphism classes, per size
};

/// Exact model and isomorphism-class counts per size over 1..max_size. The
/// vocabulary defaults to the formula's inferred one.
SpectrumReport spectrum(const FormulaPtr& sentence, const Vocabulary& v, int max_size,
                        const EvalEnv& env = {}, std::uint64_t budget = kDefaultBudget);
SpectrumReport spectrum(const FormulaPtr& sentence, int max_size, const EvalEnv& env = {},
                        std::uint64_t budget = kDefaultBudget);
SpectrumReport spectrum(const ClassOracle& k, int max_size,
                        std::uint64_t budget = kDefaultBudget);
/// Spectrum of a projection definition (expansion-search membership).
SpectrumReport spectrum(const ProjectionDefinition& d, int max_size, const EvalEnv& env = {},
                        std::uint64_t budget = kDefaultBudget);

/// Least size in 1..max_size with a model; absent is inconclusive about
/// larger sizes.
std::optional<int> min_model_size(const FormulaPtr& sentence, const Vocabulary& v, int max_size,
                                  const EvalEnv& env = {},
                                  std::uint64_t budget = kDefaultBudget);
std::optional<int> min_model_size(const FormulaPtr& sentence, int max_size,
                                  const EvalEnv& env = {},
                                  std::uint64_t budget = kDefaultBudget);

enum class LsVerdict { Holds, Vacuous, FailsInRange, Inconclusive };
const char* to_string(LsVerdict v);

struct LsReport {
    struct PerSentence {
        std::string sentence;
        LsVerdict verdict;
        std::vector<int> realized;
    };
    std::vector<PerSentence> results;
};

/// Finite-window Loewenheim-Skolem check: a sentence with a model of a size
/// in C should have one of a size in D. FailsInRange needs D to be exhausted
/// by the window; otherwise a missing D-model is Inconclusive.
LsReport ls_check(const std::vector<FormulaPtr>& sentences, const Vocabulary& v,
                  const SizeClass& c, const SizeClass& d, int max_size,
                  const EvalEnv& env = {}, std::uint64_t budget = kDefaultBudget);

/// "There are exactly n elements", in plain counting terms.
FormulaPtr exactly_n_elements(int n);

/// Equicardinality-quantifier sentences over one binary symbol whose intended
/// spectra live on infinite cardinals (limit vs. successor); at finite sizes
/// the first is unsatisfiable and the second holds on every linear order.
/// Shipped as corpus exercises for the parser and evaluator.
FormulaPtr phi_limit_order(const std::string& order_symbol = "R");
FormulaPtr phi_successor_order(const std::string& order_symbol = "R");

}  // namespace finlog
