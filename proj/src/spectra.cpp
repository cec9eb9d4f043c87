#include "finlog/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "finlog/errors.hpp"

namespace finlog {

SizeClass SizeClass::all() {
    return SizeClass{};
}

SizeClass SizeClass::explicit_set(std::set<int> sizes) {
    SizeClass c;
    c.kind_ = Kind::Explicit;
    c.set_ = std::move(sizes);
    return c;
}

SizeClass SizeClass::interval(int lo, std::optional<int> hi) {
    if (hi && *hi < lo)
        throw ConfigError("empty size interval");
    SizeClass c;
    c.kind_ = Kind::Interval;
    c.lo_ = lo;
    c.hi_ = hi;
    return c;
}

SizeClass SizeClass::residue(int modulus, int remainder) {
    if (modulus < 1 || remainder < 0 || remainder >= modulus)
        throw ConfigError("residue class needs 0 <= remainder < modulus");
    SizeClass c;
    c.kind_ = Kind::Residue;
    c.modulus_ = modulus;
    c.remainder_ = remainder;
    return c;
}

SizeClass SizeClass::even() {
    return residue(2, 0);
}
SizeClass SizeClass::odd() {
    return residue(2, 1);
}

SizeClass SizeClass::parse(const std::string& text) {
    auto fail = [&]() -> SizeClass {
        throw ConfigError("cannot parse size class '" + text + "'");
    };
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t == "all")
        return all();
    if (t == "even")
        return even();
    if (t == "odd")
        return odd();
    if (!t.empty() && t[0] == '{') {
        if (t.back() != '}')
            return fail();
        std::set<int> sizes;
        std::istringstream in(t.substr(1, t.size() - 2));
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty())
                sizes.insert(std::stoi(item));
        return explicit_set(std::move(sizes));
    }
    if (t.rfind("mod", 0) == 0) {
        auto eq = t.find('=');
        if (eq == std::string::npos)
            return fail();
        return residue(std::stoi(t.substr(3, eq - 3)), std::stoi(t.substr(eq + 1)));
    }
    auto dots = t.find("..");
    if (dots != std::string::npos) {
        int lo = std::stoi(t.substr(0, dots));
        std::string rest = t.substr(dots + 2);
        return interval(lo, rest.empty() ? std::nullopt : std::optional<int>(std::stoi(rest)));
    }
    if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        }))
        return explicit_set({std::stoi(t)});
    return fail();
}

bool SizeClass::contains(int n) const {
    switch (kind_) {
        case Kind::All: return n >= 1;
        case Kind::Explicit: return set_.count(n) > 0;
        case Kind::Interval: return n >= lo_ && (!hi_ || n <= *hi_);
        case Kind::Residue: return n >= 1 && n % modulus_ == remainder_;
    }
    return false;
}

bool SizeClass::exhausted_by(int max) const {
    switch (kind_) {
        case Kind::All: return false;
        case Kind::Explicit: return set_.empty() || *set_.rbegin() <= max;
        case Kind::Interval: return hi_ && *hi_ <= max;
        case Kind::Residue: return false;
    }
    return false;
}

std::string SizeClass::to_string() const {
    switch (kind_) {
        case Kind::All: return "all";
        case Kind::Explicit: {
            std::string out = "{";
            bool first = true;
            for (int n : set_) {
                out += (first ? "" : ",") + std::to_string(n);
                first = false;
            }
            return out + "}";
        }
        case Kind::Interval:
            return std::to_string(lo_) + ".." + (hi_ ? std::to_string(*hi_) : "");
        case Kind::Residue:
            if (modulus_ == 2)
                return remainder_ == 0 ? "even" : "odd";
            return "mod " + std::to_string(modulus_) + " = " + std::to_string(remainder_);
    }
    return "?";
}

namespace {

SpectrumReport scan_spectrum(std::string subject, const Vocabulary& voc, int max_size,
                             std::uint64_t budget,
                             const std::function<bool(const Structure&)>& is_model) {
    SpectrumReport report;
    report.subject = std::move(subject);
    report.max_size = max_size;
    for (int n = 1; n <= max_size; ++n) {
        std::uint64_t models = 0;
        std::set<Structure> classes;
        StructureEnumerator en(voc, n, budget);
        Structure s(voc, n);
        while (en.next(s)) {
            if (!is_model(s))
                continue;
            ++models;
            classes.insert(canonical_form(s));
        }
        report.model_counts[n] = models;
        report.class_counts[n] = classes.size();
        if (models > 0)
            report.realized.push_back(n);
    }
    return report;
}

}  // namespace

SpectrumReport spectrum(const FormulaPtr& sentence, const Vocabulary& v, int max_size,
                        const EvalEnv& env, std::uint64_t budget) {
    Evaluator ev(sentence, env);
    return scan_spectrum(render(sentence), v, max_size, budget,
                         [&](const Structure& s) { return ev.sentence(s); });
}

SpectrumReport spectrum(const FormulaPtr& sentence, int max_size, const EvalEnv& env,
                        std::uint64_t budget) {
    return spectrum(sentence, inferred_vocabulary(*sentence), max_size, env, budget);
}

SpectrumReport spectrum(const ClassOracle& k, int max_size, std::uint64_t budget) {
    return scan_spectrum(k.name, k.vocabulary, max_size, budget,
                         [&](const Structure& s) { return k.membership(s); });
}

SpectrumReport spectrum(const ProjectionDefinition& d, int max_size, const EvalEnv& env,
                        std::uint64_t budget) {
    SigmaChecker checker(d, env);
    return scan_spectrum(render(d.sentence) + " (projected)", d.visible, max_size, budget,
                         [&](const Structure& s) { return checker.member(s, budget); });
}

std::optional<int> min_model_size(const FormulaPtr& sentence, const Vocabulary& v, int max_size,
                                  const EvalEnv& env, std::uint64_t budget) {
    Evaluator ev(sentence, env);
    for (int n = 1; n <= max_size; ++n) {
        StructureEnumerator en(v, n, budget);
        Structure s(v, n);
        while (en.next(s))
            if (ev.sentence(s))
                return n;
    }
    return std::nullopt;
}

std::optional<int> min_model_size(const FormulaPtr& sentence, int max_size, const EvalEnv& env,
                                  std::uint64_t budget) {
    return min_model_size(sentence, inferred_vocabulary(*sentence), max_size, env, budget);
}

const char* to_string(LsVerdict v) {
    switch (v) {
        case LsVerdict::Holds: return "HOLDS";
        case LsVerdict::Vacuous: return "VACUOUS";
        case LsVerdict::FailsInRange: return "FAILS-IN-RANGE";
        case LsVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

LsReport ls_check(const std::vector<FormulaPtr>& sentences, const Vocabulary& v,
                  const SizeClass& c, const SizeClass& d, int max_size, const EvalEnv& env,
                  std::uint64_t budget) {
    LsReport report;
    for (const auto& f : sentences) {
        auto spec = spectrum(f, v, max_size, env, budget);
        bool c_model = false, d_model = false;
        for (int n : spec.realized) {
            c_model = c_model || c.contains(n);
            d_model = d_model || d.contains(n);
        }
        LsVerdict verdict;
        if (!c_model)
            verdict = LsVerdict::Vacuous;
        else if (d_model)
            verdict = LsVerdict::Holds;
        else if (d.exhausted_by(max_size))
            verdict = LsVerdict::FailsInRange;
        else
            verdict = LsVerdict::Inconclusive;
        report.results.push_back({render(f), verdict, spec.realized});
    }
    return report;
}

FormulaPtr exactly_n_elements(int n) {
    if (n < 0)
        throw ConfigError("negative element count");
    if (n == 0)
        return mk_not(mk_count_at_least(1, "x", mk_true()));
    return mk_and(mk_count_at_least(n, "x", mk_true()),
                  mk_not(mk_count_at_least(n + 1, "x", mk_true())));
}

namespace {

FormulaPtr strict_total_order(const std::string& r) {
    auto irr = mk_forall("u", mk_not(mk_rel(r, {"u", "u"})));
    auto trans = mk_forall(
        "u", mk_forall("v", mk_forall("w", mk_implies(mk_and(mk_rel(r, {"u", "v"}),
                                                             mk_rel(r, {"v", "w"})),
                                                      mk_rel(r, {"u", "w"})))));
    auto total = mk_forall(
        "u", mk_forall("v", mk_or(mk_equal("u", "v"),
                                  mk_or(mk_rel(r, {"u", "v"}), mk_rel(r, {"v", "u"})))));
    return mk_and(irr, mk_and(trans, total));
}

// |{u : R(u,x)}| compared against |{v : R(v,y)}|: the initial segments below
// x and y.
FormulaPtr segment_at_least(const std::string& r, const std::string& x, const std::string& y) {
    return mk_rescher("u", "v", mk_rel(r, {"u", x}), mk_rel(r, {"v", y}));
}

}  // namespace

FormulaPtr phi_limit_order(const std::string& r) {
    // every point's segment is strictly smaller than some bigger point's
    auto strictly_smaller = mk_not(segment_at_least(r, "x", "y"));
    auto grows = mk_forall(
        "x", mk_exists("y", mk_and(mk_rel(r, {"x", "y"}), strictly_smaller)));
    return mk_and(strict_total_order(r), grows);
}

FormulaPtr phi_successor_order(const std::string& r) {
    // some point's segment matches every bigger point's segment and is still
    // smaller than the whole universe
    auto same_above = mk_forall(
        "y", mk_implies(mk_rel(r, {"x", "y"}),
                        mk_hartig("u", "v", mk_rel(r, {"u", "x"}), mk_rel(r, {"v", "y"}))));
    auto below_universe =
        mk_not(mk_rescher("u", "v", mk_rel(r, {"u", "x"}), mk_equal("v", "v")));
    return mk_and(strict_total_order(r), mk_exists("x", mk_and(same_above, below_universe)));
}

}  // namespace finlog
