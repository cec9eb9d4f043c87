#include "finlog/operations.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace finlog {

namespace {

ValueSet image_of(const ValueSet& a, const Bijection& pi) {
    ValueSet out;
    for (const auto& t : a)
        out.insert(pi.image(t));
    return out;
}

std::vector<ValueSet> images_of(const std::vector<ValueSet>& inputs, const Bijection& pi) {
    std::vector<ValueSet> out;
    out.reserve(inputs.size());
    for (const auto& a : inputs)
        out.push_back(image_of(a, pi));
    return out;
}

void check_input_shapes(const LocalOperation& f, const std::vector<ValueSet>& inputs) {
    if (inputs.size() != f.input_arities.size())
        throw DimensionError("operation expects " + std::to_string(f.input_arities.size()) +
                             " inputs, got " + std::to_string(inputs.size()));
}

/// Enumerates all input sequences: per input a membership mask over the
/// n^arity tuple space, masks ascending, last input cycling fastest.
class InputEnumerator {
public:
    InputEnumerator(int n, const std::vector<int>& arities, std::uint64_t budget,
                    std::uint64_t cost_multiplier) {
        n_ = n;
        std::uint64_t bits = 0;
        for (int a : arities) {
            spaces_.push_back(tuple_space_size(n, a));
            bits += spaces_.back();
        }
        total_ = bits >= 63 ? UINT64_MAX : (std::uint64_t{1} << bits);
        std::uint64_t cost = (cost_multiplier != 0 && total_ > UINT64_MAX / cost_multiplier)
                                 ? UINT64_MAX
                                 : total_ * cost_multiplier;
        if (cost == UINT64_MAX || cost > budget)
            throw BudgetError("invariance scan needs " +
                                  (cost == UINT64_MAX ? ("more than 2^63")
                                                      : std::to_string(cost)) +
                                  " checks, budget is " + std::to_string(budget),
                              cost, budget);
        masks_.assign(arities.size(), 0);
        arities_ = arities;
    }

    std::uint64_t total() const { return total_; }

    bool next(std::vector<ValueSet>& out) {
        if (emitted_ >= total_)
            return false;
        if (emitted_ > 0) {
            for (std::size_t i = masks_.size(); i-- > 0;) {
                if (++masks_[i] < (std::uint64_t{1} << spaces_[i]))
                    break;
                masks_[i] = 0;
            }
        }
        ++emitted_;
        out.clear();
        for (std::size_t i = 0; i < masks_.size(); ++i) {
            ValueSet set;
            for (std::uint64_t b = 0; b < spaces_[i]; ++b)
                if ((masks_[i] >> b) & 1)
                    set.insert(index_to_tuple(b, n_, arities_[i]));
            out.push_back(std::move(set));
        }
        return true;
    }

private:
    int n_ = 0;
    std::vector<int> arities_;
    std::vector<std::uint64_t> spaces_;
    std::vector<std::uint64_t> masks_;
    std::uint64_t total_ = 0;
    std::uint64_t emitted_ = 0;
};

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= std::uint64_t(i);
    return f;
}

ValueSet drop_last_coordinate(const ValueSet& a) {
    ValueSet out;
    for (const auto& t : a)
        out.insert(Tuple(t.begin(), t.end() - 1));
    return out;
}

ValueSet full_space(int n, int arity) {
    ValueSet out;
    std::uint64_t space = tuple_space_size(n, arity);
    for (std::uint64_t i = 0; i < space; ++i)
        out.insert(index_to_tuple(i, n, arity));
    return out;
}

}  // namespace

LocalOperation LocalOperation::intersection(int n, int arity) {
    return LocalOperation{n, {arity, arity}, arity, [](const std::vector<ValueSet>& in) {
                              ValueSet out;
                              std::set_intersection(in[0].begin(), in[0].end(), in[1].begin(),
                                                    in[1].end(),
                                                    std::inserter(out, out.begin()));
                              return out;
                          }};
}

LocalOperation LocalOperation::union_of(int n, int arity) {
    return LocalOperation{n, {arity, arity}, arity, [](const std::vector<ValueSet>& in) {
                              ValueSet out = in[0];
                              out.insert(in[1].begin(), in[1].end());
                              return out;
                          }};
}

LocalOperation LocalOperation::complement(int n, int arity) {
    return LocalOperation{n, {arity}, arity, [n, arity](const std::vector<ValueSet>& in) {
                              ValueSet out;
                              for (auto& t : full_space(n, arity))
                                  if (!in[0].count(t))
                                      out.insert(t);
                              return out;
                          }};
}

LocalOperation LocalOperation::projection(int n, int arity_in) {
    if (arity_in < 1)
        throw DimensionError("projection needs input arity >= 1");
    return LocalOperation{n, {arity_in}, arity_in - 1, [](const std::vector<ValueSet>& in) {
                              return drop_last_coordinate(in[0]);
                          }};
}

LocalOperation LocalOperation::from_table(int n, std::vector<int> input_arities,
                                          int output_arity,
                                          std::map<std::vector<ValueSet>, ValueSet> table) {
    return LocalOperation{n, std::move(input_arities), output_arity,
                          [table = std::move(table)](const std::vector<ValueSet>& in) {
                              auto it = table.find(in);
                              return it == table.end() ? ValueSet{} : it->second;
                          }};
}

LocalOperation LocalOperation::builtin(const std::string& name, int n, int arity) {
    if (name == "and")
        return intersection(n, arity);
    if (name == "or")
        return union_of(n, arity);
    if (name == "complement")
        return complement(n, arity);
    if (name == "exists")
        return projection(n, arity);
    throw ConfigError("unknown built-in operation '" + name + "'");
}

GlobalOperation GlobalOperation::intersection(int arity) {
    return GlobalOperation{{arity, arity}, arity,
                           [arity](int n) { return LocalOperation::intersection(n, arity); }};
}
GlobalOperation GlobalOperation::union_of(int arity) {
    return GlobalOperation{{arity, arity}, arity,
                           [arity](int n) { return LocalOperation::union_of(n, arity); }};
}
GlobalOperation GlobalOperation::complement(int arity) {
    return GlobalOperation{{arity}, arity,
                           [arity](int n) { return LocalOperation::complement(n, arity); }};
}
GlobalOperation GlobalOperation::projection(int arity_in) {
    if (arity_in < 1)
        throw DimensionError("projection needs input arity >= 1");
    return GlobalOperation{{arity_in}, arity_in - 1,
                           [arity_in](int n) { return LocalOperation::projection(n, arity_in); }};
}
GlobalOperation GlobalOperation::builtin(const std::string& name, int arity) {
    if (name == "and")
        return intersection(arity);
    if (name == "or")
        return union_of(arity);
    if (name == "complement")
        return complement(arity);
    if (name == "exists")
        return projection(arity);
    throw ConfigError("unknown built-in operation '" + name + "'");
}

bool replay_counterexample(const LocalOperation& f, const InvarianceCounterexample& cex) {
    ValueSet lhs = f.apply(images_of(cex.inputs, cex.pi));
    ValueSet rhs = image_of(f.apply(cex.inputs), cex.pi);
    return lhs != rhs && lhs == cex.output_of_images && rhs == cex.image_of_output;
}

InvarianceReport is_permutation_invariant(const LocalOperation& f, std::uint64_t budget) {
    InvarianceReport report;
    InputEnumerator inputs(f.domain_size, f.input_arities, budget,
                           factorial(f.domain_size));
    std::vector<ValueSet> in;
    while (inputs.next(in)) {
        check_input_shapes(f, in);
        ValueSet base = f.apply(in);
        std::optional<InvarianceCounterexample> hit;
        for_each_permutation(f.domain_size, [&](const Bijection& pi) {
            ++report.checked;
            ValueSet lhs = f.apply(images_of(in, pi));
            ValueSet rhs = image_of(base, pi);
            if (lhs != rhs) {
                hit = InvarianceCounterexample{f.domain_size, pi, in, rhs, lhs};
                return false;
            }
            return true;
        });
        if (hit) {
            report.invariant = false;
            report.counterexample = std::move(hit);
            return report;
        }
    }
    report.invariant = true;
    return report;
}

InvarianceReport is_bijection_invariant(const GlobalOperation& g, int max_size,
                                        std::uint64_t budget) {
    InvarianceReport report;
    for (int n = 1; n <= max_size; ++n) {
        LocalOperation f = g.local(n);
        if (f.input_arities != g.input_arities || f.output_arity != g.output_arity)
            throw ConfigError("global operation family has non-uniform arities at size " +
                              std::to_string(n));
        if (f.domain_size != n)
            throw ConfigError("global operation family returned wrong domain size");
        InvarianceReport local = is_permutation_invariant(f, budget);
        report.checked += local.checked;
        if (!local.invariant) {
            report.invariant = false;
            report.counterexample = std::move(local.counterexample);
            return report;
        }
    }
    report.invariant = true;
    return report;
}

DescribesReport describes(const FormulaPtr& formula, const LocalOperation& f,
                          const std::vector<std::string>& predicates, const EvalEnv& env,
                          std::uint64_t budget) {
    if (predicates.size() != f.input_arities.size())
        throw DimensionError("expected " + std::to_string(f.input_arities.size()) +
                             " predicate symbols");
    std::vector<Symbol> symbols;
    for (std::size_t i = 0; i < predicates.size(); ++i)
        symbols.push_back({predicates[i], f.input_arities[i]});
    Vocabulary voc{symbols};

    Vocabulary used = inferred_vocabulary(*formula);
    for (const auto& sym : used.symbols()) {
        auto arity = voc.arity_of(sym.name);
        if (!arity || *arity != sym.arity)
            throw DimensionError("formula uses symbol '" + sym.name +
                                 "' outside the predicate list (or with wrong arity)");
    }

    // output variables: free variables in lexicographic name order
    std::vector<std::string> vars;
    for (int id : formula->free_ids)
        vars.push_back(var_name(id));
    std::sort(vars.begin(), vars.end());
    if (int(vars.size()) != f.output_arity)
        throw DimensionError("formula has " + std::to_string(vars.size()) +
                             " free variables, operation output arity is " +
                             std::to_string(f.output_arity));

    Evaluator ev(formula, env);
    InputEnumerator inputs(f.domain_size, f.input_arities, budget, 1);
    std::vector<ValueSet> in;
    while (inputs.next(in)) {
        Structure s(voc, f.domain_size);
        for (std::size_t i = 0; i < predicates.size(); ++i)
            s.set_interpretation(predicates[i], std::set<Tuple>(in[i].begin(), in[i].end()));
        ValueSet from_formula = ev.value(s, vars).tuples;
        ValueSet from_op = f.apply(in);
        if (from_formula != from_op)
            return DescribesReport{false,
                                   DescribesCounterexample{in, from_formula, from_op}};
    }
    return DescribesReport{true, std::nullopt};
}

ClassOracle class_of_operation(const GlobalOperation& g) {
    std::vector<Symbol> symbols;
    for (std::size_t i = 0; i < g.input_arities.size(); ++i)
        symbols.push_back({"P" + std::to_string(i), g.input_arities[i]});
    symbols.push_back({"P", g.output_arity});
    Vocabulary voc{symbols};
    auto family = g.local;
    std::size_t k = g.input_arities.size();
    return ClassOracle{
        "K_f", voc, [voc, family, k](const Structure& s) {
            if (s.vocabulary() != voc)
                throw VocabularyError("structure vocabulary does not match K_f");
            std::vector<ValueSet> in;
            for (std::size_t i = 0; i < k; ++i) {
                auto ts = s.interpretation(i).tuples();
                in.emplace_back(ts.begin(), ts.end());
            }
            auto ts = s.interpretation(k).tuples();
            ValueSet p(ts.begin(), ts.end());
            return family(s.size()).apply(in) == p;
        }};
}

GlobalOperation operation_of_class(const ClassOracle& k) {
    std::vector<int> arities;
    for (const auto& sym : k.vocabulary.symbols())
        arities.push_back(sym.arity);
    auto voc = k.vocabulary;
    auto membership = k.membership;
    return GlobalOperation{
        arities, 1, [voc, membership, arities](int n) {
            return LocalOperation{
                n, arities, 1, [voc, membership, n](const std::vector<ValueSet>& in) {
                    Structure s(voc, n);
                    for (std::size_t i = 0; i < in.size(); ++i)
                        s.set_interpretation(voc.symbols()[i].name,
                                             std::set<Tuple>(in[i].begin(), in[i].end()));
                    ValueSet out;
                    if (membership(s))
                        for (int e = 0; e < n; ++e)
                            out.insert(Tuple{e});
                    return out;
                }};
        }};
}

// ---------------------------------------------------------------------------
// table text format

namespace {

ValueSet parse_set(const std::string& text, int arity, int n) {
    ValueSet out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (i < text.size() && text[i] == '-') {
        ++i;
        skip();
        if (i != text.size())
            throw ParseError(1, int(i) + 1, "end of set after '-'", std::string(1, text[i]));
        return out;
    }
    while (i < text.size()) {
        skip();
        if (i >= text.size())
            break;
        if (text[i] != '(')
            throw ParseError(1, int(i) + 1, "'('", std::string(1, text[i]));
        ++i;
        Tuple t;
        skip();
        while (i < text.size() && text[i] != ')') {
            skip();
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                ++i;
            if (start == i)
                throw ParseError(1, int(i) + 1, "integer", std::string(1, text[i]));
            t.push_back(std::stoi(text.substr(start, i - start)));
            skip();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip();
            }
        }
        if (i >= text.size())
            throw ParseError(1, int(i) + 1, "')'", "end of input");
        ++i;  // ')'
        if (int(t.size()) != arity)
            throw ParseError(1, int(i), "tuple of arity " + std::to_string(arity),
                             "tuple of length " + std::to_string(t.size()));
        for (int e : t)
            if (e < 0 || e >= n)
                throw ParseError(1, int(i), "entry < " + std::to_string(n), std::to_string(e));
        out.insert(std::move(t));
        skip();
        if (i < text.size() && text[i] == ';') {
            ++i;
            continue;
        }
        break;
    }
    return out;
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto hit = s.find(sep, pos);
        if (hit == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, hit - pos));
        pos = hit + sep.size();
    }
}

}  // namespace

LocalOperation parse_operation_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, output = -1;
    std::vector<int> arities;
    std::map<std::vector<ValueSet>, ValueSet> table;
    int lineno = 0;
    bool saw_op = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw))
            continue;
        if (kw == "op") {
            saw_op = true;
        } else if (kw == "size") {
            ls >> n;
        } else if (kw == "inputs") {
            int a;
            while (ls >> a)
                arities.push_back(a);
        } else if (kw == "output") {
            ls >> output;
        } else if (kw == "entry") {
            if (n < 0 || output < 0)
                throw ParseError(lineno, 1, "size/inputs/output before entries", kw);
            std::string rest;
            std::getline(ls, rest);
            auto arrow = split(rest, "=>");
            if (arrow.size() != 2)
                throw ParseError(lineno, 1, "exactly one '=>'", rest);
            auto ins = split(arrow[0], "|");
            if (ins.size() != arities.size())
                throw ParseError(lineno, 1, std::to_string(arities.size()) + " input sets",
                                 std::to_string(ins.size()) + " given");
            std::vector<ValueSet> key;
            for (std::size_t i = 0; i < ins.size(); ++i)
                key.push_back(parse_set(ins[i], arities[i], n));
            table[std::move(key)] = parse_set(arrow[1], output, n);
        } else {
            throw ParseError(lineno, 1, "op/size/inputs/output/entry", kw);
        }
    }
    if (!saw_op || n < 0 || output < 0)
        throw ParseError(lineno, 1, "complete table header", "end of input");
    return LocalOperation::from_table(n, std::move(arities), output, std::move(table));
}

}  // namespace finlog
