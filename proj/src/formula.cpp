#include "finlog/formula.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "finlog/errors.hpp"

namespace finlog {

namespace {

struct VarTable {
    std::mutex mtx;
    std::vector<std::string> names;
    std::map<std::string, int> ids;
};

VarTable& var_table() {
    static VarTable t;
    return t;
}

std::vector<int> merge_ids(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<int> without(std::vector<int> ids, int var) {
    ids.erase(std::remove(ids.begin(), ids.end(), var), ids.end());
    return ids;
}

FormulaPtr make(FormulaNode node, std::vector<int> free_ids) {
    return std::make_shared<Formula>(std::move(node), std::move(free_ids));
}

}  // namespace

int intern_var(const std::string& name) {
    auto& t = var_table();
    std::lock_guard<std::mutex> lock(t.mtx);
    auto it = t.ids.find(name);
    if (it != t.ids.end())
        return it->second;
    int id = int(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

std::string var_name(int id) {
    auto& t = var_table();
    std::lock_guard<std::mutex> lock(t.mtx);
    return t.names.at(std::size_t(id));
}

FormulaPtr mk_bool(bool value) {
    return make(BoolNode{value}, {});
}
FormulaPtr mk_true() {
    return mk_bool(true);
}
FormulaPtr mk_false() {
    return mk_bool(false);
}

FormulaPtr mk_rel(const std::string& symbol, const std::vector<std::string>& vars) {
    std::vector<int> args;
    args.reserve(vars.size());
    for (const auto& v : vars)
        args.push_back(intern_var(v));
    auto free = args;
    std::sort(free.begin(), free.end());
    free.erase(std::unique(free.begin(), free.end()), free.end());
    return make(RelNode{symbol, std::move(args)}, std::move(free));
}

FormulaPtr mk_equal(const std::string& lhs, const std::string& rhs) {
    int l = intern_var(lhs), r = intern_var(rhs);
    std::vector<int> free{l, r};
    std::sort(free.begin(), free.end());
    free.erase(std::unique(free.begin(), free.end()), free.end());
    return make(EqualNode{l, r}, std::move(free));
}

FormulaPtr mk_not(FormulaPtr sub) {
    auto free = sub->free_ids;
    return make(NotNode{std::move(sub)}, std::move(free));
}

static FormulaPtr mk_binary(Conn op, FormulaPtr lhs, FormulaPtr rhs) {
    auto free = merge_ids(lhs->free_ids, rhs->free_ids);
    return make(BinaryNode{op, std::move(lhs), std::move(rhs)}, std::move(free));
}

FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs) {
    return mk_binary(Conn::And, std::move(lhs), std::move(rhs));
}
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs) {
    return mk_binary(Conn::Or, std::move(lhs), std::move(rhs));
}
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs) {
    return mk_binary(Conn::Implies, std::move(lhs), std::move(rhs));
}
FormulaPtr mk_iff(FormulaPtr lhs, FormulaPtr rhs) {
    return mk_binary(Conn::Iff, std::move(lhs), std::move(rhs));
}

static FormulaPtr mk_big(bool conjunction, std::vector<FormulaPtr> parts) {
    if (parts.empty())
        throw Error("big connective needs at least one part");
    std::vector<int> free;
    for (const auto& p : parts)
        free = merge_ids(std::move(free), p->free_ids);
    return make(BigNode{conjunction, std::move(parts)}, std::move(free));
}

FormulaPtr mk_big_and(std::vector<FormulaPtr> parts) {
    return mk_big(true, std::move(parts));
}
FormulaPtr mk_big_or(std::vector<FormulaPtr> parts) {
    return mk_big(false, std::move(parts));
}

static FormulaPtr mk_quant(bool universal, const std::string& var, FormulaPtr body) {
    int v = intern_var(var);
    auto free = without(body->free_ids, v);
    return make(QuantNode{universal, v, std::move(body)}, std::move(free));
}

FormulaPtr mk_exists(const std::string& var, FormulaPtr body) {
    return mk_quant(false, var, std::move(body));
}
FormulaPtr mk_forall(const std::string& var, FormulaPtr body) {
    return mk_quant(true, var, std::move(body));
}

FormulaPtr mk_count_at_least(int threshold, const std::string& var, FormulaPtr body) {
    if (threshold < 1)
        throw Error("counting threshold must be at least 1");
    int v = intern_var(var);
    auto free = without(body->free_ids, v);
    return make(CountNode{threshold, v, std::move(body)}, std::move(free));
}

FormulaPtr mk_schematic_q(const std::string& var, FormulaPtr body) {
    int v = intern_var(var);
    auto free = without(body->free_ids, v);
    return make(CountNode{std::nullopt, v, std::move(body)}, std::move(free));
}

static FormulaPtr mk_compare(bool eq, const std::string& x, const std::string& y,
                             FormulaPtr left, FormulaPtr right) {
    int xi = intern_var(x), yi = intern_var(y);
    auto free = merge_ids(without(left->free_ids, xi), without(right->free_ids, yi));
    return make(CompareQNode{eq, xi, yi, std::move(left), std::move(right)}, std::move(free));
}

FormulaPtr mk_hartig(const std::string& x, const std::string& y, FormulaPtr left,
                     FormulaPtr right) {
    return mk_compare(true, x, y, std::move(left), std::move(right));
}
FormulaPtr mk_rescher(const std::string& x, const std::string& y, FormulaPtr left,
                      FormulaPtr right) {
    return mk_compare(false, x, y, std::move(left), std::move(right));
}

FormulaPtr mk_well_order(const std::string& x, const std::string& y, FormulaPtr body) {
    int xi = intern_var(x), yi = intern_var(y);
    if (xi == yi)
        throw Error("well-order quantifier needs two distinct variables");
    auto free = without(without(body->free_ids, xi), yi);
    return make(WellOrderNode{xi, yi, std::move(body)}, std::move(free));
}

FormulaPtr mk_oracle_q(const std::string& oracle, const std::vector<std::string>& vars,
                       FormulaPtr body) {
    if (vars.empty())
        throw Error("oracle quantifier needs at least one variable");
    std::vector<int> ids;
    for (const auto& v : vars)
        ids.push_back(intern_var(v));
    {
        auto dedup = ids;
        std::sort(dedup.begin(), dedup.end());
        if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
            throw Error("oracle quantifier variables must be distinct");
    }
    auto free = body->free_ids;
    for (int v : ids)
        free = without(std::move(free), v);
    return make(OracleQNode{oracle, std::move(ids), std::move(body)}, std::move(free));
}

bool equal(const Formula& a, const Formula& b) {
    if (&a == &b)
        return true;
    if (a.node.index() != b.node.index())
        return false;
    if (const auto* x = std::get_if<BoolNode>(&a.node))
        return x->value == std::get<BoolNode>(b.node).value;
    if (const auto* x = std::get_if<RelNode>(&a.node)) {
        const auto& y = std::get<RelNode>(b.node);
        return x->symbol == y.symbol && x->args == y.args;
    }
    if (const auto* x = std::get_if<EqualNode>(&a.node)) {
        const auto& y = std::get<EqualNode>(b.node);
        return x->lhs == y.lhs && x->rhs == y.rhs;
    }
    if (const auto* x = std::get_if<NotNode>(&a.node))
        return equal(*x->sub, *std::get<NotNode>(b.node).sub);
    if (const auto* x = std::get_if<BinaryNode>(&a.node)) {
        const auto& y = std::get<BinaryNode>(b.node);
        return x->op == y.op && equal(*x->lhs, *y.lhs) && equal(*x->rhs, *y.rhs);
    }
    if (const auto* x = std::get_if<BigNode>(&a.node)) {
        const auto& y = std::get<BigNode>(b.node);
        if (x->conjunction != y.conjunction || x->parts.size() != y.parts.size())
            return false;
        for (std::size_t i = 0; i < x->parts.size(); ++i)
            if (!equal(*x->parts[i], *y.parts[i]))
                return false;
        return true;
    }
    if (const auto* x = std::get_if<QuantNode>(&a.node)) {
        const auto& y = std::get<QuantNode>(b.node);
        return x->universal == y.universal && x->var == y.var && equal(*x->body, *y.body);
    }
    if (const auto* x = std::get_if<CountNode>(&a.node)) {
        const auto& y = std::get<CountNode>(b.node);
        return x->threshold == y.threshold && x->var == y.var && equal(*x->body, *y.body);
    }
    if (const auto* x = std::get_if<CompareQNode>(&a.node)) {
        const auto& y = std::get<CompareQNode>(b.node);
        return x->equal == y.equal && x->left_var == y.left_var && x->right_var == y.right_var &&
               equal(*x->left, *y.left) && equal(*x->right, *y.right);
    }
    if (const auto* x = std::get_if<WellOrderNode>(&a.node)) {
        const auto& y = std::get<WellOrderNode>(b.node);
        return x->left_var == y.left_var && x->right_var == y.right_var &&
               equal(*x->body, *y.body);
    }
    const auto& x = std::get<OracleQNode>(a.node);
    const auto& y = std::get<OracleQNode>(b.node);
    return x.oracle == y.oracle && x.vars == y.vars && equal(*x.body, *y.body);
}

bool is_free_in(const Formula& f, int var) {
    return std::binary_search(f.free_ids.begin(), f.free_ids.end(), var);
}

bool is_free_in(const Formula& f, const std::string& var) {
    return is_free_in(f, intern_var(var));
}

void visit_children(const Formula& f, const std::function<void(const FormulaPtr&)>& fn) {
    if (const auto* x = std::get_if<NotNode>(&f.node)) {
        fn(x->sub);
    } else if (const auto* x = std::get_if<BinaryNode>(&f.node)) {
        fn(x->lhs);
        fn(x->rhs);
    } else if (const auto* x = std::get_if<BigNode>(&f.node)) {
        for (const auto& p : x->parts)
            fn(p);
    } else if (const auto* x = std::get_if<QuantNode>(&f.node)) {
        fn(x->body);
    } else if (const auto* x = std::get_if<CountNode>(&f.node)) {
        fn(x->body);
    } else if (const auto* x = std::get_if<CompareQNode>(&f.node)) {
        fn(x->left);
        fn(x->right);
    } else if (const auto* x = std::get_if<WellOrderNode>(&f.node)) {
        fn(x->body);
    } else if (const auto* x = std::get_if<OracleQNode>(&f.node)) {
        fn(x->body);
    }
}

FormulaPtr substitute_free(const FormulaPtr& f, int var, int replacement) {
    if (!is_free_in(*f, var))
        return f;
    if (var == replacement)
        return f;
    const std::string& repl = var_name(replacement);
    if (const auto* x = std::get_if<RelNode>(&f->node)) {
        std::vector<std::string> args;
        for (int a : x->args)
            args.push_back(a == var ? repl : var_name(a));
        return mk_rel(x->symbol, args);
    }
    if (const auto* x = std::get_if<EqualNode>(&f->node))
        return mk_equal(x->lhs == var ? repl : var_name(x->lhs),
                        x->rhs == var ? repl : var_name(x->rhs));
    if (const auto* x = std::get_if<NotNode>(&f->node))
        return mk_not(substitute_free(x->sub, var, replacement));
    if (const auto* x = std::get_if<BinaryNode>(&f->node))
        return mk_binary(x->op, substitute_free(x->lhs, var, replacement),
                         substitute_free(x->rhs, var, replacement));
    if (const auto* x = std::get_if<BigNode>(&f->node)) {
        std::vector<FormulaPtr> parts;
        for (const auto& p : x->parts)
            parts.push_back(substitute_free(p, var, replacement));
        return mk_big(x->conjunction, std::move(parts));
    }
    if (const auto* x = std::get_if<QuantNode>(&f->node))
        return mk_quant(x->universal, var_name(x->var),
                        substitute_free(x->body, var, replacement));
    if (const auto* x = std::get_if<CountNode>(&f->node)) {
        auto body = substitute_free(x->body, var, replacement);
        return x->threshold ? mk_count_at_least(*x->threshold, var_name(x->var), std::move(body))
                            : mk_schematic_q(var_name(x->var), std::move(body));
    }
    if (const auto* x = std::get_if<CompareQNode>(&f->node)) {
        auto l = x->left_var == var ? x->left : substitute_free(x->left, var, replacement);
        auto r = x->right_var == var ? x->right : substitute_free(x->right, var, replacement);
        return mk_compare(x->equal, var_name(x->left_var), var_name(x->right_var), std::move(l),
                          std::move(r));
    }
    if (const auto* x = std::get_if<WellOrderNode>(&f->node))
        return mk_well_order(var_name(x->left_var), var_name(x->right_var),
                             substitute_free(x->body, var, replacement));
    const auto& x = std::get<OracleQNode>(f->node);
    std::vector<std::string> vars;
    for (int v : x.vars)
        vars.push_back(var_name(v));
    return mk_oracle_q(x.oracle, vars, substitute_free(x.body, var, replacement));
}

bool is_free_for(const Formula& f, int var, int replacement) {
    if (!is_free_in(f, var) || var == replacement)
        return true;
    // a binder of `replacement` above a free occurrence of `var` captures
    if (const auto* x = std::get_if<QuantNode>(&f.node)) {
        if (x->var == var)
            return true;
        if (x->var == replacement)
            return false;  // var occurs free below (checked above)
        return is_free_for(*x->body, var, replacement);
    }
    if (const auto* x = std::get_if<CountNode>(&f.node)) {
        if (x->var == var)
            return true;
        if (x->var == replacement)
            return false;
        return is_free_for(*x->body, var, replacement);
    }
    if (const auto* x = std::get_if<CompareQNode>(&f.node)) {
        bool ok = true;
        if (x->left_var != var && is_free_in(*x->left, var))
            ok = ok && x->left_var != replacement && is_free_for(*x->left, var, replacement);
        if (x->right_var != var && is_free_in(*x->right, var))
            ok = ok && x->right_var != replacement && is_free_for(*x->right, var, replacement);
        return ok;
    }
    if (const auto* x = std::get_if<WellOrderNode>(&f.node)) {
        if (x->left_var == var || x->right_var == var)
            return true;
        if (x->left_var == replacement || x->right_var == replacement)
            return false;
        return is_free_for(*x->body, var, replacement);
    }
    if (const auto* x = std::get_if<OracleQNode>(&f.node)) {
        for (int v : x->vars)
            if (v == var)
                return true;
        for (int v : x->vars)
            if (v == replacement)
                return false;
        return is_free_for(*x->body, var, replacement);
    }
    bool ok = true;
    visit_children(f, [&](const FormulaPtr& c) { ok = ok && is_free_for(*c, var, replacement); });
    return ok;
}

Vocabulary inferred_vocabulary(const Formula& f) {
    std::vector<Symbol> symbols;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (const auto* x = std::get_if<RelNode>(&g.node)) {
            for (auto& s : symbols) {
                if (s.name == x->symbol) {
                    if (s.arity != int(x->args.size()))
                        throw VocabularyError("symbol '" + x->symbol +
                                              "' used with two different arities");
                    return;
                }
            }
            symbols.push_back({x->symbol, int(x->args.size())});
            return;
        }
        visit_children(g, [&](const FormulaPtr& c) { walk(*c); });
    };
    walk(f);
    return Vocabulary(std::move(symbols));
}

std::vector<std::pair<std::string, int>> oracle_references(const Formula& f) {
    std::vector<std::pair<std::string, int>> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (const auto* x = std::get_if<OracleQNode>(&g.node)) {
            bool seen = false;
            for (auto& [name, arity] : out)
                if (name == x->oracle)
                    seen = true;
            if (!seen)
                out.emplace_back(x->oracle, int(x->vars.size()));
        }
        visit_children(g, [&](const FormulaPtr& c) { walk(*c); });
    };
    walk(f);
    return out;
}

bool uses_schematic_q(const Formula& f) {
    if (const auto* x = std::get_if<CountNode>(&f.node))
        if (!x->threshold)
            return true;
    bool found = false;
    visit_children(f, [&](const FormulaPtr& c) { found = found || uses_schematic_q(*c); });
    return found;
}

std::vector<WfViolation> check_wf(const Formula& f, const Vocabulary& v, bool require_sentence,
                                  const std::vector<std::pair<std::string, int>>* oracle_arities) {
    std::vector<WfViolation> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (const auto* x = std::get_if<RelNode>(&g.node)) {
            auto arity = v.arity_of(x->symbol);
            if (!arity)
                out.push_back({render(g), "unknown relation symbol '" + x->symbol + "'"});
            else if (*arity != int(x->args.size()))
                out.push_back({render(g), "symbol '" + x->symbol + "' has arity " +
                                              std::to_string(*arity) + ", applied to " +
                                              std::to_string(x->args.size()) + " arguments"});
        } else if (const auto* o = std::get_if<OracleQNode>(&g.node)) {
            if (oracle_arities) {
                bool known = false;
                for (const auto& [name, arity] : *oracle_arities) {
                    if (name == o->oracle) {
                        known = true;
                        if (arity != int(o->vars.size()))
                            out.push_back({render(g), "oracle '" + o->oracle + "' expects " +
                                                          std::to_string(arity) + " variables"});
                    }
                }
                if (!known)
                    out.push_back({render(g), "unknown oracle '" + o->oracle + "'"});
            }
        }
        visit_children(g, [&](const FormulaPtr& c) { walk(*c); });
    };
    walk(f);
    if (require_sentence && !f.free_ids.empty()) {
        std::string names;
        for (int id : f.free_ids)
            names += (names.empty() ? "" : ", ") + var_name(id);
        out.push_back({render(f), "free variables in sentence position: " + names});
    }
    return out;
}

// ---------------------------------------------------------------------------
// rendering

namespace {

// precedence: quantifier-like 0, <-> 1, -> 2, | 3, & 4, ! 5, atoms 6
int precedence(const Formula& f) {
    if (std::holds_alternative<BinaryNode>(f.node)) {
        switch (std::get<BinaryNode>(f.node).op) {
            case Conn::Iff: return 1;
            case Conn::Implies: return 2;
            case Conn::Or: return 3;
            case Conn::And: return 4;
        }
    }
    if (std::holds_alternative<NotNode>(f.node))
        return 5;
    if (std::holds_alternative<BoolNode>(f.node) || std::holds_alternative<RelNode>(f.node) ||
        std::holds_alternative<EqualNode>(f.node) || std::holds_alternative<BigNode>(f.node))
        return 6;
    return 0;
}

void render_into(const Formula& f, int min_prec, std::string& out) {
    int prec = precedence(f);
    bool parens = prec < min_prec;
    if (parens)
        out += "(";
    if (const auto* x = std::get_if<BoolNode>(&f.node)) {
        out += x->value ? "true" : "false";
    } else if (const auto* x = std::get_if<RelNode>(&f.node)) {
        out += x->symbol;
        out += "(";
        for (std::size_t i = 0; i < x->args.size(); ++i) {
            if (i)
                out += ", ";
            out += var_name(x->args[i]);
        }
        out += ")";
    } else if (const auto* x = std::get_if<EqualNode>(&f.node)) {
        out += var_name(x->lhs) + " = " + var_name(x->rhs);
    } else if (const auto* x = std::get_if<NotNode>(&f.node)) {
        out += "!";
        render_into(*x->sub, 5, out);
    } else if (const auto* x = std::get_if<BinaryNode>(&f.node)) {
        switch (x->op) {
            case Conn::Iff:
                render_into(*x->lhs, 1, out);
                out += " <-> ";
                render_into(*x->rhs, 2, out);
                break;
            case Conn::Implies:
                render_into(*x->lhs, 3, out);
                out += " -> ";
                render_into(*x->rhs, 2, out);
                break;
            case Conn::Or:
                render_into(*x->lhs, 3, out);
                out += " | ";
                render_into(*x->rhs, 4, out);
                break;
            case Conn::And:
                render_into(*x->lhs, 4, out);
                out += " & ";
                render_into(*x->rhs, 5, out);
                break;
        }
    } else if (const auto* x = std::get_if<BigNode>(&f.node)) {
        out += x->conjunction ? "And{" : "Or{";
        for (std::size_t i = 0; i < x->parts.size(); ++i) {
            if (i)
                out += ", ";
            render_into(*x->parts[i], 0, out);
        }
        out += "}";
    } else if (const auto* x = std::get_if<QuantNode>(&f.node)) {
        out += x->universal ? "forall " : "exists ";
        out += var_name(x->var) + ". ";
        render_into(*x->body, 0, out);
    } else if (const auto* x = std::get_if<CountNode>(&f.node)) {
        if (x->threshold)
            out += "E>=" + std::to_string(*x->threshold) + " ";
        else
            out += "Q ";
        out += var_name(x->var) + ". ";
        render_into(*x->body, 0, out);
    } else if (const auto* x = std::get_if<CompareQNode>(&f.node)) {
        out += x->equal ? "I " : "J ";
        out += var_name(x->left_var) + " " + var_name(x->right_var) + ". (";
        render_into(*x->left, 0, out);
        out += ") (";
        render_into(*x->right, 0, out);
        out += ")";
    } else if (const auto* x = std::get_if<WellOrderNode>(&f.node)) {
        out += "W " + var_name(x->left_var) + " " + var_name(x->right_var) + ". ";
        render_into(*x->body, 0, out);
    } else if (const auto* x = std::get_if<OracleQNode>(&f.node)) {
        out += "QK[" + x->oracle + "]";
        for (int v : x->vars)
            out += " " + var_name(v);
        out += ". ";
        render_into(*x->body, 0, out);
    }
    if (parens)
        out += ")";
}

}  // namespace

std::string render(const Formula& f) {
    std::string out;
    render_into(f, 0, out);
    return out;
}

}  // namespace finlog
