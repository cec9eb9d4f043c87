#include "finlog/proofs.hpp"

#include <algorithm>
#include <sstream>

#include "finlog/errors.hpp"
#include "finlog/eval.hpp"
#include "finlog/formula_gen.hpp"
#include "finlog/parser.hpp"

namespace finlog {

std::string MetaSubst::to_string() const {
    std::string out;
    for (const auto& [name, f] : formulas)
        out += (out.empty() ? "" : "; ") + name + " := " + render(f);
    for (const auto& [name, v] : variables)
        out += (out.empty() ? "" : "; ") + name + " := " + v;
    return out;
}

namespace {

FormulaPtr need_formula(const MetaSubst& s, const std::string& name) {
    if (auto it = s.formulas.find(name); it != s.formulas.end())
        return it->second;
    throw Error("substitution does not bind formula metavariable '" + name + "'");
}

std::string need_var(const MetaSubst& s, const std::string& name) {
    if (auto it = s.variables.find(name); it != s.variables.end())
        return it->second;
    throw Error("substitution does not bind variable metavariable '" + name + "'");
}

// --- propositional patterns -------------------------------------------------

struct Pat;
using PatPtr = std::shared_ptr<const Pat>;

struct Pat {
    enum class K { Meta, Bool, Not, Bin } kind;
    std::string meta;
    bool value = false;
    Conn op = Conn::And;
    PatPtr a, b;
};

PatPtr pmeta(const char* name) {
    return std::make_shared<Pat>(Pat{Pat::K::Meta, name, false, Conn::And, nullptr, nullptr});
}
PatPtr pbool(bool v) {
    return std::make_shared<Pat>(Pat{Pat::K::Bool, "", v, Conn::And, nullptr, nullptr});
}
PatPtr pnot(PatPtr a) {
    return std::make_shared<Pat>(Pat{Pat::K::Not, "", false, Conn::And, std::move(a), nullptr});
}
PatPtr pbin(Conn op, PatPtr a, PatPtr b) {
    return std::make_shared<Pat>(Pat{Pat::K::Bin, "", false, op, std::move(a), std::move(b)});
}
PatPtr pimp(PatPtr a, PatPtr b) {
    return pbin(Conn::Implies, std::move(a), std::move(b));
}

bool match_pat(const PatPtr& p, const FormulaPtr& f, MetaSubst& s) {
    switch (p->kind) {
        case Pat::K::Meta: {
            auto it = s.formulas.find(p->meta);
            if (it != s.formulas.end())
                return equal(it->second, f);
            s.formulas.emplace(p->meta, f);
            return true;
        }
        case Pat::K::Bool: {
            const auto* b = std::get_if<BoolNode>(&f->node);
            return b && b->value == p->value;
        }
        case Pat::K::Not: {
            const auto* n = std::get_if<NotNode>(&f->node);
            return n && match_pat(p->a, n->sub, s);
        }
        case Pat::K::Bin: {
            const auto* b = std::get_if<BinaryNode>(&f->node);
            return b && b->op == p->op && match_pat(p->a, b->lhs, s) &&
                   match_pat(p->b, b->rhs, s);
        }
    }
    return false;
}

FormulaPtr build_pat(const PatPtr& p, const MetaSubst& s) {
    switch (p->kind) {
        case Pat::K::Meta: return need_formula(s, p->meta);
        case Pat::K::Bool: return mk_bool(p->value);
        case Pat::K::Not: return mk_not(build_pat(p->a, s));
        case Pat::K::Bin: {
            auto lhs = build_pat(p->a, s);
            auto rhs = build_pat(p->b, s);
            switch (p->op) {
                case Conn::And: return mk_and(std::move(lhs), std::move(rhs));
                case Conn::Or: return mk_or(std::move(lhs), std::move(rhs));
                case Conn::Implies: return mk_implies(std::move(lhs), std::move(rhs));
                case Conn::Iff: return mk_iff(std::move(lhs), std::move(rhs));
            }
        }
    }
    throw Error("bad pattern");
}

// --- quantifier / equality schema helpers -----------------------------------

struct QuantShape {
    bool universal;
    int var;
    FormulaPtr body;
};

std::optional<QuantShape> as_quant(const FormulaPtr& f, bool universal) {
    const auto* q = std::get_if<QuantNode>(&f->node);
    if (!q || q->universal != universal)
        return std::nullopt;
    return QuantShape{q->universal, q->var, q->body};
}

std::optional<std::pair<FormulaPtr, FormulaPtr>> as_implies(const FormulaPtr& f) {
    const auto* b = std::get_if<BinaryNode>(&f->node);
    if (!b || b->op != Conn::Implies)
        return std::nullopt;
    return std::make_pair(b->lhs, b->rhs);
}

std::optional<std::pair<FormulaPtr, FormulaPtr>> as_or(const FormulaPtr& f) {
    const auto* b = std::get_if<BinaryNode>(&f->node);
    if (!b || b->op != Conn::Or)
        return std::nullopt;
    return std::make_pair(b->lhs, b->rhs);
}

std::optional<std::pair<int, FormulaPtr>> as_schematic_q(const FormulaPtr& f) {
    const auto* c = std::get_if<CountNode>(&f->node);
    if (!c || c->threshold)
        return std::nullopt;
    return std::make_pair(c->var, c->body);
}

/// Candidate replacement variables for inverting A[x:=t] = B: x itself plus
/// everything free in A or B, in id order.
std::vector<int> substitution_candidates(int x, const FormulaPtr& a, const FormulaPtr& b) {
    std::vector<int> out{x};
    out.insert(out.end(), a->free_ids.begin(), a->free_ids.end());
    out.insert(out.end(), b->free_ids.begin(), b->free_ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string fresh_var_avoiding(const std::vector<const Formula*>& avoid,
                               const std::vector<std::string>& also_avoid) {
    for (int i = 0;; ++i) {
        std::string name = "w" + std::to_string(i);
        int id = intern_var(name);
        bool clash = std::find(also_avoid.begin(), also_avoid.end(), name) != also_avoid.end();
        for (const Formula* f : avoid)
            clash = clash || is_free_in(*f, id);
        if (!clash)
            return name;
    }
}

// --- the fixed first-order schema list ---------------------------------------

struct Schema {
    std::string id;
    std::function<FormulaPtr(const MetaSubst&)> instantiate;
    std::function<std::optional<MetaSubst>(const FormulaPtr&)> match;
};

Schema pattern_schema(std::string id, PatPtr pat) {
    return Schema{
        std::move(id),
        [pat](const MetaSubst& s) { return build_pat(pat, s); },
        [pat](const FormulaPtr& f) -> std::optional<MetaSubst> {
            MetaSubst s;
            if (match_pat(pat, f, s))
                return s;
            return std::nullopt;
        }};
}

const std::vector<Schema>& fo_schemas() {
    static const std::vector<Schema> schemas = [] {
        std::vector<Schema> v;
        auto A = pmeta("A"), B = pmeta("B"), C = pmeta("C");
        v.push_back(pattern_schema("P1", pimp(A, pimp(B, A))));
        v.push_back(pattern_schema(
            "P2", pimp(pimp(A, pimp(B, C)), pimp(pimp(A, B), pimp(A, C)))));
        v.push_back(pattern_schema("P3", pimp(pimp(pnot(A), pnot(B)), pimp(B, A))));
        v.push_back(pattern_schema("AND1", pimp(pbin(Conn::And, A, B), A)));
        v.push_back(pattern_schema("AND2", pimp(pbin(Conn::And, A, B), B)));
        v.push_back(pattern_schema("AND3", pimp(A, pimp(B, pbin(Conn::And, A, B)))));
        v.push_back(pattern_schema("OR1", pimp(A, pbin(Conn::Or, A, B))));
        v.push_back(pattern_schema("OR2", pimp(B, pbin(Conn::Or, A, B))));
        v.push_back(pattern_schema(
            "OR3", pimp(pimp(A, C), pimp(pimp(B, C), pimp(pbin(Conn::Or, A, B), C)))));
        v.push_back(pattern_schema("IFF1", pimp(pbin(Conn::Iff, A, B), pimp(A, B))));
        v.push_back(pattern_schema("IFF2", pimp(pbin(Conn::Iff, A, B), pimp(B, A))));
        v.push_back(
            pattern_schema("IFF3", pimp(pimp(A, B), pimp(pimp(B, A), pbin(Conn::Iff, A, B)))));
        v.push_back(pattern_schema("EFQ", pimp(pbool(false), A)));
        v.push_back(pattern_schema("TRUE", pbool(true)));

        // UI: forall x. A -> A[x:=t]
        v.push_back(Schema{
            "UI",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto x = need_var(s, "x");
                auto t = need_var(s, "t");
                int xi = intern_var(x), ti = intern_var(t);
                if (!is_free_for(*a, xi, ti))
                    throw Error("UI: '" + t + "' is not free for '" + x + "'");
                return mk_implies(mk_forall(x, a), substitute_free(a, xi, ti));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto all = as_quant(imp->first, true);
                if (!all)
                    return std::nullopt;
                for (int t : substitution_candidates(all->var, all->body, imp->second)) {
                    if (!is_free_for(*all->body, all->var, t))
                        continue;
                    if (equal(substitute_free(all->body, all->var, t), imp->second)) {
                        MetaSubst s;
                        s.formulas["A"] = all->body;
                        s.variables["x"] = var_name(all->var);
                        s.variables["t"] = var_name(t);
                        return s;
                    }
                }
                return std::nullopt;
            }});

        // UD: forall x.(A -> B) -> (forall x. A -> forall x. B)
        v.push_back(Schema{
            "UD",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto b = need_formula(s, "B");
                auto x = need_var(s, "x");
                return mk_implies(mk_forall(x, mk_implies(a, b)),
                                  mk_implies(mk_forall(x, a), mk_forall(x, b)));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto all = as_quant(imp->first, true);
                if (!all)
                    return std::nullopt;
                auto body = as_implies(all->body);
                auto rhs = as_implies(imp->second);
                if (!body || !rhs)
                    return std::nullopt;
                auto fa = as_quant(rhs->first, true);
                auto fb = as_quant(rhs->second, true);
                if (!fa || !fb || fa->var != all->var || fb->var != all->var)
                    return std::nullopt;
                if (!equal(fa->body, body->first) || !equal(fb->body, body->second))
                    return std::nullopt;
                MetaSubst s;
                s.formulas["A"] = body->first;
                s.formulas["B"] = body->second;
                s.variables["x"] = var_name(all->var);
                return s;
            }});

        // UV: A -> forall x. A   (x not free in A)
        v.push_back(Schema{
            "UV",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto x = need_var(s, "x");
                if (is_free_in(*a, intern_var(x)))
                    throw Error("UV: '" + x + "' occurs free");
                return mk_implies(a, mk_forall(x, a));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto all = as_quant(imp->second, true);
                if (!all || is_free_in(*imp->first, all->var) ||
                    !equal(imp->first, all->body))
                    return std::nullopt;
                MetaSubst s;
                s.formulas["A"] = all->body;
                s.variables["x"] = var_name(all->var);
                return s;
            }});

        // EI: A[x:=t] -> exists x. A
        v.push_back(Schema{
            "EI",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto x = need_var(s, "x");
                auto t = need_var(s, "t");
                int xi = intern_var(x), ti = intern_var(t);
                if (!is_free_for(*a, xi, ti))
                    throw Error("EI: '" + t + "' is not free for '" + x + "'");
                return mk_implies(substitute_free(a, xi, ti), mk_exists(x, a));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto ex = as_quant(imp->second, false);
                if (!ex)
                    return std::nullopt;
                for (int t : substitution_candidates(ex->var, ex->body, imp->first)) {
                    if (!is_free_for(*ex->body, ex->var, t))
                        continue;
                    if (equal(substitute_free(ex->body, ex->var, t), imp->first)) {
                        MetaSubst s;
                        s.formulas["A"] = ex->body;
                        s.variables["x"] = var_name(ex->var);
                        s.variables["t"] = var_name(t);
                        return s;
                    }
                }
                return std::nullopt;
            }});

        // EE: forall x.(A -> B) -> (exists x. A -> B)   (x not free in B)
        v.push_back(Schema{
            "EE",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto b = need_formula(s, "B");
                auto x = need_var(s, "x");
                if (is_free_in(*b, intern_var(x)))
                    throw Error("EE: '" + x + "' occurs free in the conclusion");
                return mk_implies(mk_forall(x, mk_implies(a, b)),
                                  mk_implies(mk_exists(x, a), b));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto all = as_quant(imp->first, true);
                if (!all)
                    return std::nullopt;
                auto body = as_implies(all->body);
                auto rhs = as_implies(imp->second);
                if (!body || !rhs)
                    return std::nullopt;
                auto ex = as_quant(rhs->first, false);
                if (!ex || ex->var != all->var || !equal(ex->body, body->first) ||
                    !equal(rhs->second, body->second) || is_free_in(*body->second, all->var))
                    return std::nullopt;
                MetaSubst s;
                s.formulas["A"] = body->first;
                s.formulas["B"] = body->second;
                s.variables["x"] = var_name(all->var);
                return s;
            }});

        // EQR: y = y
        v.push_back(Schema{
            "EQR",
            [](const MetaSubst& s) {
                auto y = need_var(s, "y");
                return mk_equal(y, y);
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                const auto* e = std::get_if<EqualNode>(&f->node);
                if (!e || e->lhs != e->rhs)
                    return std::nullopt;
                MetaSubst s;
                s.variables["y"] = var_name(e->lhs);
                return s;
            }});

        // EQS: x = y -> y = x
        v.push_back(Schema{
            "EQS",
            [](const MetaSubst& s) {
                auto x = need_var(s, "x");
                auto y = need_var(s, "y");
                return mk_implies(mk_equal(x, y), mk_equal(y, x));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                const auto* l = std::get_if<EqualNode>(&imp->first->node);
                const auto* r = std::get_if<EqualNode>(&imp->second->node);
                if (!l || !r || l->lhs != r->rhs || l->rhs != r->lhs)
                    return std::nullopt;
                MetaSubst s;
                s.variables["x"] = var_name(l->lhs);
                s.variables["y"] = var_name(l->rhs);
                return s;
            }});

        // EQT: x = y -> (y = z -> x = z)
        v.push_back(Schema{
            "EQT",
            [](const MetaSubst& s) {
                auto x = need_var(s, "x");
                auto y = need_var(s, "y");
                auto z = need_var(s, "z");
                return mk_implies(mk_equal(x, y), mk_implies(mk_equal(y, z), mk_equal(x, z)));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                auto inner = as_implies(imp->second);
                if (!inner)
                    return std::nullopt;
                const auto* xy = std::get_if<EqualNode>(&imp->first->node);
                const auto* yz = std::get_if<EqualNode>(&inner->first->node);
                const auto* xz = std::get_if<EqualNode>(&inner->second->node);
                if (!xy || !yz || !xz || xy->rhs != yz->lhs || xy->lhs != xz->lhs ||
                    yz->rhs != xz->rhs)
                    return std::nullopt;
                MetaSubst s;
                s.variables["x"] = var_name(xy->lhs);
                s.variables["y"] = var_name(xy->rhs);
                s.variables["z"] = var_name(yz->rhs);
                return s;
            }});

        // EQSUB: x = y -> (A[z:=x] -> A[z:=y])
        v.push_back(Schema{
            "EQSUB",
            [](const MetaSubst& s) {
                auto a = need_formula(s, "A");
                auto z = need_var(s, "z");
                auto x = need_var(s, "x");
                auto y = need_var(s, "y");
                int zi = intern_var(z), xi = intern_var(x), yi = intern_var(y);
                if (!is_free_for(*a, zi, xi) || !is_free_for(*a, zi, yi))
                    throw Error("EQSUB: substitution would capture");
                return mk_implies(mk_equal(x, y), mk_implies(substitute_free(a, zi, xi),
                                                             substitute_free(a, zi, yi)));
            },
            [](const FormulaPtr& f) -> std::optional<MetaSubst> {
                auto imp = as_implies(f);
                if (!imp)
                    return std::nullopt;
                const auto* e = std::get_if<EqualNode>(&imp->first->node);
                auto inner = as_implies(imp->second);
                if (!e || !inner)
                    return std::nullopt;
                int x = e->lhs, y = e->rhs;
                const auto& b = inner->first;
                const auto& c = inner->second;
                // uniform replacement: A = B with every free x renamed to a
                // fresh z
                std::string z =
                    fresh_var_avoiding({b.get(), c.get()}, {var_name(x), var_name(y)});
                int zi = intern_var(z);
                FormulaPtr a = substitute_free(b, x, zi);
                if (is_free_for(*a, zi, x) && is_free_for(*a, zi, y) &&
                    equal(substitute_free(a, zi, x), b) &&
                    equal(substitute_free(a, zi, y), c)) {
                    MetaSubst s;
                    s.formulas["A"] = a;
                    s.variables["z"] = z;
                    s.variables["x"] = var_name(x);
                    s.variables["y"] = var_name(y);
                    return s;
                }
                // z not occurring at all: both sides must coincide
                if (equal(b, c)) {
                    MetaSubst s;
                    s.formulas["A"] = b;
                    s.variables["z"] = z;
                    s.variables["x"] = var_name(x);
                    s.variables["y"] = var_name(y);
                    return s;
                }
                return std::nullopt;
            }});
        return v;
    }();
    return schemas;
}

const Schema* find_schema(const std::string& id) {
    for (const auto& s : fo_schemas())
        if (s.id == id)
            return &s;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& fo_schema_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& s : fo_schemas())
            v.push_back(s.id);
        return v;
    }();
    return ids;
}

FormulaPtr instantiate_fo(const std::string& schema, const MetaSubst& subst) {
    const Schema* s = find_schema(schema);
    if (!s)
        throw Error("unknown schema '" + schema + "'");
    return s->instantiate(subst);
}

std::optional<std::pair<std::string, MetaSubst>> match_fo_axiom(const FormulaPtr& f) {
    for (const auto& s : fo_schemas())
        if (auto m = s.match(f))
            return std::make_pair(s.id, std::move(*m));
    return std::nullopt;
}

FormulaPtr instantiate_keisler(int index, const MetaSubst& subst) {
    switch (index) {
        case 1: {
            auto x = need_var(subst, "x");
            auto y = need_var(subst, "y");
            auto z = need_var(subst, "z");
            if (x == y || x == z)
                throw Error("axiom 1 needs x distinct from y and z");
            return mk_not(
                mk_schematic_q(x, mk_or(mk_equal(x, y), mk_equal(x, z))));
        }
        case 2: {
            auto a = need_formula(subst, "A");
            auto b = need_formula(subst, "B");
            auto x = need_var(subst, "x");
            return mk_implies(mk_forall(x, mk_implies(a, b)),
                              mk_implies(mk_schematic_q(x, a), mk_schematic_q(x, b)));
        }
        case 3: {
            auto a = need_formula(subst, "A");
            auto x = need_var(subst, "x");
            auto y = need_var(subst, "y");
            int xi = intern_var(x), yi = intern_var(y);
            if (xi != yi) {
                if (!is_free_for(*a, xi, yi))
                    throw Error("axiom 3: '" + y + "' is not free for '" + x + "'");
                if (is_free_in(*a, yi))
                    throw Error("axiom 3: '" + y + "' already occurs free");
            }
            return mk_implies(mk_schematic_q(x, a),
                              mk_schematic_q(y, substitute_free(a, xi, yi)));
        }
        case 4: {
            auto a = need_formula(subst, "A");
            auto x = need_var(subst, "x");
            auto y = need_var(subst, "y");
            if (x == y)
                throw Error("axiom 4 needs two distinct variables");
            return mk_implies(
                mk_schematic_q(y, mk_exists(x, a)),
                mk_or(mk_exists(x, mk_schematic_q(y, a)),
                      mk_schematic_q(x, mk_exists(y, a))));
        }
        default:
            throw Error("Keisler axiom index must be 1..4");
    }
}

std::optional<std::pair<int, MetaSubst>> match_keisler_axiom(const FormulaPtr& f) {
    // axiom 1: !Q x. (x = y | x = z)
    if (const auto* nn = std::get_if<NotNode>(&f->node)) {
        if (auto q = as_schematic_q(nn->sub)) {
            if (auto disj = as_or(q->second)) {
                const auto* l = std::get_if<EqualNode>(&disj->first->node);
                const auto* r = std::get_if<EqualNode>(&disj->second->node);
                if (l && r && l->lhs == q->first && r->lhs == q->first &&
                    l->rhs != q->first && r->rhs != q->first) {
                    MetaSubst s;
                    s.variables["x"] = var_name(q->first);
                    s.variables["y"] = var_name(l->rhs);
                    s.variables["z"] = var_name(r->rhs);
                    return std::make_pair(1, std::move(s));
                }
            }
        }
    }
    auto imp = as_implies(f);
    if (!imp)
        return std::nullopt;
    // axiom 2: forall x.(A -> B) -> (Q x. A -> Q x. B)
    if (auto all = as_quant(imp->first, true)) {
        if (auto body = as_implies(all->body)) {
            if (auto rhs = as_implies(imp->second)) {
                auto qa = as_schematic_q(rhs->first);
                auto qb = as_schematic_q(rhs->second);
                if (qa && qb && qa->first == all->var && qb->first == all->var &&
                    equal(qa->second, body->first) && equal(qb->second, body->second)) {
                    MetaSubst s;
                    s.formulas["A"] = body->first;
                    s.formulas["B"] = body->second;
                    s.variables["x"] = var_name(all->var);
                    return std::make_pair(2, std::move(s));
                }
            }
        }
    }
    // axiom 4: Q y. exists x. A -> (exists x. Q y. A | Q x. exists y. A)
    if (auto qy = as_schematic_q(imp->first)) {
        if (auto ex = as_quant(qy->second, false)) {
            if (auto disj = as_or(imp->second)) {
                auto ex2 = as_quant(disj->first, false);
                auto qx = as_schematic_q(disj->second);
                if (ex2 && qx && ex2->var == ex->var && qx->first == ex->var &&
                    ex->var != qy->first) {
                    auto qy2 = as_schematic_q(ex2->body);
                    auto ey2 = as_quant(qx->second, false);
                    if (qy2 && ey2 && qy2->first == qy->first && ey2->var == qy->first &&
                        equal(qy2->second, ex->body) && equal(ey2->body, ex->body)) {
                        MetaSubst s;
                        s.formulas["A"] = ex->body;
                        s.variables["x"] = var_name(ex->var);
                        s.variables["y"] = var_name(qy->first);
                        return std::make_pair(4, std::move(s));
                    }
                }
            }
        }
    }
    // axiom 3: Q x. A -> Q y. A[x:=y]
    if (auto qa = as_schematic_q(imp->first)) {
        if (auto qb = as_schematic_q(imp->second)) {
            int x = qa->first, y = qb->first;
            bool ok;
            if (x == y) {
                ok = equal(qa->second, qb->second);
            } else {
                ok = is_free_for(*qa->second, x, y) && !is_free_in(*qa->second, y) &&
                     equal(substitute_free(qa->second, x, y), qb->second);
            }
            if (ok) {
                MetaSubst s;
                s.formulas["A"] = qa->second;
                s.variables["x"] = var_name(x);
                s.variables["y"] = var_name(y);
                return std::make_pair(3, std::move(s));
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// checking

namespace {

std::string line_ref_error(int ref, int current) {
    return "line " + std::to_string(ref) + " is not an earlier line of the proof (current " +
           std::to_string(current) + ")";
}

}  // namespace

CheckResult check_proof(const Proof& p) {
    if (p.lines.empty())
        return {false, 0, "empty proof"};
    for (int i = 0; i < int(p.lines.size()); ++i) {
        const ProofLine& line = p.lines[std::size_t(i)];
        const int lineno = i + 1;
        auto reject = [&](const std::string& reason) {
            return CheckResult{false, lineno, reason};
        };
        auto earlier = [&](int ref) { return ref >= 1 && ref <= i; };

        if (const auto* j = std::get_if<Premise>(&line.justification)) {
            if (j->index < 1 || j->index > int(p.premises.size()))
                return reject("premise index " + std::to_string(j->index) + " out of range");
            if (!equal(line.formula, p.premises[std::size_t(j->index - 1)]))
                return reject("formula does not match declared premise " +
                              std::to_string(j->index));
        } else if (const auto* j = std::get_if<FoAxiom>(&line.justification)) {
            if (!find_schema(j->schema))
                return reject("unknown schema '" + j->schema + "'");
            if (j->subst) {
                FormulaPtr inst;
                try {
                    inst = instantiate_fo(j->schema, *j->subst);
                } catch (const Error& e) {
                    return reject(e.what());
                }
                if (!equal(inst, line.formula))
                    return reject("recorded substitution does not yield this line");
            } else {
                auto m = match_fo_axiom(line.formula);
                if (!m || m->first != j->schema) {
                    // the cited schema specifically must match
                    const Schema* s = find_schema(j->schema);
                    if (!s->match(line.formula))
                        return reject("not an instance of schema " + j->schema);
                }
            }
        } else if (const auto* j = std::get_if<KeislerAxiom>(&line.justification)) {
            if (j->index < 1 || j->index > 4)
                return reject("Keisler axiom index must be 1..4");
            if (j->subst) {
                FormulaPtr inst;
                try {
                    inst = instantiate_keisler(j->index, *j->subst);
                } catch (const Error& e) {
                    return reject(e.what());
                }
                if (!equal(inst, line.formula))
                    return reject("recorded substitution does not yield this line");
            } else {
                auto m = match_keisler_axiom(line.formula);
                if (!m || m->first != j->index)
                    return reject("not an instance of Keisler axiom " +
                                  std::to_string(j->index));
            }
        } else if (const auto* j = std::get_if<ModusPonens>(&line.justification)) {
            if (!earlier(j->antecedent))
                return reject(line_ref_error(j->antecedent, lineno));
            if (!earlier(j->implication))
                return reject(line_ref_error(j->implication, lineno));
            auto imp = as_implies(p.lines[std::size_t(j->implication - 1)].formula);
            if (!imp)
                return reject("line " + std::to_string(j->implication) +
                              " is not an implication");
            if (!equal(imp->first, p.lines[std::size_t(j->antecedent - 1)].formula))
                return reject("antecedent of line " + std::to_string(j->implication) +
                              " does not match line " + std::to_string(j->antecedent));
            if (!equal(imp->second, line.formula))
                return reject("conclusion does not match the implication's consequent");
        } else if (const auto* j = std::get_if<Generalization>(&line.justification)) {
            if (!earlier(j->from))
                return reject(line_ref_error(j->from, lineno));
            auto all = as_quant(line.formula, true);
            if (!all || var_name(all->var) != j->var ||
                !equal(all->body, p.lines[std::size_t(j->from - 1)].formula))
                return reject("line is not the universal closure of line " +
                              std::to_string(j->from) + " over '" + j->var + "'");
            int vi = intern_var(j->var);
            for (std::size_t k = 0; k < p.premises.size(); ++k)
                if (is_free_in(*p.premises[k], vi))
                    return reject("generalized variable '" + j->var +
                                  "' occurs free in premise " + std::to_string(k + 1));
        }
    }
    return {true, 0, ""};
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

MetaSubst parse_subst(const std::string& text, int lineno) {
    MetaSubst out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find(';', pos);
        std::string item = trim(text.substr(pos, end == std::string::npos ? std::string::npos
                                                                          : end - pos));
        pos = end == std::string::npos ? text.size() : end + 1;
        if (item.empty())
            continue;
        auto assign = item.find(":=");
        if (assign == std::string::npos)
            throw ParseError(lineno, 1, "':=' in substitution entry", item);
        std::string name = trim(item.substr(0, assign));
        std::string value = trim(item.substr(assign + 2));
        if (name.empty() || value.empty())
            throw ParseError(lineno, 1, "name := value", item);
        // a bare identifier is a variable; anything else must parse as a
        // formula
        bool bare = std::isalpha(static_cast<unsigned char>(value[0])) &&
                    std::all_of(value.begin(), value.end(), [](char c) {
                        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                    }) &&
                    !is_reserved_word(value);
        if (bare)
            out.variables[name] = value;
        else
            out.formulas[name] = parse_formula(value);
    }
    return out;
}

}  // namespace

Proof parse_proof(const std::string& text) {
    Proof proof;
    std::map<int, FormulaPtr> premise_slots;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    int expected = 1;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        auto dot = line.find('.');
        if (dot == std::string::npos)
            throw ParseError(lineno, 1, "'<n>.'", line);
        int number = std::stoi(line.substr(0, dot));
        if (number != expected)
            throw ParseError(lineno, 1, "line number " + std::to_string(expected),
                             std::to_string(number));
        ++expected;
        auto semi = line.find(';', dot);
        if (semi == std::string::npos)
            throw ParseError(lineno, 1, "';' before the justification", line);
        FormulaPtr formula = parse_formula(trim(line.substr(dot + 1, semi - dot - 1)));
        std::string just = trim(line.substr(semi + 1));

        std::optional<MetaSubst> subst;
        auto bracket = just.find('[');
        if (bracket != std::string::npos) {
            auto close = just.rfind(']');
            if (close == std::string::npos || close < bracket)
                throw ParseError(lineno, 1, "']'", just);
            subst = parse_subst(just.substr(bracket + 1, close - bracket - 1), lineno);
            just = trim(just.substr(0, bracket));
        }
        std::istringstream js(just);
        std::string kw;
        js >> kw;
        Justification j;
        if (kw == "premise") {
            int idx;
            if (!(js >> idx))
                throw ParseError(lineno, 1, "premise index", just);
            premise_slots[idx] = formula;
            j = Premise{idx};
        } else if (kw == "ax0") {
            std::string id;
            if (!(js >> id))
                throw ParseError(lineno, 1, "schema id", just);
            j = FoAxiom{id, subst};
        } else if (kw == "ax1" || kw == "ax2" || kw == "ax3" || kw == "ax4") {
            j = KeislerAxiom{kw[2] - '0', subst};
        } else if (kw == "mp") {
            int a, b;
            if (!(js >> a >> b))
                throw ParseError(lineno, 1, "two line numbers", just);
            j = ModusPonens{a, b};
        } else if (kw == "gen") {
            int a;
            std::string var;
            if (!(js >> a >> var))
                throw ParseError(lineno, 1, "line number and variable", just);
            j = Generalization{a, var};
        } else {
            throw ParseError(lineno, 1, "premise/ax0/ax1..ax4/mp/gen", kw);
        }
        proof.lines.push_back(ProofLine{std::move(formula), std::move(j)});
    }
    if (proof.lines.empty())
        throw ParseError(lineno, 1, "at least one proof line", "end of input");
    for (const auto& [idx, f] : premise_slots) {
        if (idx != int(proof.premises.size()) + 1)
            throw ParseError(1, 1, "premise indices 1..k in order",
                             "premise " + std::to_string(idx));
        proof.premises.push_back(f);
    }
    return proof;
}

std::string format_proof(const Proof& p) {
    std::ostringstream out;
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
        const auto& line = p.lines[i];
        out << (i + 1) << ". " << render(line.formula) << " ; ";
        if (const auto* j = std::get_if<Premise>(&line.justification)) {
            out << "premise " << j->index;
        } else if (const auto* j = std::get_if<FoAxiom>(&line.justification)) {
            out << "ax0 " << j->schema;
            if (j->subst)
                out << " [" << j->subst->to_string() << "]";
        } else if (const auto* j = std::get_if<KeislerAxiom>(&line.justification)) {
            out << "ax" << j->index;
            if (j->subst)
                out << " [" << j->subst->to_string() << "]";
        } else if (const auto* j = std::get_if<ModusPonens>(&line.justification)) {
            out << "mp " << j->antecedent << " " << j->implication;
        } else if (const auto* j = std::get_if<Generalization>(&line.justification)) {
            out << "gen " << j->from << " " << j->var;
        }
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// soundness scan

namespace {

FormulaPtr universal_closure(FormulaPtr f) {
    while (!f->free_ids.empty())
        f = mk_forall(var_name(f->free_ids.front()), std::move(f));
    return f;
}

}  // namespace

std::vector<std::pair<int, FormulaPtr>> soundness_instance_pool(const std::set<int>& axioms,
                                                                std::uint64_t seed) {
    // formula pools over a single relation symbol each, so per-instance
    // structure scans stay small
    std::vector<FormulaPtr> unary{
        mk_rel("P", {"x"}),
        mk_not(mk_rel("P", {"x"})),
        mk_or(mk_rel("P", {"x"}), mk_equal("x", "y")),
        mk_and(mk_rel("P", {"x"}), mk_rel("P", {"y"})),
    };
    std::vector<FormulaPtr> binary{
        mk_rel("R", {"x", "y"}),
        mk_rel("R", {"y", "x"}),
        mk_rel("R", {"x", "x"}),
        mk_and(mk_rel("R", {"x", "y"}), mk_not(mk_rel("R", {"y", "x"}))),
        mk_exists("z", mk_and(mk_rel("R", {"x", "z"}), mk_rel("R", {"z", "y"}))),
    };
    {
        std::mt19937_64 rng(seed);
        GenOptions unary_opts;
        unary_opts.vocabulary = Vocabulary::of({{"P", 1}});
        unary_opts.variables = {"x", "y", "z"};
        unary_opts.max_depth = 2;
        unary_opts.with_hartig = unary_opts.with_rescher = unary_opts.with_well_order = false;
        unary_opts.with_big_connectives = false;
        GenOptions binary_opts = unary_opts;
        binary_opts.vocabulary = Vocabulary::of({{"R", 2}});
        for (int i = 0; i < 3; ++i) {
            unary.push_back(random_formula(rng, unary_opts));
            binary.push_back(random_formula(rng, binary_opts));
        }
    }

    std::vector<std::pair<int, FormulaPtr>> pool;
    auto add = [&](int axiom, const MetaSubst& s) {
        pool.emplace_back(axiom, universal_closure(instantiate_keisler(axiom, s)));
    };
    if (axioms.count(1)) {
        MetaSubst s;
        s.variables = {{"x", "x"}, {"y", "y"}, {"z", "z"}};
        add(1, s);
        s.variables = {{"x", "x"}, {"y", "y"}, {"z", "y"}};
        add(1, s);
    }
    if (axioms.count(2)) {
        auto pairs = [&](const std::vector<FormulaPtr>& fs) {
            for (std::size_t i = 0; i < fs.size(); ++i)
                for (std::size_t j = 0; j < fs.size(); ++j) {
                    if (i == j)
                        continue;
                    MetaSubst s;
                    s.formulas = {{"A", fs[i]}, {"B", fs[j]}};
                    s.variables = {{"x", "x"}};
                    add(2, s);
                }
        };
        pairs(unary);
        pairs(binary);
    }
    if (axioms.count(3)) {
        for (const auto& fs : {unary, binary})
            for (const auto& f : fs) {
                MetaSubst s;
                s.formulas = {{"A", f}};
                s.variables = {{"x", "x"}, {"y", "w"}};
                try {
                    add(3, s);
                } catch (const Error&) {
                    // conditions can fail for generated formulas mentioning w
                }
            }
    }
    if (axioms.count(4)) {
        for (const auto& fs : {unary, binary})
            for (const auto& f : fs) {
                MetaSubst s;
                s.formulas = {{"A", f}};
                s.variables = {{"x", "x"}, {"y", "y"}};
                add(4, s);
            }
    }
    return pool;
}

SoundnessReport soundness_scan(int k, int max_size, const std::set<int>& axioms,
                               std::uint64_t seed, std::uint64_t budget) {
    if (k < 1)
        throw ConfigError("counting threshold must be at least 1");
    SoundnessReport report;
    EvalEnv env;
    env.q = QInterpretation::count_threshold(k);
    for (const auto& [axiom, instance] : soundness_instance_pool(axioms, seed)) {
        ++report.instances;
        Evaluator ev(instance, env);
        Vocabulary voc = inferred_vocabulary(*instance);
        for (int n = 1; n <= max_size; ++n) {
            StructureEnumerator en(voc, n, budget);
            Structure s(voc, n);
            while (en.next(s)) {
                if (++report.evaluations > budget)
                    throw BudgetError("soundness scan exceeded its budget",
                                      report.evaluations, budget);
                if (!ev.sentence(s))
                    report.counterexamples.push_back(SoundnessCex{axiom, instance, s});
            }
        }
    }
    return report;
}

}  // namespace finlog
