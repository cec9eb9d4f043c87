#include "finlog/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "finlog/errors.hpp"

namespace finlog {

QInterpretation QInterpretation::count_threshold(int k) {
    if (k < 1)
        throw ConfigError("counting threshold must be at least 1");
    return QInterpretation{Kind::CountThreshold, k};
}

QInterpretation QInterpretation::named(const std::string& name) {
    if (name == "hartig")
        return QInterpretation{Kind::Hartig, 1};
    if (name == "rescher")
        return QInterpretation{Kind::Rescher, 1};
    if (name == "wellorder")
        return QInterpretation{Kind::WellOrder, 1};
    throw ConfigError("unknown quantifier interpretation '" + name + "'");
}

EvalEnv& EvalEnv::with_oracle(ClassOracle oracle) {
    auto name = oracle.name;
    oracles.insert_or_assign(name, std::move(oracle));
    return *this;
}

EvalEnv& EvalEnv::with_q(QInterpretation qi) {
    q = qi;
    return *this;
}

namespace {

// Memo storage per shared node: flat table indexed by the packed restricted
// assignment when small enough, map fallback otherwise.
struct MemoTable {
    bool flat = false;
    std::vector<signed char> dense;  // -1 unknown, 0 false, 1 true
    std::unordered_map<std::uint64_t, bool> sparse;
};

}  // namespace

struct Evaluator::Ctx {
    const Structure& s;
    std::vector<int> assignment;  // by variable id, -1 = unbound
    std::unordered_map<const Formula*, MemoTable> memo;
};

Evaluator::Evaluator(FormulaPtr formula, EvalEnv env)
    : root_(std::move(formula)), env_(std::move(env)) {
    // Count DAG in-edges; nodes referenced at least twice get a memo slot.
    std::unordered_map<const Formula*, int> refs;
    std::vector<const Formula*> stack{root_.get()};
    std::vector<const Formula*> order;
    while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (++refs[f] > 1)
            continue;
        order.push_back(f);
        for (int id : f->free_ids)
            max_var_id_ = std::max(max_var_id_, id);
        visit_children(*f, [&](const FormulaPtr& c) {
            // bound variables still occupy assignment slots
            stack.push_back(c.get());
        });
    }
    for (const Formula* f : order) {
        if (const auto* q = std::get_if<QuantNode>(&f->node))
            max_var_id_ = std::max(max_var_id_, q->var);
        else if (const auto* c = std::get_if<CountNode>(&f->node))
            max_var_id_ = std::max(max_var_id_, c->var);
        else if (const auto* c = std::get_if<CompareQNode>(&f->node))
            max_var_id_ = std::max({max_var_id_, c->left_var, c->right_var});
        else if (const auto* w = std::get_if<WellOrderNode>(&f->node))
            max_var_id_ = std::max({max_var_id_, w->left_var, w->right_var});
        else if (const auto* o = std::get_if<OracleQNode>(&f->node))
            for (int v : o->vars)
                max_var_id_ = std::max(max_var_id_, v);
        if (refs[f] > 1 && !f->free_ids.empty() && f->free_ids.size() <= 16)
            shared_.push_back(f);
    }
    std::sort(shared_.begin(), shared_.end());
}

namespace {

std::uint64_t pack_assignment(const Formula* f, const std::vector<int>& assignment, int n) {
    std::uint64_t key = 0;
    for (int id : f->free_ids)
        key = key * std::uint64_t(n) + std::uint64_t(assignment[std::size_t(id)]);
    return key;
}

}  // namespace

bool Evaluator::eval(const Formula* f, Ctx& ctx) const {
    const int n = ctx.s.size();

    MemoTable* memo = nullptr;
    std::uint64_t key = 0;
    if (!shared_.empty() && std::binary_search(shared_.begin(), shared_.end(), f)) {
        auto [it, fresh] = ctx.memo.try_emplace(f);
        memo = &it->second;
        if (fresh) {
            std::uint64_t slots = 1;
            bool small = true;
            for (std::size_t i = 0; i < f->free_ids.size() && small; ++i) {
                slots *= std::uint64_t(n);
                small = slots <= 4096;
            }
            memo->flat = small;
            if (small)
                memo->dense.assign(std::size_t(slots), -1);
        }
        key = pack_assignment(f, ctx.assignment, n);
        if (memo->flat) {
            signed char v = memo->dense[std::size_t(key)];
            if (v >= 0)
                return v != 0;
        } else if (auto it2 = memo->sparse.find(key); it2 != memo->sparse.end()) {
            return it2->second;
        }
    }

    bool result = false;
    if (const auto* x = std::get_if<BoolNode>(&f->node)) {
        result = x->value;
    } else if (const auto* x = std::get_if<RelNode>(&f->node)) {
        auto idx = ctx.s.vocabulary().index_of(x->symbol);
        if (!idx)
            throw EvalError("relation symbol '" + x->symbol + "' is not interpreted");
        const auto& interp = ctx.s.interpretation(*idx);
        if (interp.arity() != int(x->args.size()))
            throw EvalError("relation symbol '" + x->symbol + "' applied with wrong arity");
        std::uint64_t t = 0;
        for (int a : x->args)
            t = t * std::uint64_t(n) + std::uint64_t(ctx.assignment[std::size_t(a)]);
        result = interp.test(t);
    } else if (const auto* x = std::get_if<EqualNode>(&f->node)) {
        result = ctx.assignment[std::size_t(x->lhs)] == ctx.assignment[std::size_t(x->rhs)];
    } else if (const auto* x = std::get_if<NotNode>(&f->node)) {
        result = !eval(x->sub.get(), ctx);
    } else if (const auto* x = std::get_if<BinaryNode>(&f->node)) {
        switch (x->op) {
            case Conn::And:
                result = eval(x->lhs.get(), ctx) && eval(x->rhs.get(), ctx);
                break;
            case Conn::Or:
                result = eval(x->lhs.get(), ctx) || eval(x->rhs.get(), ctx);
                break;
            case Conn::Implies:
                result = !eval(x->lhs.get(), ctx) || eval(x->rhs.get(), ctx);
                break;
            case Conn::Iff:
                result = eval(x->lhs.get(), ctx) == eval(x->rhs.get(), ctx);
                break;
        }
    } else if (const auto* x = std::get_if<BigNode>(&f->node)) {
        result = x->conjunction;
        for (const auto& p : x->parts) {
            if (eval(p.get(), ctx) != x->conjunction) {
                result = !x->conjunction;
                break;
            }
        }
    } else if (const auto* x = std::get_if<QuantNode>(&f->node)) {
        int& slot = ctx.assignment[std::size_t(x->var)];
        int saved = slot;
        result = x->universal;
        for (int v = 0; v < n; ++v) {
            slot = v;
            if (eval(x->body.get(), ctx) != x->universal) {
                result = !x->universal;
                break;
            }
        }
        slot = saved;
    } else if (const auto* x = std::get_if<CountNode>(&f->node)) {
        int threshold;
        if (x->threshold) {
            threshold = *x->threshold;
        } else {
            if (!env_.q)
                throw EvalError("schematic Q has no interpretation in this environment");
            if (env_.q->kind != QInterpretation::Kind::CountThreshold)
                throw EvalError("schematic Q is unary; it cannot be bound to a binary built-in");
            threshold = env_.q->threshold;
        }
        int& slot = ctx.assignment[std::size_t(x->var)];
        int saved = slot;
        int count = 0;
        for (int v = 0; v < n && count < threshold; ++v) {
            slot = v;
            if (eval(x->body.get(), ctx))
                ++count;
        }
        slot = saved;
        result = count >= threshold;
    } else if (const auto* x = std::get_if<CompareQNode>(&f->node)) {
        int left = 0, right = 0;
        {
            int& slot = ctx.assignment[std::size_t(x->left_var)];
            int saved = slot;
            for (int v = 0; v < n; ++v) {
                slot = v;
                if (eval(x->left.get(), ctx))
                    ++left;
            }
            slot = saved;
        }
        {
            int& slot = ctx.assignment[std::size_t(x->right_var)];
            int saved = slot;
            for (int v = 0; v < n; ++v) {
                slot = v;
                if (eval(x->right.get(), ctx))
                    ++right;
            }
            slot = saved;
        }
        result = x->equal ? left == right : left >= right;
    } else if (const auto* x = std::get_if<WellOrderNode>(&f->node)) {
        // On a finite domain "well-orders M" means: strict total order on the
        // whole domain.
        std::vector<bool> rel(std::size_t(n) * std::size_t(n));
        int& sl = ctx.assignment[std::size_t(x->left_var)];
        int& sr = ctx.assignment[std::size_t(x->right_var)];
        int saved_l = sl, saved_r = sr;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                sl = u;
                sr = v;
                rel[std::size_t(u) * n + v] = eval(x->body.get(), ctx);
            }
        sl = saved_l;
        sr = saved_r;
        auto at = [&](int u, int v) { return rel[std::size_t(u) * n + v]; };
        result = true;
        for (int u = 0; u < n && result; ++u) {
            if (at(u, u))
                result = false;  // irreflexive
            for (int v = 0; v < n && result; ++v) {
                if (u != v && at(u, v) == at(v, u))
                    result = false;  // totality + antisymmetry
                for (int w = 0; w < n && result; ++w)
                    if (at(u, v) && at(v, w) && !at(u, w))
                        result = false;  // transitive
            }
        }
    } else {
        const auto& oq = std::get<OracleQNode>(f->node);
        auto it = env_.oracles.find(oq.oracle);
        if (it == env_.oracles.end())
            throw EvalError("unresolved class oracle '" + oq.oracle + "'");
        const ClassOracle& oracle = it->second;
        if (oracle.vocabulary.size() != 1)
            throw EvalError("oracle '" + oq.oracle +
                            "' must have exactly one distinguished symbol");
        const Symbol& sym = oracle.vocabulary.symbols()[0];
        if (sym.arity != int(oq.vars.size()))
            throw EvalError("oracle '" + oq.oracle + "' expects " + std::to_string(sym.arity) +
                            " variables, got " + std::to_string(oq.vars.size()));
        Structure defined(oracle.vocabulary, n);
        auto& interp = defined.interpretation_mut(0);
        std::vector<int> saved;
        for (int v : oq.vars)
            saved.push_back(ctx.assignment[std::size_t(v)]);
        Tuple t(oq.vars.size(), 0);
        bool done = false;
        while (!done) {
            for (std::size_t i = 0; i < oq.vars.size(); ++i)
                ctx.assignment[std::size_t(oq.vars[i])] = t[i];
            if (eval(oq.body.get(), ctx))
                interp.insert(t);
            done = true;
            for (std::size_t i = t.size(); i-- > 0;) {
                if (++t[i] < n) {
                    done = false;
                    break;
                }
                t[i] = 0;
            }
        }
        for (std::size_t i = 0; i < oq.vars.size(); ++i)
            ctx.assignment[std::size_t(oq.vars[i])] = saved[i];
        result = oracle.membership(defined);
    }

    if (memo) {
        if (memo->flat)
            memo->dense[std::size_t(key)] = result ? 1 : 0;
        else
            memo->sparse.emplace(key, result);
    }
    return result;
}

bool Evaluator::sentence(const Structure& s) const {
    if (s.size() < 1)
        throw EvalError("evaluation over the empty domain is rejected");
    if (!root_->is_sentence()) {
        std::string names;
        for (int id : root_->free_ids)
            names += (names.empty() ? "" : ", ") + var_name(id);
        throw EvalError("not a sentence; free variables: " + names);
    }
    Ctx ctx{s, std::vector<int>(std::size_t(max_var_id_ + 1), -1), {}};
    return eval(root_.get(), ctx);
}

SemanticValue Evaluator::value(const Structure& s, const std::vector<std::string>& vars) const {
    if (s.size() < 1)
        throw EvalError("evaluation over the empty domain is rejected");
    std::vector<int> ids;
    for (const auto& v : vars)
        ids.push_back(intern_var(v));
    {
        auto sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw EvalError("duplicate variable in value computation");
        for (int id : root_->free_ids)
            if (!std::binary_search(sorted.begin(), sorted.end(), id))
                throw EvalError("free variable '" + var_name(id) +
                                "' is not among the requested variables");
    }
    int slots = max_var_id_ + 1;
    for (int id : ids)
        slots = std::max(slots, id + 1);

    SemanticValue out;
    out.vars = vars;
    Ctx ctx{s, std::vector<int>(std::size_t(slots), -1), {}};
    Tuple t(vars.size(), 0);
    bool done = vars.empty();
    // iterate all assignments to the requested variables (lexicographic)
    // memo keys cover every free variable of a node, so the table stays valid
    // across the outer assignment loop
    while (true) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            ctx.assignment[std::size_t(ids[i])] = t[i];
        if (eval(root_.get(), ctx))
            out.tuples.insert(t);
        if (done)
            break;
        done = true;
        for (std::size_t i = t.size(); i-- > 0;) {
            if (++t[i] < s.size()) {
                done = false;
                break;
            }
            t[i] = 0;
        }
        if (done)
            break;
    }
    return out;
}

bool eval_sentence(const Structure& s, const FormulaPtr& f, const EvalEnv& env) {
    return Evaluator(f, env).sentence(s);
}

SemanticValue eval_value(const Structure& s, const FormulaPtr& f,
                         const std::vector<std::string>& vars, const EvalEnv& env) {
    return Evaluator(f, env).value(s, vars);
}

// ---------------------------------------------------------------------------
// built-in oracles

namespace {

Vocabulary unary_p() {
    return Vocabulary::of({{"P", 1}});
}

ClassOracle make_oracle(std::string name, Vocabulary voc,
                        std::function<bool(const Structure&)> fn) {
    return ClassOracle{std::move(name), std::move(voc), std::move(fn)};
}

void require_vocabulary(const Structure& s, const Vocabulary& v, const std::string& oracle) {
    if (s.vocabulary() != v)
        throw VocabularyError("structure vocabulary does not match oracle '" + oracle + "'");
}

}  // namespace

ClassOracle oracle_nonempty_p() {
    auto voc = unary_p();
    return make_oracle("nonempty-P", voc, [voc](const Structure& s) {
        require_vocabulary(s, voc, "nonempty-P");
        return s.interpretation(0).count() > 0;
    });
}

ClassOracle oracle_even_p() {
    auto voc = unary_p();
    return make_oracle("even-P", voc, [voc](const Structure& s) {
        require_vocabulary(s, voc, "even-P");
        return s.interpretation(0).count() % 2 == 0;
    });
}

ClassOracle oracle_even_size() {
    auto voc = unary_p();
    return make_oracle("even-size", voc, [voc](const Structure& s) {
        require_vocabulary(s, voc, "even-size");
        return s.size() % 2 == 0;
    });
}

ClassOracle oracle_all() {
    auto voc = unary_p();
    return make_oracle("all", voc, [voc](const Structure& s) {
        require_vocabulary(s, voc, "all");
        return true;
    });
}

ClassOracle oracle_empty() {
    auto voc = unary_p();
    return make_oracle("empty", voc, [voc](const Structure& s) {
        require_vocabulary(s, voc, "empty");
        return false;
    });
}

ClassOracle oracle_from_sentence(const std::string& name, FormulaPtr sentence,
                                 Vocabulary vocabulary, EvalEnv env) {
    auto ev = std::make_shared<Evaluator>(std::move(sentence), std::move(env));
    return ClassOracle{name, std::move(vocabulary),
                       [ev](const Structure& s) { return ev->sentence(s); }};
}

std::optional<ClosureViolation> check_isomorphism_closed(const ClassOracle& oracle, int max_size,
                                                         std::uint64_t budget) {
    for (int n = 1; n <= max_size; ++n) {
        StructureEnumerator en(oracle.vocabulary, n, budget);
        Structure s(oracle.vocabulary, n);
        while (en.next(s)) {
            bool base = oracle.membership(s);
            std::optional<ClosureViolation> hit;
            for_each_permutation(n, [&](const Bijection& pi) {
                if (oracle.membership(apply_bijection(s, pi)) != base) {
                    hit = ClosureViolation{s, pi};
                    return false;
                }
                return true;
            });
            if (hit)
                return hit;
        }
    }
    return std::nullopt;
}

}  // namespace finlog
