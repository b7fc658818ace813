#include "tmc/ir.hpp"

#include <type_traits>

namespace tmc {

std::string to_string(const Path& path) {
    if (path.empty()) return "/";
    std::string out;
    for (auto step : path) {
        out += '/';
        out += std::to_string(step);
    }
    return out;
}

bool operator==(const Pattern& a, const Pattern& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, PVar>) return x.name == y.name;
            else if constexpr (std::is_same_v<T, PWild>) return true;
            else if constexpr (std::is_same_v<T, PInt>) return x.value == y.value;
            else return x.tag == y.tag && x.args == y.args;
        },
        a.node);
}

namespace {

void binders_into(const Pattern& p, std::vector<std::string>& out) {
    if (auto* v = std::get_if<PVar>(&p.node)) {
        out.push_back(v->name);
    } else if (auto* c = std::get_if<PConstr>(&p.node)) {
        for (const auto& sub : c->args) binders_into(sub, out);
    }
}

bool equal_args(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

std::vector<std::string> pattern_binders(const Pattern& p) {
    std::vector<std::string> out;
    binders_into(p, out);
    return out;
}

bool operator==(const FunDef& a, const FunDef& b) {
    return a.name == b.name && a.params == b.params && a.tail_mod_cons == b.tail_mod_cons &&
           equal(a.body, b.body);
}

bool equal(const FunGroup& a, const FunGroup& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

bool operator==(const Program& a, const Program& b) {
    if (a.groups.size() != b.groups.size()) return false;
    for (std::size_t i = 0; i < a.groups.size(); ++i)
        if (!equal(a.groups[i], b.groups[i])) return false;
    return equal(a.main, b.main);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

bool equal(const Expr& a, const Expr& b) {
    if (&a == &b) return true;
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Var>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Int>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, Call>) {
                return x.callee == y.callee && x.tailcall == y.tailcall && equal_args(x.args, y.args);
            } else if constexpr (std::is_same_v<T, Let>) {
                return x.binder == y.binder && equal(x.bound, y.bound) && equal(x.body, y.body);
            } else if constexpr (std::is_same_v<T, Seq>) {
                return equal(x.first, y.first) && equal(x.second, y.second);
            } else if constexpr (std::is_same_v<T, Constr>) {
                return x.tag == y.tag && equal_args(x.args, y.args);
            } else if constexpr (std::is_same_v<T, Match>) {
                if (!equal(x.scrutinee, y.scrutinee) || x.clauses.size() != y.clauses.size())
                    return false;
                for (std::size_t i = 0; i < x.clauses.size(); ++i) {
                    if (!(x.clauses[i].pattern == y.clauses[i].pattern)) return false;
                    if (!equal(x.clauses[i].body, y.clauses[i].body)) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, SetRef>) {
                return equal(x.dest, y.dest) && equal(x.index, y.index) && equal(x.value, y.value);
            } else if constexpr (std::is_same_v<T, Hole>) {
                return true;
            } else {
                return equal(x.group, y.group) && equal(x.body, y.body);
            }
        },
        a.node);
}

ExprPtr make(Expr::Node node, SourceSpan span) {
    return std::make_shared<const Expr>(Expr{std::move(node), span});
}

ExprPtr var(std::string name) { return make(Var{std::move(name)}); }
ExprPtr integer(std::int64_t n) { return make(Int{n}); }
ExprPtr call(std::string callee, std::vector<ExprPtr> args, bool tailcall) {
    return make(Call{std::move(callee), std::move(args), tailcall});
}
ExprPtr let(std::string binder, ExprPtr bound, ExprPtr body) {
    return make(Let{std::move(binder), std::move(bound), std::move(body)});
}
ExprPtr seq(ExprPtr first, ExprPtr second) { return make(Seq{std::move(first), std::move(second)}); }
ExprPtr constr(std::string tag, std::vector<ExprPtr> args) {
    return make(Constr{std::move(tag), std::move(args)});
}
ExprPtr match(ExprPtr scrutinee, std::vector<Clause> clauses) {
    return make(Match{std::move(scrutinee), std::move(clauses)});
}
ExprPtr setref(ExprPtr dest, ExprPtr index, ExprPtr value) {
    return make(SetRef{std::move(dest), std::move(index), std::move(value)});
}
ExprPtr hole() { return make(Hole{}); }
ExprPtr letrec(FunGroup group, ExprPtr body) { return make(Letrec{std::move(group), std::move(body)}); }

Pattern pvar(std::string name) { return Pattern{PVar{std::move(name)}}; }
Pattern pwild() { return Pattern{PWild{}}; }
Pattern pconstr(std::string tag, std::vector<Pattern> args) {
    return Pattern{PConstr{std::move(tag), std::move(args)}};
}
Pattern pint(std::int64_t n) { return Pattern{PInt{n}}; }

const Expr* subterm(const Expr& root, const Path& path) {
    const Expr* cur = &root;
    for (auto step : path) {
        const Expr* next = nullptr;
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Constr>) {
                    if (step < n.args.size()) next = n.args[step].get();
                } else if constexpr (std::is_same_v<T, Let>) {
                    next = step == 0 ? n.bound.get() : step == 1 ? n.body.get() : nullptr;
                } else if constexpr (std::is_same_v<T, Seq>) {
                    next = step == 0 ? n.first.get() : step == 1 ? n.second.get() : nullptr;
                } else if constexpr (std::is_same_v<T, Match>) {
                    if (step == 0) next = n.scrutinee.get();
                    else if (step <= n.clauses.size()) next = n.clauses[step - 1].body.get();
                } else if constexpr (std::is_same_v<T, SetRef>) {
                    next = step == 0 ? n.dest.get()
                         : step == 1 ? n.index.get()
                         : step == 2 ? n.value.get()
                                     : nullptr;
                } else if constexpr (std::is_same_v<T, Letrec>) {
                    if (step < n.group.size()) next = n.group[step].body.get();
                    else if (step == n.group.size()) next = n.body.get();
                }
            },
            cur->node);
        if (!next) return nullptr;
        cur = next;
    }
    return cur;
}

void collect_identifiers(const Expr& e, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                out.push_back(n.name);
            } else if constexpr (std::is_same_v<T, Call>) {
                out.push_back(n.callee);
                for (const auto& a : n.args) collect_identifiers(*a, out);
            } else if constexpr (std::is_same_v<T, Let>) {
                out.push_back(n.binder);
                collect_identifiers(*n.bound, out);
                collect_identifiers(*n.body, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                collect_identifiers(*n.first, out);
                collect_identifiers(*n.second, out);
            } else if constexpr (std::is_same_v<T, Constr>) {
                for (const auto& a : n.args) collect_identifiers(*a, out);
            } else if constexpr (std::is_same_v<T, Match>) {
                collect_identifiers(*n.scrutinee, out);
                for (const auto& c : n.clauses) {
                    binders_into(c.pattern, out);
                    collect_identifiers(*c.body, out);
                }
            } else if constexpr (std::is_same_v<T, SetRef>) {
                collect_identifiers(*n.dest, out);
                collect_identifiers(*n.index, out);
                collect_identifiers(*n.value, out);
            } else if constexpr (std::is_same_v<T, Letrec>) {
                for (const auto& f : n.group) {
                    out.push_back(f.name);
                    out.insert(out.end(), f.params.begin(), f.params.end());
                    collect_identifiers(*f.body, out);
                }
                collect_identifiers(*n.body, out);
            }
        },
        e.node);
}

std::vector<std::string> identifiers(const Program& p) {
    std::vector<std::string> out;
    for (const auto& g : p.groups) {
        for (const auto& f : g) {
            out.push_back(f.name);
            out.insert(out.end(), f.params.begin(), f.params.end());
            collect_identifiers(*f.body, out);
        }
    }
    if (p.main) collect_identifiers(*p.main, out);
    return out;
}

std::vector<const Expr*> plain_tail_leaves(const Expr& e) {
    std::vector<const Expr*> out;
    std::vector<const Expr*> work{&e};
    while (!work.empty()) {
        const Expr* cur = work.back();
        work.pop_back();
        if (auto* l = cur->as<Let>()) {
            work.push_back(l->body.get());
        } else if (auto* s = cur->as<Seq>()) {
            work.push_back(s->second.get());
        } else if (auto* m = cur->as<Match>()) {
            for (auto it = m->clauses.rbegin(); it != m->clauses.rend(); ++it)
                work.push_back(it->body.get());
        } else if (auto* r = cur->as<Letrec>()) {
            work.push_back(r->body.get());
        } else {
            out.push_back(cur);
        }
    }
    return out;
}

std::vector<const Expr*> plain_tail_calls(const Expr& e) {
    std::vector<const Expr*> out;
    for (const Expr* leaf : plain_tail_leaves(e))
        if (leaf->is<Call>()) out.push_back(leaf);
    return out;
}

}  // namespace tmc
