#include "tmc/analysis.hpp"

#include "tmc/well_formed.hpp"

#include <algorithm>
#include <functional>
#include <type_traits>

namespace tmc {

namespace {

// Visits every function definition, toplevel groups first, then nested
// groups in preorder.
void for_each_fundef(const Expr& e, const std::function<void(const FunDef&)>& fn) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Constr>) {
                for (const auto& a : n.args) for_each_fundef(*a, fn);
            } else if constexpr (std::is_same_v<T, Let>) {
                for_each_fundef(*n.bound, fn);
                for_each_fundef(*n.body, fn);
            } else if constexpr (std::is_same_v<T, Seq>) {
                for_each_fundef(*n.first, fn);
                for_each_fundef(*n.second, fn);
            } else if constexpr (std::is_same_v<T, Match>) {
                for_each_fundef(*n.scrutinee, fn);
                for (const auto& c : n.clauses) for_each_fundef(*c.body, fn);
            } else if constexpr (std::is_same_v<T, SetRef>) {
                for_each_fundef(*n.dest, fn);
                for_each_fundef(*n.index, fn);
                for_each_fundef(*n.value, fn);
            } else if constexpr (std::is_same_v<T, Letrec>) {
                for (const auto& f : n.group) fn(f);
                for (const auto& f : n.group) for_each_fundef(*f.body, fn);
                for_each_fundef(*n.body, fn);
            }
        },
        e.node);
}

void for_each_fundef(const Program& p, const std::function<void(const FunDef&)>& fn) {
    for (const auto& g : p.groups)
        for (const auto& f : g) fn(f);
    for (const auto& g : p.groups)
        for (const auto& f : g) for_each_fundef(*f.body, fn);
    if (p.main) for_each_fundef(*p.main, fn);
}

Path joined(const Path& base, const Path& rel) {
    Path out = base;
    out.insert(out.end(), rel.begin(), rel.end());
    return out;
}

bool is_prefix(const Path& prefix, const Path& p) {
    return prefix.size() <= p.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

// ---------------------------------------------------------------------------

class ScopeWalker {
public:
    ScopeWalker(const MarkSet& marks, ScopeVerdict& out) : marks_(marks), out_(out) {}

    void run(const Program& p) {
        Scope globals;
        for (const auto& g : p.groups) {
            std::size_t id = next_group_++;
            for (const auto& f : g) {
                globals[f.name] = true;
                group_of_[f.name] = id;
                out_.functions[f.name] = FunctionInfo{&f, f.name, {}, id, true};
            }
        }
        scopes_.push_back(std::move(globals));
        for (const auto& g : p.groups) {
            for (const auto& f : g) {
                root_ = f.name;
                path_.clear();
                enter_function(f, group_of_[f.name]);
            }
        }
        root_ = "main";
        path_.clear();
        if (p.main) walk(*p.main);
        scopes_.pop_back();
    }

private:
    using Scope = std::map<std::string, bool>;  // name -> is a function

    const MarkSet& marks_;
    ScopeVerdict& out_;
    std::vector<Scope> scopes_;
    std::map<std::string, std::size_t> group_of_;
    std::vector<std::size_t> enclosing_groups_;
    int marked_depth_ = 0;
    std::size_t next_group_ = 0;
    std::string root_;
    Path path_;

    void enter_function(const FunDef& f, std::size_t group) {
        enclosing_groups_.push_back(group);
        if (f.tail_mod_cons) ++marked_depth_;
        Scope params;
        for (const auto& p : f.params) params[p] = false;
        scopes_.push_back(std::move(params));
        walk(*f.body);
        scopes_.pop_back();
        if (f.tail_mod_cons) --marked_depth_;
        enclosing_groups_.pop_back();
    }

    void child(const Expr& e, std::uint32_t step) {
        path_.push_back(step);
        walk(e);
        path_.pop_back();
    }

    const bool* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    void record(const Expr& e, const Call& c) {
        CallSite site;
        site.node = &e;
        site.root = root_;
        site.path = path_;
        site.callee = c.callee;
        site.inside_marked = marked_depth_ > 0;
        if (const bool* is_fun = lookup(c.callee)) {
            site.callee_kind = *is_fun ? CalleeKind::Function : CalleeKind::Indirect;
        } else if (is_builtin(c.callee)) {
            site.callee_kind = CalleeKind::Builtin;
        }
        if (site.callee_kind == CalleeKind::Function && marks_.is_marked(c.callee)) {
            std::size_t callee_group = group_of_.at(c.callee);
            bool in_group = std::find(enclosing_groups_.begin(), enclosing_groups_.end(), callee_group) !=
                            enclosing_groups_.end();
            if (in_group || site.inside_marked) site.verdict = Eligibility::RewriteEligible;
        }
        out_.by_node[&e] = out_.sites.size();
        out_.sites.push_back(std::move(site));
    }

    void walk(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Call>) {
                    record(e, n);
                    for (std::uint32_t i = 0; i < n.args.size(); ++i) child(*n.args[i], i);
                } else if constexpr (std::is_same_v<T, Constr>) {
                    for (std::uint32_t i = 0; i < n.args.size(); ++i) child(*n.args[i], i);
                } else if constexpr (std::is_same_v<T, Let>) {
                    child(*n.bound, 0);
                    scopes_.push_back({{n.binder, false}});
                    child(*n.body, 1);
                    scopes_.pop_back();
                } else if constexpr (std::is_same_v<T, Seq>) {
                    child(*n.first, 0);
                    child(*n.second, 1);
                } else if constexpr (std::is_same_v<T, Match>) {
                    child(*n.scrutinee, 0);
                    for (std::uint32_t k = 0; k < n.clauses.size(); ++k) {
                        Scope bound;
                        for (const auto& b : pattern_binders(n.clauses[k].pattern)) bound[b] = false;
                        scopes_.push_back(std::move(bound));
                        child(*n.clauses[k].body, k + 1);
                        scopes_.pop_back();
                    }
                } else if constexpr (std::is_same_v<T, SetRef>) {
                    child(*n.dest, 0);
                    child(*n.index, 1);
                    child(*n.value, 2);
                } else if constexpr (std::is_same_v<T, Letrec>) {
                    std::size_t id = next_group_++;
                    Scope group;
                    for (std::uint32_t k = 0; k < n.group.size(); ++k) {
                        const FunDef& f = n.group[k];
                        group[f.name] = true;
                        group_of_[f.name] = id;
                        out_.functions[f.name] = FunctionInfo{&f, root_, joined(path_, {k}), id, false};
                    }
                    scopes_.push_back(std::move(group));
                    for (std::uint32_t k = 0; k < n.group.size(); ++k) {
                        path_.push_back(k);
                        enter_function(n.group[k], id);
                        path_.pop_back();
                    }
                    child(*n.body, static_cast<std::uint32_t>(n.group.size()));
                    scopes_.pop_back();
                }
            },
            e.node);
    }
};

void collect_candidates(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope, Path& path,
                        bool annotated_only, std::vector<std::pair<const Expr*, Path>>& out) {
    auto step = [&](const Expr& sub, std::uint32_t i) {
        path.push_back(i);
        collect_candidates(sub, marks, scope, path, annotated_only, out);
        path.pop_back();
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Call>) {
                if (is_candidate_call(e, marks, scope) && (!annotated_only || n.tailcall))
                    out.emplace_back(&e, path);
            } else if constexpr (std::is_same_v<T, Let>) {
                step(*n.body, 1);
            } else if constexpr (std::is_same_v<T, Seq>) {
                step(*n.second, 1);
            } else if constexpr (std::is_same_v<T, Match>) {
                for (std::uint32_t k = 0; k < n.clauses.size(); ++k) step(*n.clauses[k].body, k + 1);
            } else if constexpr (std::is_same_v<T, Letrec>) {
                step(*n.body, static_cast<std::uint32_t>(n.group.size()));
            } else if constexpr (std::is_same_v<T, Constr>) {
                for (std::uint32_t i = 0; i < n.args.size(); ++i) step(*n.args[i], i);
            }
        },
        e.node);
}

bool has_strict_candidate(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope, bool under_constr) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Call>) {
                return under_constr && is_candidate_call(e, marks, scope);
            } else if constexpr (std::is_same_v<T, Let>) {
                return has_strict_candidate(*n.body, marks, scope, under_constr);
            } else if constexpr (std::is_same_v<T, Seq>) {
                return has_strict_candidate(*n.second, marks, scope, under_constr);
            } else if constexpr (std::is_same_v<T, Match>) {
                return std::any_of(n.clauses.begin(), n.clauses.end(), [&](const Clause& c) {
                    return has_strict_candidate(*c.body, marks, scope, under_constr);
                });
            } else if constexpr (std::is_same_v<T, Letrec>) {
                return has_strict_candidate(*n.body, marks, scope, under_constr);
            } else if constexpr (std::is_same_v<T, Constr>) {
                return std::any_of(n.args.begin(), n.args.end(), [&](const ExprPtr& a) {
                    return has_strict_candidate(*a, marks, scope, true);
                });
            } else {
                return false;
            }
        },
        e.node);
}

// Calls carrying the tailcall attribute, excluding bodies of local functions.
void annotated_calls(const Expr& e, Path& path, std::vector<std::pair<const Expr*, Path>>& out) {
    auto step = [&](const Expr& sub, std::uint32_t i) {
        path.push_back(i);
        annotated_calls(sub, path, out);
        path.pop_back();
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Call>) {
                if (n.tailcall) out.emplace_back(&e, path);
                for (std::uint32_t i = 0; i < n.args.size(); ++i) step(*n.args[i], i);
            } else if constexpr (std::is_same_v<T, Constr>) {
                for (std::uint32_t i = 0; i < n.args.size(); ++i) step(*n.args[i], i);
            } else if constexpr (std::is_same_v<T, Let>) {
                step(*n.bound, 0);
                step(*n.body, 1);
            } else if constexpr (std::is_same_v<T, Seq>) {
                step(*n.first, 0);
                step(*n.second, 1);
            } else if constexpr (std::is_same_v<T, Match>) {
                step(*n.scrutinee, 0);
                for (std::uint32_t k = 0; k < n.clauses.size(); ++k) step(*n.clauses[k].body, k + 1);
            } else if constexpr (std::is_same_v<T, SetRef>) {
                step(*n.dest, 0);
                step(*n.index, 1);
                step(*n.value, 2);
            } else if constexpr (std::is_same_v<T, Letrec>) {
                step(*n.body, static_cast<std::uint32_t>(n.group.size()));
            }
        },
        e.node);
}

std::string describe_paths(const std::string& root, const std::vector<Path>& paths) {
    std::string out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (i) out += ", ";
        out += root + ":" + to_string(paths[i]);
    }
    return out;
}

class Decomposer {
public:
    Decomposer(const MarkSet& marks, const ScopeVerdict& scope, std::string root, Path base)
        : marks_(marks), scope_(scope), root_(std::move(root)), path_(std::move(base)) {}

    Decomposition run(const ExprPtr& e) {
        Decomposition d;
        d.context = decompose_ptr(e);
        d.holes = std::move(holes_);
        d.chosen_constructor_paths = std::move(chosen_);
        return d;
    }

    std::vector<Diagnostic>& diagnostics() { return diags_; }

private:
    const MarkSet& marks_;
    const ScopeVerdict& scope_;
    std::string root_;
    Path path_;
    int constr_depth_ = 0;
    std::vector<DecompHole> holes_;
    std::vector<Path> chosen_;
    std::vector<Diagnostic> diags_;

    ContextPtr make_ctx(decltype(Context::node) node, const Expr& origin) {
        return std::make_shared<const Context>(Context{std::move(node), origin.span});
    }

    ContextPtr make_hole(const Expr& e, const ExprPtr& shared) {
        holes_.push_back(DecompHole{shared, constr_depth_ > 0 ? HoleKind::StrictModCons : HoleKind::PlainTail, path_});
        return make_ctx(CtxHole{}, e);
    }

    ContextPtr child(const ExprPtr& e, std::uint32_t step) {
        path_.push_back(step);
        ContextPtr out = decompose_ptr(e);
        path_.pop_back();
        return out;
    }

    ContextPtr decompose_ptr(const ExprPtr& ep) {
        const Expr& e = *ep;
        if (!has_candidate(e, marks_, scope_)) return make_hole(e, ep);
        return std::visit(
            [&](const auto& n) -> ContextPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Let>) {
                    return make_ctx(CtxLet{n.binder, n.bound, child(n.body, 1)}, e);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    return make_ctx(CtxSeq{n.first, child(n.second, 1)}, e);
                } else if constexpr (std::is_same_v<T, Match>) {
                    CtxMatch m{n.scrutinee, {}};
                    for (std::uint32_t k = 0; k < n.clauses.size(); ++k)
                        m.clauses.push_back(CtxClause{n.clauses[k].pattern, child(n.clauses[k].body, k + 1)});
                    return make_ctx(std::move(m), e);
                } else if constexpr (std::is_same_v<T, Letrec>) {
                    return make_ctx(CtxLetrec{n.group, child(n.body, static_cast<std::uint32_t>(n.group.size()))},
                                    e);
                } else if constexpr (std::is_same_v<T, Constr>) {
                    return decompose_constr(e, n, ep);
                } else {
                    return make_hole(e, ep);
                }
            },
            e.node);
    }

    ContextPtr decompose_constr(const Expr& e, const Constr& c, const ExprPtr& ep) {
        std::vector<std::uint32_t> with_candidate;
        std::vector<std::uint32_t> with_annotated;
        for (std::uint32_t i = 0; i < c.args.size(); ++i) {
            Path rel;
            std::vector<std::pair<const Expr*, Path>> found;
            collect_candidates(*c.args[i], marks_, scope_, rel, false, found);
            if (found.empty()) continue;
            with_candidate.push_back(i);
            if (std::any_of(found.begin(), found.end(),
                            [](const auto& f) { return f.first->template as<Call>()->tailcall; }))
                with_annotated.push_back(i);
        }

        std::optional<std::uint32_t> chosen;
        if (with_candidate.size() == 1) chosen = with_candidate.front();
        else if (with_annotated.size() == 1) chosen = with_annotated.front();

        if (!chosen) {
            const auto& culprits = with_annotated.size() >= 2 ? with_annotated : with_candidate;
            std::vector<Path> paths;
            for (auto i : culprits) {
                Path rel;
                std::vector<std::pair<const Expr*, Path>> found;
                collect_candidates(*c.args[i], marks_, scope_, rel, with_annotated.size() >= 2, found);
                for (const auto& f : found) {
                    Path full = path_;
                    full.push_back(i);
                    full.insert(full.end(), f.second.begin(), f.second.end());
                    paths.push_back(std::move(full));
                }
            }
            Diagnostic d;
            d.severity = Severity::Error;
            d.code = DiagCode::AmbiguousTmc;
            d.span = e.span;
            d.root = root_;
            d.path = path_;
            d.message = "constructor `" + c.tag + "` has several arguments with TMC calls (" +
                        describe_paths(root_, paths) + "); mark the one to optimize with (@ tailcall)";
            d.candidate_paths = std::move(paths);
            diags_.push_back(std::move(d));
            return make_hole(e, ep);
        }

        chosen_.push_back(path_);
        CtxConstr ctx;
        ctx.tag = c.tag;
        ctx.left.assign(c.args.begin(), c.args.begin() + *chosen);
        ctx.right.assign(c.args.begin() + *chosen + 1, c.args.end());
        ++constr_depth_;
        ctx.inner = child(c.args[*chosen], *chosen);
        --constr_depth_;
        return make_ctx(std::move(ctx), e);
    }
};

Diagnostic unsatisfied_tailcall(const Expr& call, const std::string& root, const Path& path, Severity sev,
                                const std::string& why) {
    Diagnostic d;
    d.severity = sev;
    d.code = DiagCode::TailcallNotSatisfiable;
    d.span = call.span;
    d.root = root;
    d.path = path;
    d.message = "call to `" + call.as<Call>()->callee + "` marked (@ tailcall) " + why;
    return d;
}

// Annotated calls of an undecomposed body must already be plain tail calls.
void check_plain_tailcalls(const Expr& body, const std::string& root, const Path& base,
                           std::vector<Diagnostic>& out) {
    Path path = base;
    std::vector<std::pair<const Expr*, Path>> annotated;
    annotated_calls(body, path, annotated);
    if (annotated.empty()) return;
    auto tails = plain_tail_calls(body);
    for (const auto& [call, p] : annotated) {
        if (std::find(tails.begin(), tails.end(), call) == tails.end())
            out.push_back(unsatisfied_tailcall(*call, root, p, Severity::Warning, "is not in tail position"));
    }
}

}  // namespace

// ---------------------------------------------------------------------------

MarkSet collect_marks(const Program& p) {
    MarkSet marks;
    auto ids = identifiers(p);
    std::set<std::string> taken(ids.begin(), ids.end());
    for_each_fundef(p, [&](const FunDef& f) {
        if (!f.tail_mod_cons) return;
        marks.marked.insert(f.name);
        std::string name = f.name + "_dps";
        for (int k = 2; taken.count(name); ++k) name = f.name + "_dps" + std::to_string(k);
        taken.insert(name);
        marks.dps_name[f.name] = name;
    });
    return marks;
}

const CallSite* ScopeVerdict::site(const Expr* call) const {
    auto it = by_node.find(call);
    return it == by_node.end() ? nullptr : &sites[it->second];
}

Eligibility ScopeVerdict::at(const Expr* call) const {
    const CallSite* s = site(call);
    return s ? s->verdict : Eligibility::NotEligible;
}

ScopeVerdict resolve_scope(const Program& p, const MarkSet& marks) {
    ScopeVerdict out;
    ScopeWalker(marks, out).run(p);

    for (const auto& [name, info] : out.functions) {
        if (!marks.is_marked(name)) continue;
        bool useful = false;
        for (const auto& [other, oinfo] : out.functions) {
            if (!marks.is_marked(other)) continue;
            bool related = oinfo.group == info.group;
            if (!related) {
                for (const auto& [g, ginfo] : out.functions) {
                    if (ginfo.group == info.group && ginfo.root == oinfo.root &&
                        is_prefix(ginfo.body_path, oinfo.body_path) && g != other) {
                        related = true;
                        break;
                    }
                }
            }
            if (related && has_strict_candidate(*oinfo.def->body, marks, out, false)) {
                useful = true;
                break;
            }
        }
        if (!useful) {
            Diagnostic d;
            d.severity = Severity::Warning;
            d.code = DiagCode::UselessMark;
            d.span = info.def->span;
            d.root = info.root;
            d.path = info.body_path;
            d.message = "`" + name + "` is marked tail_mod_cons but has no call in strict tail-modulo-cons position";
            out.diagnostics.push_back(std::move(d));
        }
    }
    return out;
}

bool is_candidate_call(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope) {
    auto* c = e.as<Call>();
    return c && marks.is_marked(c->callee) && scope.at(&e) == Eligibility::RewriteEligible;
}

std::vector<std::pair<const Expr*, Path>> candidate_calls(const Expr& e, const MarkSet& marks,
                                                          const ScopeVerdict& scope) {
    std::vector<std::pair<const Expr*, Path>> out;
    Path path;
    collect_candidates(e, marks, scope, path, false, out);
    return out;
}

bool has_candidate(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope) {
    return !candidate_calls(e, marks, scope).empty();
}

DecomposeResult decompose_tmc(const ExprPtr& e, const MarkSet& marks, const ScopeVerdict& scope,
                              const std::string& root, const Path& base) {
    Decomposer dec(marks, scope, root, base);
    Decomposition d = dec.run(e);
    DecomposeResult result;
    result.diagnostics = std::move(dec.diagnostics());

    // Every annotated call must land in a hole where it stays a tail call.
    Path path = base;
    std::vector<std::pair<const Expr*, Path>> annotated;
    annotated_calls(*e, path, annotated);
    for (const auto& [call, p] : annotated) {
        bool satisfied = false;
        for (const auto& h : d.holes) {
            if (h.expr.get() == call &&
                (h.kind == HoleKind::PlainTail || is_candidate_call(*call, marks, scope))) {
                satisfied = true;
                break;
            }
            if (h.kind == HoleKind::PlainTail) {
                auto tails = plain_tail_calls(*h.expr);
                if (std::find(tails.begin(), tails.end(), call) != tails.end()) {
                    satisfied = true;
                    break;
                }
            }
        }
        if (!satisfied) {
            result.diagnostics.push_back(unsatisfied_tailcall(*call, root, p, Severity::Error,
                                                              "is not in a tail-modulo-cons position"));
        }
    }

    if (!has_errors(result.diagnostics)) result.decomposition = std::move(d);
    return result;
}

Analysis analyze(const Program& p) {
    Analysis a;
    a.identifiers = identifiers(p);
    a.marks = collect_marks(p);
    a.scope = resolve_scope(p, a.marks);
    a.diagnostics = a.scope.diagnostics;

    // Marks, companions and decompositions are keyed by name, so marked
    // functions must be distinct program-wide, not just within scope.
    std::set<std::string> seen_marked;
    for_each_fundef(p, [&](const FunDef& f) {
        if (f.tail_mod_cons && !seen_marked.insert(f.name).second)
            a.diagnostics.push_back(Diagnostic{Severity::Error, DiagCode::DuplicateFunction, f.span, f.name, {},
                                               "tail_mod_cons function `" + f.name + "` is defined more than once",
                                               {}});
    });

    for (const auto& [name, info] : a.scope.functions) {
        if (a.marks.is_marked(name)) {
            auto r = decompose_tmc(info.def->body, a.marks, a.scope, info.root, info.body_path);
            a.diagnostics.insert(a.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
            if (r.decomposition) a.decompositions.emplace(name, std::move(*r.decomposition));
        } else {
            check_plain_tailcalls(*info.def->body, info.root, info.body_path, a.diagnostics);
        }
    }
    if (p.main) check_plain_tailcalls(*p.main, "main", {}, a.diagnostics);

    std::stable_sort(a.diagnostics.begin(), a.diagnostics.end(), [](const Diagnostic& x, const Diagnostic& y) {
        return x.span.byte_start < y.span.byte_start;
    });
    return a;
}

}  // namespace tmc
