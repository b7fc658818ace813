#include "tmc/transform.hpp"

#include <functional>
#include <stdexcept>
#include <type_traits>

#include "tmc/well_formed.hpp"

namespace tmc {

std::string fresh(const std::string& base, FreshNamer& namer) {
    int& n = namer.counter[base];
    for (;;) {
        std::string candidate = base + std::to_string(n++);
        if (namer.used.insert(candidate).second) return candidate;
    }
}

bool is_dps_shaped(const Expr& body, const std::set<std::string>& dps_names) {
    for (const Expr* leaf : plain_tail_leaves(body)) {
        if (leaf->is<SetRef>()) continue;
        if (auto* c = leaf->as<Call>(); c && dps_names.count(c->callee)) continue;
        return false;
    }
    return true;
}

namespace {

// Where the value of the context being translated goes: either returned to
// the caller (direct mode, only reachable under a delayed constructor) or
// written into `block.index`.
struct Target {
    bool root = false;
    std::string block;
    ExprPtr index;
};

void context_binders(const Context& c, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CtxLet>) {
                out.insert(n.binder);
                context_binders(*n.body, out);
            } else if constexpr (std::is_same_v<T, CtxSeq>) {
                context_binders(*n.second, out);
            } else if constexpr (std::is_same_v<T, CtxMatch>) {
                for (const auto& cl : n.clauses) {
                    for (auto& b : pattern_binders(cl.pattern)) out.insert(b);
                    context_binders(*cl.body, out);
                }
            } else if constexpr (std::is_same_v<T, CtxLetrec>) {
                for (const auto& f : n.group) out.insert(f.name);
                context_binders(*n.body, out);
            } else if constexpr (std::is_same_v<T, CtxConstr>) {
                context_binders(*n.inner, out);
            }
        },
        c.node);
}

FunGroup transform_group(const FunGroup& group, const Analysis& a, const TransformOptions& options);

// Strips tailcall attributes and transforms marked functions of nested
// letrec groups. Used on every subexpression outside the decomposed context.
ExprPtr rewrite_nested(const ExprPtr& e, const Analysis& a, const TransformOptions& options) {
    auto rec = [&](const ExprPtr& x) { return rewrite_nested(x, a, options); };
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var> || std::is_same_v<T, Int> || std::is_same_v<T, Hole>) {
                return e;
            } else if constexpr (std::is_same_v<T, Call>) {
                std::vector<ExprPtr> args;
                for (const auto& x : n.args) args.push_back(rec(x));
                return make(Call{n.callee, std::move(args), false}, e->span);
            } else if constexpr (std::is_same_v<T, Let>) {
                return make(Let{n.binder, rec(n.bound), rec(n.body)}, e->span);
            } else if constexpr (std::is_same_v<T, Seq>) {
                return make(Seq{rec(n.first), rec(n.second)}, e->span);
            } else if constexpr (std::is_same_v<T, Constr>) {
                std::vector<ExprPtr> args;
                for (const auto& x : n.args) args.push_back(rec(x));
                return make(Constr{n.tag, std::move(args)}, e->span);
            } else if constexpr (std::is_same_v<T, Match>) {
                std::vector<Clause> clauses;
                for (const auto& cl : n.clauses) clauses.push_back(Clause{cl.pattern, rec(cl.body)});
                return make(Match{rec(n.scrutinee), std::move(clauses)}, e->span);
            } else if constexpr (std::is_same_v<T, SetRef>) {
                return make(SetRef{rec(n.dest), rec(n.index), rec(n.value)}, e->span);
            } else {
                return make(Letrec{transform_group(n.group, a, options), rec(n.body)}, e->span);
            }
        },
        e->node);
}

class FunctionTransformer {
public:
    FunctionTransformer(const FunDef& f, const Analysis& a, const TransformOptions& options)
        : f_(f), a_(a), options_(options), namer_(seed_names(a)) {
        auto it = a.decompositions.find(f.name);
        if (!a.marks.is_marked(f.name) || it == a.decompositions.end())
            throw std::logic_error("transform: '" + f.name + "' is not a decomposed tail_mod_cons function");
        decomposition_ = &it->second;
        for (const auto& p : f.params) namer_.used.insert(p);
    }

    FunDef dps() {
        label_ = a_.marks.dps_of(f_.name);
        std::string dst = fresh("dst", namer_);
        std::string idx = fresh("idx", namer_);
        next_hole_ = 0;
        path_.clear();
        ExprPtr body = translate_dps(*decomposition_->context, Target{false, dst, var(idx)}, {});
        finish_holes();
        std::set<std::string> dps_names;
        for (const auto& [_, name] : a_.marks.dps_name) dps_names.insert(name);
        if (!is_dps_shaped(*body, dps_names))
            throw std::logic_error("transform: " + label_ + " has a tail that writes no destination");
        FunDef out;
        out.name = label_;
        out.params = {dst, idx};
        out.params.insert(out.params.end(), f_.params.begin(), f_.params.end());
        out.body = body;
        out.span = f_.span;
        return out;
    }

    FunDef direct() {
        label_ = f_.name;
        next_hole_ = 0;
        path_.clear();
        ExprPtr body = translate_direct(*decomposition_->context);
        finish_holes();
        FunDef out;
        out.name = f_.name;
        out.params = f_.params;
        out.body = body;
        out.span = f_.span;
        return out;
    }

private:
    static FreshNamer seed_names(const Analysis& a) {
        FreshNamer n(a.identifiers);
        for (const auto& [_, d] : a.marks.dps_name) n.used.insert(d);
        return n;
    }

    void trace(const char* rule) {
        if (options_.rule_trace) options_.rule_trace->push_back(std::string(rule) + " " + label_ + ":" + to_string(path_));
    }

    const DecompHole& next_hole() {
        if (next_hole_ >= decomposition_->holes.size()) throw std::logic_error("transform: hole count mismatch");
        return decomposition_->holes[next_hole_++];
    }

    void finish_holes() const {
        if (next_hole_ != decomposition_->holes.size()) throw std::logic_error("transform: unvisited holes");
    }

    bool candidate(const Expr& e) const { return is_candidate_call(e, a_.marks, a_.scope); }

    ExprPtr nested(const ExprPtr& e) const { return rewrite_nested(e, a_, options_); }

    ExprPtr dps_call(const Call& c, const std::string& block, const ExprPtr& index) {
        std::vector<ExprPtr> args{var(block), index};
        for (const auto& x : c.args) args.push_back(nested(x));
        return call(a_.marks.dps_of(c.callee), std::move(args));
    }

    // Allocates the innermost delayed frame with a hole, writes (or returns)
    // the remaining delayed frames around it, then continues with `rest`
    // targeting the new block.
    ExprPtr reify(const Target& t, const ConstrContext& cctx, const std::function<ExprPtr(const Target&)>& rest) {
        trace("DPS-Reify");
        const ConstrFrame& inner = cctx.frames.back();
        ConstrContext outer{std::vector<ConstrFrame>(cctx.frames.begin(), cctx.frames.end() - 1)};
        std::string d = fresh("dst", namer_);
        std::vector<ExprPtr> args = inner.left;
        args.push_back(hole());
        args.insert(args.end(), inner.right.begin(), inner.right.end());
        ExprPtr alloc = constr(inner.tag, std::move(args));
        ExprPtr body = rest(Target{false, d, integer(inner.hole_index())});
        if (!t.root) return let(d, alloc, seq(setref(var(t.block), t.index, outer.plug(var(d))), body));
        if (outer.empty()) return let(d, alloc, seq(body, var(d)));
        std::string r = fresh("dst", namer_);
        return let(d, alloc, let(r, outer.plug(var(d)), seq(body, var(r))));
    }

    template <typename F>
    auto at(std::uint32_t step, F&& f) {
        path_.push_back(step);
        auto out = f();
        path_.pop_back();
        return out;
    }

    ExprPtr translate_dps(const Context& u, const Target& t, const ConstrContext& cctx) {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, CtxHole>) {
                    const DecompHole& h = next_hole();
                    if (candidate(*h.expr)) {
                        const Call& c = *h.expr->as<Call>();
                        if (cctx.empty()) {
                            trace("DPS-Hole-Call");
                            return dps_call(c, t.block, t.index);
                        }
                        return reify(t, cctx, [&](const Target& nt) {
                            trace("DPS-Hole-Call");
                            return dps_call(c, nt.block, nt.index);
                        });
                    }
                    trace("DPS-Hole-Opt");
                    ExprPtr value = cctx.plug(nested(h.expr));
                    if (t.root) return value;
                    return setref(var(t.block), t.index, value);
                } else if constexpr (std::is_same_v<T, CtxLet>) {
                    trace("DPS-Let");
                    return let(n.binder, nested(n.bound), at(1, [&] { return translate_dps(*n.body, t, cctx); }));
                } else if constexpr (std::is_same_v<T, CtxSeq>) {
                    trace("DPS-Seq");
                    return seq(nested(n.first), at(1, [&] { return translate_dps(*n.second, t, cctx); }));
                } else if constexpr (std::is_same_v<T, CtxLetrec>) {
                    trace("DPS-Letrec");
                    FunGroup g = transform_group(n.group, a_, options_);
                    auto idx = static_cast<std::uint32_t>(n.group.size());
                    return letrec(std::move(g), at(idx, [&] { return translate_dps(*n.body, t, cctx); }));
                } else if constexpr (std::is_same_v<T, CtxMatch>) {
                    auto build = [&](const Target& nt, const ConstrContext& nc) {
                        trace("DPS-Match");
                        std::vector<Clause> clauses;
                        for (std::size_t k = 0; k < n.clauses.size(); ++k) {
                            auto step = static_cast<std::uint32_t>(k + 1);
                            clauses.push_back(Clause{n.clauses[k].pattern,
                                                     at(step, [&] { return translate_dps(*n.clauses[k].body, nt, nc); })});
                        }
                        return match(nested(n.scrutinee), std::move(clauses));
                    };
                    if (!cctx.empty() && n.clauses.size() >= 2)
                        return reify(t, cctx, [&](const Target& nt) { return build(nt, ConstrContext{}); });
                    return build(t, cctx);
                } else if constexpr (std::is_same_v<T, CtxConstr>) {
                    auto step = static_cast<std::uint32_t>(n.left.size());
                    if (!options_.compression) return constr_uncompressed(n, t, step);
                    trace("DPS-Constr-Opt");
                    std::set<std::string> shadowed;
                    context_binders(*n.inner, shadowed);
                    std::vector<std::pair<std::string, ExprPtr>> bindings;
                    auto atom = [&](const ExprPtr& x) -> ExprPtr {
                        if (x->is<Int>() || x->is<Hole>()) return x;
                        if (auto* v = x->as<Var>(); v && !shadowed.count(v->name)) return x;
                        std::string y = fresh("y", namer_);
                        bindings.emplace_back(y, nested(x));
                        return var(y);
                    };
                    ConstrFrame frame{n.tag, {}, {}};
                    for (const auto& x : n.left) frame.left.push_back(atom(x));
                    for (const auto& x : n.right) frame.right.push_back(atom(x));
                    ConstrContext extended = cctx;
                    extended.frames.push_back(std::move(frame));
                    ExprPtr body = at(step, [&] { return translate_dps(*n.inner, t, extended); });
                    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) body = let(it->first, it->second, body);
                    return body;
                }
            },
            u.node);
    }

    // K(l.., U, r..) without delaying: allocate the block now and continue
    // in DPS on the hole.
    ExprPtr constr_uncompressed(const CtxConstr& n, const Target& t, std::uint32_t step) {
        trace("DPS-Constr");
        std::string d = fresh("dst", namer_);
        std::vector<ExprPtr> args;
        for (const auto& x : n.left) args.push_back(nested(x));
        args.push_back(hole());
        for (const auto& x : n.right) args.push_back(nested(x));
        ExprPtr alloc = constr(n.tag, std::move(args));
        auto index = integer(static_cast<std::int64_t>(n.left.size()) + 1);
        ExprPtr body = at(step, [&] { return translate_dps(*n.inner, Target{false, d, index}, {}); });
        if (t.root) return let(d, alloc, seq(body, var(d)));
        return let(d, alloc, seq(setref(var(t.block), t.index, var(d)), body));
    }

    ExprPtr translate_direct(const Context& u) {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, CtxHole>) {
                    trace("Direct-Hole");
                    return nested(next_hole().expr);
                } else if constexpr (std::is_same_v<T, CtxLet>) {
                    trace("Direct-Let");
                    return let(n.binder, nested(n.bound), at(1, [&] { return translate_direct(*n.body); }));
                } else if constexpr (std::is_same_v<T, CtxSeq>) {
                    trace("Direct-Seq");
                    return seq(nested(n.first), at(1, [&] { return translate_direct(*n.second); }));
                } else if constexpr (std::is_same_v<T, CtxLetrec>) {
                    trace("Direct-Letrec");
                    FunGroup g = transform_group(n.group, a_, options_);
                    auto idx = static_cast<std::uint32_t>(n.group.size());
                    return letrec(std::move(g), at(idx, [&] { return translate_direct(*n.body); }));
                } else if constexpr (std::is_same_v<T, CtxMatch>) {
                    trace("Direct-Match");
                    std::vector<Clause> clauses;
                    for (std::size_t k = 0; k < n.clauses.size(); ++k) {
                        auto step = static_cast<std::uint32_t>(k + 1);
                        clauses.push_back(
                            Clause{n.clauses[k].pattern, at(step, [&] { return translate_direct(*n.clauses[k].body); })});
                    }
                    return match(nested(n.scrutinee), std::move(clauses));
                } else if constexpr (std::is_same_v<T, CtxConstr>) {
                    trace("Direct-Constr");
                    return translate_dps(u, Target{true, {}, nullptr}, {});
                }
            },
            u.node);
    }

    const FunDef& f_;
    const Analysis& a_;
    const TransformOptions& options_;
    FreshNamer namer_;
    const Decomposition* decomposition_ = nullptr;
    std::size_t next_hole_ = 0;
    std::string label_;
    Path path_;
};

FunGroup transform_group(const FunGroup& group, const Analysis& a, const TransformOptions& options) {
    FunGroup out;
    for (const auto& f : group) {
        if (f.tail_mod_cons) {
            out.push_back(transform_direct(f, a, options));
            out.push_back(transform_dps(f, a, options));
        } else {
            FunDef g = f;
            g.body = rewrite_nested(f.body, a, options);
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace

FunDef transform_dps(const FunDef& f, const Analysis& analysis, const TransformOptions& options) {
    return FunctionTransformer(f, analysis, options).dps();
}

FunDef transform_direct(const FunDef& f, const Analysis& analysis, const TransformOptions& options) {
    return FunctionTransformer(f, analysis, options).direct();
}

TransformResult transform_program(const Program& p, const TransformOptions& options) {
    TransformResult result;
    result.diagnostics = well_formed(p);
    if (has_errors(result.diagnostics)) return result;
    Analysis a = analyze(p);
    result.diagnostics.insert(result.diagnostics.end(), a.diagnostics.begin(), a.diagnostics.end());
    if (has_errors(result.diagnostics)) return result;

    Program out;
    for (const auto& g : p.groups) out.groups.push_back(transform_group(g, a, options));
    out.main = rewrite_nested(p.main, a, options);
    auto post = well_formed(out);
    if (has_errors(post)) throw std::logic_error("transform: output is not well formed: " + post.front().message);
    result.program = std::move(out);
    return result;
}

}  // namespace tmc
