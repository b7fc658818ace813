#include "tmc/decomposition.hpp"

#include <stdexcept>
#include <type_traits>

namespace tmc {

std::size_t hole_count(const Context& c) {
    return std::visit(
        [](const auto& n) -> std::size_t {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CtxHole>) {
                return 1;
            } else if constexpr (std::is_same_v<T, CtxLet> || std::is_same_v<T, CtxLetrec>) {
                return hole_count(*n.body);
            } else if constexpr (std::is_same_v<T, CtxSeq>) {
                return hole_count(*n.second);
            } else if constexpr (std::is_same_v<T, CtxMatch>) {
                std::size_t total = 0;
                for (const auto& cl : n.clauses) total += hole_count(*cl.body);
                return total;
            } else {
                return hole_count(*n.inner);
            }
        },
        c.node);
}

namespace {

ExprPtr fill(const Context& c, std::span<const ExprPtr> fillers, std::size_t& next) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CtxHole>) {
                if (next >= fillers.size()) throw std::logic_error("plug: more holes than expressions");
                return fillers[next++];
            } else if constexpr (std::is_same_v<T, CtxLet>) {
                return make(Let{n.binder, n.bound, fill(*n.body, fillers, next)}, c.span);
            } else if constexpr (std::is_same_v<T, CtxSeq>) {
                return make(Seq{n.first, fill(*n.second, fillers, next)}, c.span);
            } else if constexpr (std::is_same_v<T, CtxMatch>) {
                std::vector<Clause> clauses;
                clauses.reserve(n.clauses.size());
                for (const auto& cl : n.clauses) clauses.push_back(Clause{cl.pattern, fill(*cl.body, fillers, next)});
                return make(Match{n.scrutinee, std::move(clauses)}, c.span);
            } else if constexpr (std::is_same_v<T, CtxLetrec>) {
                return make(Letrec{n.group, fill(*n.body, fillers, next)}, c.span);
            } else {
                std::vector<ExprPtr> args = n.left;
                args.push_back(fill(*n.inner, fillers, next));
                args.insert(args.end(), n.right.begin(), n.right.end());
                return make(Constr{n.tag, std::move(args)}, c.span);
            }
        },
        c.node);
}

}  // namespace

ExprPtr plug(const Context& c, std::span<const ExprPtr> fillers) {
    std::size_t next = 0;
    ExprPtr out = fill(c, fillers, next);
    if (next != fillers.size()) throw std::logic_error("plug: more expressions than holes");
    return out;
}

ExprPtr plug(const Decomposition& d) {
    std::vector<ExprPtr> fillers;
    fillers.reserve(d.holes.size());
    for (const auto& h : d.holes) fillers.push_back(h.expr);
    return plug(*d.context, fillers);
}

ExprPtr ConstrContext::plug(ExprPtr filler) const {
    ExprPtr cur = std::move(filler);
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
        std::vector<ExprPtr> args = it->left;
        args.push_back(cur);
        args.insert(args.end(), it->right.begin(), it->right.end());
        cur = constr(it->tag, std::move(args));
    }
    return cur;
}

}  // namespace tmc
