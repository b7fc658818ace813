// Tail-modulo-cons contexts and their decompositions.
//
// A context mirrors an expression down to a set of holes; its shape follows
// the tail-modulo-cons grammar
//
//   U ::= [] | e; U | let x = e in U | match e with (p_j -> U_j)
//       | letrec fs in U | K(e_1.., U, e_k..)
//
// where the constructor production carries exactly one sub-context.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tmc/ir.hpp"

namespace tmc {

enum class HoleKind { PlainTail, StrictModCons };

struct Context;
using ContextPtr = std::shared_ptr<const Context>;

struct CtxHole {};
struct CtxLet {
    std::string binder;
    ExprPtr bound;
    ContextPtr body;
};
struct CtxSeq {
    ExprPtr first;
    ContextPtr second;
};
struct CtxClause {
    Pattern pattern;
    ContextPtr body;
};
struct CtxMatch {
    ExprPtr scrutinee;
    std::vector<CtxClause> clauses;
};
struct CtxConstr {
    std::string tag;
    std::vector<ExprPtr> left;
    ContextPtr inner;
    std::vector<ExprPtr> right;
};
struct CtxLetrec {
    FunGroup group;
    ContextPtr body;
};

struct Context {
    std::variant<CtxHole, CtxLet, CtxSeq, CtxMatch, CtxConstr, CtxLetrec> node;
    SourceSpan span;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
};

struct DecompHole {
    ExprPtr expr;
    HoleKind kind = HoleKind::PlainTail;
    Path path;  // position of the hole inside the decomposed expression
};

struct Decomposition {
    ContextPtr context;
    std::vector<DecompHole> holes;  // left to right
    std::vector<Path> chosen_constructor_paths;
};

std::size_t hole_count(const Context& c);

/// Fills the holes of `c` left to right. Throws std::logic_error when the
/// number of expressions differs from the number of holes.
ExprPtr plug(const Context& c, std::span<const ExprPtr> fillers);
ExprPtr plug(const Decomposition& d);

/// One frame of a delayed constructor context: K(left.., [], right..).
struct ConstrFrame {
    std::string tag;
    std::vector<ExprPtr> left;
    std::vector<ExprPtr> right;

    std::uint32_t hole_index() const { return static_cast<std::uint32_t>(left.size()) + 1; }
};

/// Single-hole nest of constructor applications, outermost frame first.
struct ConstrContext {
    std::vector<ConstrFrame> frames;

    bool empty() const { return frames.empty(); }
    ExprPtr plug(ExprPtr filler) const;
};

}  // namespace tmc
