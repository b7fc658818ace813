// Core intermediate representation: a small first-order functional language
// with constructors, pattern matching and in-place field initialization.
//
// Trees are immutable and shared through `ExprPtr`; every node carries the
// source span it was parsed from (spans never take part in equality).

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tmc {

struct SourceSpan {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    std::size_t line = 0;    // 1-based; 0 when synthesized
    std::size_t column = 0;  // 1-based; 0 when synthesized
};

/// Child-index path from a function body (or `main`) root to a subterm.
///
/// Numbering per node kind: Call args 0..n-1; Let bound 0, body 1; Seq 0, 1;
/// Constr args 0..n-1; Match scrutinee 0, clause k body k+1; SetRef 0, 1, 2;
/// Letrec function k body k, letrec body = group size.
using Path = std::vector<std::uint32_t>;

std::string to_string(const Path& path);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// ---------------------------------------------------------------------------
// Patterns

struct Pattern;

struct PVar {
    std::string name;
};
struct PWild {};
struct PConstr {
    std::string tag;
    std::vector<Pattern> args;
};
struct PInt {
    std::int64_t value;
};

struct Pattern {
    std::variant<PVar, PWild, PConstr, PInt> node;

    friend bool operator==(const Pattern& a, const Pattern& b);
};

/// Variables bound by `p`, left to right (duplicates preserved).
std::vector<std::string> pattern_binders(const Pattern& p);

// ---------------------------------------------------------------------------
// Functions and programs

struct FunDef {
    std::string name;
    std::vector<std::string> params;
    ExprPtr body;
    bool tail_mod_cons = false;  // the only function attribute
    SourceSpan span;

    friend bool operator==(const FunDef& a, const FunDef& b);
};

using FunGroup = std::vector<FunDef>;

struct Program {
    std::vector<FunGroup> groups;
    ExprPtr main;

    friend bool operator==(const Program& a, const Program& b);
};

// ---------------------------------------------------------------------------
// Expressions

struct Var {
    std::string name;
};
struct Int {
    std::int64_t value;
};
struct Call {
    std::string callee;
    std::vector<ExprPtr> args;
    bool tailcall = false;  // the only call attribute
};
struct Let {
    std::string binder;
    ExprPtr bound;
    ExprPtr body;
};
struct Seq {
    ExprPtr first;
    ExprPtr second;
};
struct Constr {
    std::string tag;
    std::vector<ExprPtr> args;
};
struct Clause {
    Pattern pattern;
    ExprPtr body;
};
struct Match {
    ExprPtr scrutinee;
    std::vector<Clause> clauses;
};
struct SetRef {
    ExprPtr dest;
    ExprPtr index;
    ExprPtr value;
};
struct Hole {};
/// Local mutually-recursive group scoping over `body`.
struct Letrec {
    FunGroup group;
    ExprPtr body;
};

struct Expr {
    using Node = std::variant<Var, Int, Call, Let, Seq, Constr, Match, SetRef, Hole, Letrec>;

    Node node;
    SourceSpan span;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
};

/// Structural equality; spans are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const FunGroup& a, const FunGroup& b);

// Builders. The optional span is copied onto the new node.
ExprPtr make(Expr::Node node, SourceSpan span = {});
ExprPtr var(std::string name);
ExprPtr integer(std::int64_t n);
ExprPtr call(std::string callee, std::vector<ExprPtr> args, bool tailcall = false);
ExprPtr let(std::string binder, ExprPtr bound, ExprPtr body);
ExprPtr seq(ExprPtr first, ExprPtr second);
ExprPtr constr(std::string tag, std::vector<ExprPtr> args = {});
ExprPtr match(ExprPtr scrutinee, std::vector<Clause> clauses);
ExprPtr setref(ExprPtr dest, ExprPtr index, ExprPtr value);
ExprPtr hole();
ExprPtr letrec(FunGroup group, ExprPtr body);

Pattern pvar(std::string name);
Pattern pwild();
Pattern pconstr(std::string tag, std::vector<Pattern> args = {});
Pattern pint(std::int64_t n);

/// Subterm at `path`, or nullptr when the path leaves the tree.
const Expr* subterm(const Expr& root, const Path& path);

/// Every identifier occurring in `p`: function names, parameters, binders,
/// variables and callees. Constructor tags are not identifiers.
std::vector<std::string> identifiers(const Program& p);
void collect_identifiers(const Expr& e, std::vector<std::string>& out);

/// Calls in plain tail position of `e`: the hole positions of the regular
/// tail-context grammar (let body, seq second, match clause bodies, letrec
/// body). Does not enter function bodies of local groups.
std::vector<const Expr*> plain_tail_calls(const Expr& e);

/// The leaves of the plain tail context of `e` (every expression reached by
/// peeling let/seq/match/letrec off the tail).
std::vector<const Expr*> plain_tail_leaves(const Expr& e);

}  // namespace tmc
