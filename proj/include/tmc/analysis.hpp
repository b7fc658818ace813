// Marks, rewrite scope, TMC candidates and context decomposition.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmc/decomposition.hpp"
#include "tmc/diagnostic.hpp"
#include "tmc/ir.hpp"

namespace tmc {

/// Functions carrying the tail_mod_cons attribute and the names of their
/// destination-passing companions.
struct MarkSet {
    std::set<std::string> marked;
    std::map<std::string, std::string> dps_name;

    bool is_marked(const std::string& name) const { return marked.count(name) != 0; }
    const std::string& dps_of(const std::string& name) const { return dps_name.at(name); }
};

/// Every tail_mod_cons function gets `<name>_dps`, or `<name>_dps2`,
/// `<name>_dps3`... when that identifier is already taken.
MarkSet collect_marks(const Program& p);

enum class Eligibility { RewriteEligible, NotEligible };

enum class CalleeKind { Function, Indirect, Builtin, Unknown };

struct CallSite {
    const Expr* node = nullptr;
    std::string root;  // toplevel function name or "main"
    Path path;
    std::string callee;
    CalleeKind callee_kind = CalleeKind::Unknown;
    bool inside_marked = false;  // some enclosing function body is marked
    Eligibility verdict = Eligibility::NotEligible;
};

/// Where a function lives: the toplevel root its body hangs under and the
/// path of its body from that root.
struct FunctionInfo {
    const FunDef* def = nullptr;
    std::string root;
    Path body_path;
    std::size_t group = 0;
    bool toplevel = true;
};

/// Per-call-site rewrite eligibility. A call to a marked function is
/// eligible iff it sits inside the body of a function of the callee's own
/// group, or inside the body of any marked function (at any nesting depth).
/// Calls made directly from `main` are never eligible.
struct ScopeVerdict {
    std::vector<CallSite> sites;
    std::unordered_map<const Expr*, std::size_t> by_node;
    std::map<std::string, FunctionInfo> functions;
    std::vector<Diagnostic> diagnostics;  // UselessMark warnings

    const CallSite* site(const Expr* call) const;
    Eligibility at(const Expr* call) const;
};

ScopeVerdict resolve_scope(const Program& p, const MarkSet& marks);

/// `e` is a call to a marked function at a rewrite-eligible site.
bool is_candidate_call(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope);

/// Some tail-modulo-cons position of `e` holds a candidate call.
bool has_candidate(const Expr& e, const MarkSet& marks, const ScopeVerdict& scope);

/// Candidate calls in tail-modulo-cons positions of `e`, with their paths
/// relative to `e`.
std::vector<std::pair<const Expr*, Path>> candidate_calls(const Expr& e, const MarkSet& marks,
                                                          const ScopeVerdict& scope);

struct DecomposeResult {
    std::optional<Decomposition> decomposition;
    std::vector<Diagnostic> diagnostics;
};

/// Decomposes `e` into a tail-modulo-cons context and holes. Constructs are
/// only decomposed when they contain a candidate; among constructor
/// arguments the unique candidate-bearing one is chosen, or else the unique
/// one holding a tailcall-annotated candidate. Anything else is reported as
/// AmbiguousTmc. Annotated calls that end up outside every hole are reported
/// as TailcallNotSatisfiable.
///
/// `root` and `base` locate `e` for diagnostics.
DecomposeResult decompose_tmc(const ExprPtr& e, const MarkSet& marks, const ScopeVerdict& scope,
                              const std::string& root = "", const Path& base = {});

struct Analysis {
    MarkSet marks;
    ScopeVerdict scope;
    std::map<std::string, Decomposition> decompositions;  // keyed by marked function name
    std::vector<Diagnostic> diagnostics;
    std::vector<std::string> identifiers;  // every name in the program
};

/// Runs marks, scope resolution, decomposition of every marked body and the
/// tailcall checks of unmarked bodies. Expects a well-formed program; the
/// program must outlive the result.
Analysis analyze(const Program& p);

}  // namespace tmc
