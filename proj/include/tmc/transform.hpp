// Destination-passing-style rewriting of tail_mod_cons functions.
//
// For every marked `f` the transformed program holds two functions in f's
// group: `f` itself, rewritten so that constructor applications holding a
// TMC call allocate a partial block and switch to DPS, and `f_dps`, which
// takes a destination (block, field index) as its two leading parameters and
// writes its result there. In `f_dps` every TMC call becomes a tail call to
// the callee's DPS companion; every other tail expression becomes a setref.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmc/analysis.hpp"
#include "tmc/diagnostic.hpp"
#include "tmc/ir.hpp"

namespace tmc {

/// Generates `base0`, `base1`, ... skipping identifiers already in use.
struct FreshNamer {
    std::set<std::string> used;
    std::map<std::string, int> counter;

    FreshNamer() = default;
    explicit FreshNamer(const std::vector<std::string>& taken) : used(taken.begin(), taken.end()) {}
};

std::string fresh(const std::string& base, FreshNamer& namer);

struct TransformOptions {
    /// Delay nested constructors and write them with a single setref. Only
    /// tests turn this off, to compare against the uncompressed rules.
    bool compression = true;
    /// When set, each rule application appends `RULE function:path`.
    std::vector<std::string>* rule_trace = nullptr;
};

/// The DPS companion of marked `f`: params (dst, idx, f.params...).
/// Throws std::logic_error if `f` is not marked or failed to decompose, or
/// if the produced body has a tail leaf that is neither a setref nor a DPS
/// call.
FunDef transform_dps(const FunDef& f, const Analysis& analysis, const TransformOptions& options = {});

/// The direct-style replacement of marked `f`, same name and params.
FunDef transform_direct(const FunDef& f, const Analysis& analysis, const TransformOptions& options = {});

struct TransformResult {
    std::optional<Program> program;
    std::vector<Diagnostic> diagnostics;
};

/// Transforms a whole program. Fails (no program) on any error diagnostic
/// from well-formedness or analysis. The output carries no tail_mod_cons or
/// tailcall attributes.
TransformResult transform_program(const Program& p, const TransformOptions& options = {});

/// Every tail leaf of `body` is a setref or a call to a name in `dps_names`.
bool is_dps_shaped(const Expr& body, const std::set<std::string>& dps_names);

}  // namespace tmc
