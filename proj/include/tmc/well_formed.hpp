#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tmc/diagnostic.hpp"
#include "tmc/ir.hpp"

namespace tmc {

/// Builtin functions known to every program.
bool is_builtin(std::string_view name);
std::optional<std::size_t> builtin_arity(std::string_view name);

/// Checks the program invariants: distinct parameters and pattern binders,
/// globally distinct function names, resolvable names, arities of direct
/// calls, non-empty matches, literal setref indices >= 1, and holes only in
/// constructor-argument position. Returns one diagnostic per violation.
std::vector<Diagnostic> well_formed(const Program& p);

}  // namespace tmc
