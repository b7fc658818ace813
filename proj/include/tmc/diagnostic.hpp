#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tmc/ir.hpp"

namespace tmc {

enum class Severity { Error, Warning };

enum class DiagCode {
    // well-formedness
    DuplicateParam,
    DuplicateBinder,
    DuplicateFunction,
    MisplacedHole,
    UnboundName,
    ArityMismatch,
    EmptyMatch,
    BadIndex,
    // analysis
    AmbiguousTmc,
    TailcallNotSatisfiable,
    UselessMark,
};

std::string_view to_string(Severity s);
std::string_view to_string(DiagCode c);

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagCode code = DiagCode::UnboundName;
    SourceSpan span;
    std::string root;  // enclosing toplevel function name, or "main"
    Path path;
    std::string message;
    std::vector<Path> candidate_paths;  // AmbiguousTmc only
};

/// `SEVERITY CODE file:line:col message`, one line, no trailing newline.
std::string render(const Diagnostic& d, std::string_view file);

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace tmc
