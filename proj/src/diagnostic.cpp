#include "tmc/diagnostic.hpp"

#include <algorithm>

namespace tmc {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::string_view to_string(DiagCode c) {
    switch (c) {
        case DiagCode::DuplicateParam: return "DuplicateParam";
        case DiagCode::DuplicateBinder: return "DuplicateBinder";
        case DiagCode::DuplicateFunction: return "DuplicateFunction";
        case DiagCode::MisplacedHole: return "MisplacedHole";
        case DiagCode::UnboundName: return "UnboundName";
        case DiagCode::ArityMismatch: return "ArityMismatch";
        case DiagCode::EmptyMatch: return "EmptyMatch";
        case DiagCode::BadIndex: return "BadIndex";
        case DiagCode::AmbiguousTmc: return "AmbiguousTmc";
        case DiagCode::TailcallNotSatisfiable: return "TailcallNotSatisfiable";
        case DiagCode::UselessMark: return "UselessMark";
    }
    return "Unknown";
}

std::string render(const Diagnostic& d, std::string_view file) {
    std::string out;
    out += to_string(d.severity);
    out += ' ';
    out += to_string(d.code);
    out += ' ';
    out += file;
    out += ':';
    out += std::to_string(d.span.line);
    out += ':';
    out += std::to_string(d.span.column);
    out += ' ';
    out += d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace tmc
