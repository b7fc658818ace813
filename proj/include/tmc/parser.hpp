// Concrete s-expression syntax for programs.
//
//   program  := ( "program" letrec* main )
//   letrec   := ( "letrec" fundef+ )
//   fundef   := ( "fun" attrs? SYM ( SYM+ ) expr )
//   attrs    := ( "@" ("tail_mod_cons")* )
//   main     := ( "main" expr )
//   expr     := SYM | INT | ( "int" INT ) | ( "var" SYM )
//             | ( "call" cattrs? SYM expr* )
//             | ( "let" SYM expr expr ) | ( "seq" expr expr )
//             | ( "constr" SYM expr* )
//             | ( "match" expr clause+ )
//             | ( "setref" expr expr expr ) | ( "hole" )
//             | ( "letrec" fundef+ expr )
//             | ( "if" expr expr expr )      ; sugar for match on True/False
//             | ( "tuple" expr* )            ; sugar for constr Tuple
//   cattrs   := ( "@" ("tailcall")* )
//   clause   := ( "case" pat expr )
//   pat      := SYM | "_" | INT | ( SYM pat* )
//
// A bare capitalized symbol in pattern position is a nullary constructor;
// any other bare symbol binds a variable. `;` starts a comment.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tmc/ir.hpp"

namespace tmc {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {});

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourceSpan span_;
    std::string message_;
    std::vector<std::string> expected_;
};

/// Parses a whole program. Throws ParseError at the earliest failing span.
Program parse_program(std::string_view text);

/// Parses a single expression (used by tests and the value-literal reader).
ExprPtr parse_expr(std::string_view text);

/// Canonical layout: two-space indentation, one clause per line, attributes
/// before names. `parse_program(print_program(p)) == p`.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);
std::string print_pattern(const Pattern& p);

}  // namespace tmc
