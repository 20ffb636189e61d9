#pragma once

#include <string_view>

#include "numfuzz/syntax/ast.hpp"

namespace numfuzz {

/// Parses a whole program. Throws ParseError.
///
///   program := decl*
///   decl    := 'function' IDENT ('(' IDENT ':' type ')')* ':' type '{' block '}'
///   block   := stmt* expr
///   stmt    := IDENT '=' expr ';'                   pure let
///            | 'let' IDENT '=' expr ';'             let-bind
///            | 'let' '[' IDENT ']' '=' expr ';'     box elimination
///            | 'let' '(' IDENT ',' IDENT ')' '=' expr ';'
///   expr    := ('rnd' | 'ret' | 'pi1' | 'pi2' | OP) expr
///            | ('inl' | 'inr') ('{' type '}')? expr
///            | 'case' expr 'of' '{' 'inl' IDENT '.' block '|' 'inr' IDENT '.' block '}'
///            | 'fun' ('(' IDENT ':' type ')')+ '{' block '}'
///            | atom atom*
///   atom    := IDENT | NUMBER | 'err' | '(' ')' | '(' expr ')' | '(' block ')'
///            | '(' expr ',' expr ')' | '(|' expr ',' expr '|)' | '[' expr '{' grade '}' ']'
///   type    := sum ('-o' type)?
///   sum     := prim ('+' prim)*
///   prim    := 'num' | 'unit' | '(' type ')' | '(' type ',' type ')' | '(|' type ',' type '|)'
///            | '<' type ',' type '>' | '!' '[' grade ']' prim | 'M' '[' grade ']' prim
///   grade   := gterm ('+' gterm)*;  gterm := gatom ('*' gatom)*
///   gatom   := NUMBER | 'eps' | 'inf' | '(' grade ')'
///
/// OP is one of add, mul, div, sqrt, lt. Comments run from '#' to end of line.
SourceProgram parse_program(std::string_view text,
                            const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

TermPtr parse_term(std::string_view text, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
Ty parse_type(std::string_view text, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
GradeExpr parse_grade_expr(std::string_view text);

}  // namespace numfuzz
