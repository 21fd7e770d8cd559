#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wirt/expr.hpp"

namespace wirt {

// Syntax error, with the character offset it was detected at.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

// Use of an identifier that is not declared, or declared inconsistently.
struct DeclError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse a scalar objective in the expression language:
//
//   scalar := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := satom ('^' INT)* | '-' factor
//   satom  := NUMBER | @param | tr(matrix) | det(matrix) | frob2(matrix)
//           | entry(matrix, INT, INT) | '(' scalar ')'
//   matrix := ['-'] mterm (('+'|'-') mterm)*
//   mterm  := matom ('*' matom)*
//   matom  := primary ('^' ['-'] INT)*
//   primary:= IDENT | I | conj(matrix) | adj(matrix) | tp(matrix)
//           | exp(matrix) | log(matrix) | xlogx(matrix)
//           | had(matrix, matrix) | mat(INT; scalar, ...) | '(' matrix ')'
//           | NUMBER | @param | tr(matrix) | det(matrix) | frob2(matrix)
//           | entry(matrix, INT, INT)
//
// Scalar-valued atoms in matrix position mean s*I, and mat(n; ...) is an
// n-by-n constant with n*n row-major constant entries, so every canonical
// derivative the printer emits (including "0") parses back. NUMBER is a
// decimal, optionally with exponent and an 'i' suffix for imaginary
// literals. Identifiers must be declared; "I" and the function names are
// reserved. Returned trees are raw (not canonicalized). Matrix subterms
// that fix no dimension on their own (such as "tr((tr(Z)*I)^-1)") take
// default_dim when it is positive and fail otherwise.
ScalarExpr parse(const std::string& text,
                 const std::vector<VariableDecl>& decls,
                 int default_dim = 0);

// Parse a matrix expression on its own (the sublanguage above). A purely
// numeric expression such as "0" or "2*I" fixes no dimension by itself;
// expect_dim > 0 supplies one (and is checked against any inferred
// dimension).
MatrixExpr parse_matrix(const std::string& text,
                        const std::vector<VariableDecl>& decls,
                        int expect_dim = 0);

bool is_reserved_word(const std::string& name);

}  // namespace wirt
