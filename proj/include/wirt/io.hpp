#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wirt/complex_matrix.hpp"
#include "wirt/expr.hpp"
#include "wirt/solve.hpp"

namespace wirt {

// Malformed or unreadable input document (matrix file, declaration file,
// problem file), or an unsupported request built from one.
struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix serialization. The plain-text layout is the dimension on the first
// line, then n rows of real parts and n rows of imaginary parts, each row n
// space-separated decimals written with 17 significant digits. The
// structured layout is a JSON object {"n": int, "re": [[...]], "im":
// [[...]]}. Readers accept either; a leading '{' selects JSON.
std::string write_matrix_text(const ComplexMatrix& m);
std::string write_matrix_json(const ComplexMatrix& m);
ComplexMatrix read_matrix(const std::string& text);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const ComplexMatrix& m,
                       bool as_json = false);

// Declaration files: one "name dim structure" per line, with structure one
// of unstructured, diagonal, symmetric, antisymmetric, hermitian,
// antihermitian. Blank lines and '#' comments are skipped.
VariableDecl parse_decl_line(const std::string& line);
std::vector<VariableDecl> parse_decls(const std::string& text);
std::vector<VariableDecl> read_decls_file(const std::string& path);

// A constrained problem read from its text form. Line directives:
//
//   objective EXPR                 required, once
//   variable NAME DIM STRUCTURE    required, once
//   constraint EXPR = VALUE        zero or more; VALUE is a constant
//                                  scalar expression (params allowed)
//   direction minimize|maximize|stationary   default minimize
//   density                        project iterates to the density set
//   matrix NAME PATH               bind a constant matrix from a file
//   param NAME VALUE               real parameter
//   start PATH                     iterative starting point
//
// Paths resolve relative to the problem file. Constants bound by "matrix"
// are substituted into the objective and constraints; constraints are named
// c1, c2, ... in file order. The *_text fields echo the source lines.
struct ProblemFile {
  Problem problem;
  std::map<std::string, ComplexMatrix> bindings;
  std::optional<ComplexMatrix> start;
  std::string objective_text;
  std::string variable_text;
  std::vector<std::string> constraint_texts;
  std::string direction_text = "minimize";
};

ProblemFile read_problem(const std::string& text,
                         const std::string& base_dir);
ProblemFile read_problem_file(const std::string& path);

// Recognition of the worked problems that admit closed-form solutions. A
// problem matches when its canonicalized objective and constraints coincide
// with the reference form; unmatched problems fall back to the iterative
// solver.
enum class ClosedKind {
  None,
  Purity,         // min tr(Z^2), tr(Z) = 1, hermitian
  Entropy,        // max -tr(xlogx(Z)), tr(Z) = 1, hermitian
  Gibbs,          // entropy with an extra energy constraint tr(H*Z) = E
  FrobeniusNorm,  // min frob2(Z - L), frob2(Z) = C^2
  FrobeniusTrace,         // min frob2(Z - L), tr(Z) = D
  FrobeniusNormAndTrace,  // both constraints at once
};
std::string closed_kind_name(ClosedKind k);

struct ClosedMatch {
  ClosedKind kind = ClosedKind::None;
  std::optional<ComplexMatrix> mat;  // Gibbs energy matrix, or Frobenius L
  double energy = 0.0;               // Gibbs target
  double c_norm = 0.0;               // Frobenius norm target C
  cxd d_trace = 0.0;                 // Frobenius trace target D

  explicit operator bool() const { return kind != ClosedKind::None; }
};

ClosedMatch match_closed(const ProblemFile& pf);

// Solve a matched problem by its closed form and certify the result with
// the symbolic stationarity check, so the report carries the same residual
// fields the iterative path produces.
SolveReport solve_closed(const ProblemFile& pf, const ClosedMatch& m);

// Full report document: every SolveReport field, the method used, and an
// echo of the problem as read (matrices included).
std::string report_json(const SolveReport& rep, const ProblemFile& pf,
                        const std::string& method);

}  // namespace wirt
