#pragma once

#include <map>
#include <set>
#include <string>

#include "wirt/complex_matrix.hpp"
#include "wirt/expr.hpp"
#include "wirt/linalg.hpp"

namespace wirt {

// Bindings for evaluation: matrix values by variable name, real values by
// parameter name.
struct EvalEnv {
  std::map<std::string, ComplexMatrix> bindings;
  std::map<std::string, double> params;
};

// Evaluate an expression (raw or canonical). Unbound names, dimension
// mismatches and numeric failures (singular inverse, logarithm off the
// principal domain) throw EvalError.
cxd eval_scalar(const ScalarExpr& e, const EvalEnv& env);
ComplexMatrix eval_matrix(const MatrixExpr& e, const EvalEnv& env);

// Apply an analytic function to a concrete matrix. Hermitian arguments use
// the spectral decomposition for Log and XLogX (with a domain check);
// general arguments fall back to the series and inverse-scaling routines.
ComplexMatrix matrix_function(const AnalyticFunction& f,
                              const ComplexMatrix& a);

// Names of every parameter occurring in the expression.
std::set<std::string> parameter_names(const ScalarExpr& e);
std::set<std::string> parameter_names(const MatrixExpr& e);

// Check that every free variable has a binding of the right dimension and
// every parameter a value; throws EvalError naming the first problem.
void validate_env(const ScalarExpr& e, const EvalEnv& env);

}  // namespace wirt
