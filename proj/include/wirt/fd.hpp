#pragma once

#include <stdexcept>

#include "wirt/derive.hpp"
#include "wirt/eval.hpp"
#include "wirt/expr.hpp"

namespace wirt {

// Finite-difference probing failed: missing or structure-violating binding,
// or a non-finite difference quotient.
struct FDError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FDConfig {
  double h = 1e-5;    // central-difference step
  double tol = 1e-6;  // relative tolerance for grad_check
};

// Numeric Wirtinger gradient pair at one point, from central differences
// along the independent real coordinates of the variable's structure class.
// Dependent entries (mirrors, fixed diagonals) are filled in to match the
// layout of the symbolic structure-corrected pair.
struct FDGradient {
  ComplexMatrix d_var;
  ComplexMatrix d_var_conj;

  explicit FDGradient(int n) : d_var(n), d_var_conj(n) {}
};

FDGradient fd_wirtinger(const ScalarExpr& f, const VariableDecl& v,
                        const EvalEnv& env, const FDConfig& cfg = {});

// Entrywise comparison of a symbolic gradient pair against the
// finite-difference oracle at the bound point. Errors are relative to
// max(1, |oracle entry|).
struct GradCheckReport {
  bool pass = false;
  double max_rel_err = 0.0;
  int worst_row = 0;
  int worst_col = 0;
  bool worst_in_conj = false;  // worst entry lies in the d_var_conj half
};

GradCheckReport grad_check(const WirtingerPair& p, const ScalarExpr& f,
                           const EvalEnv& env, const FDConfig& cfg = {});

// Max |entry| of the finite-difference df/dconj(Z) with every entry treated
// as free; zero (to FD accuracy) exactly when f is holomorphic in v at the
// bound point.
double cauchy_riemann_defect(const ScalarExpr& f, const VariableDecl& v,
                             const EvalEnv& env, const FDConfig& cfg = {});

}  // namespace wirt
