#pragma once

#include <stdexcept>
#include <vector>

#include "wirt/complex_matrix.hpp"

namespace wirt {

// Numeric evaluation failure: singular or ill-conditioned inverse, log of a
// non-positive spectrum, branch-cut or non-convergent iterations.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LU factorization with partial pivoting, kept as combined L\U plus the pivot
// permutation. Factorization itself never throws; consumers decide how much
// conditioning they require.
struct LuFactors {
  ComplexMatrix lu;
  std::vector<int> perm;
  int sign = 1;
  bool singular = false;

  explicit LuFactors(int n) : lu(n) {}
};

LuFactors lu_factor(const ComplexMatrix& a);
cxd lu_det(const LuFactors& f);
std::vector<cxd> lu_solve(const LuFactors& f, const std::vector<cxd>& rhs);

cxd det(const ComplexMatrix& a);

// Inverse via LU. Throws EvalError when the matrix is singular or the 1-norm
// condition estimate exceeds cond_limit.
ComplexMatrix inverse(const ComplexMatrix& a, double cond_limit = 1e14);

double norm1(const ComplexMatrix& a);

// Condition estimate ||A||_1 * ||A^-1||_1 computed alongside the inverse.
struct InverseResult {
  ComplexMatrix inv;
  double cond1;
};
InverseResult inverse_with_cond(const ComplexMatrix& a);

// Eigendecomposition of a Hermitian matrix by the cyclic complex Jacobi
// method: a = vectors * diag(values) * vectors^dagger, values ascending,
// vectors unitary. Throws EvalError if a is not Hermitian to tolerance.
struct HermEig {
  std::vector<double> values;
  ComplexMatrix vectors;

  explicit HermEig(int n) : vectors(n) {}
};
HermEig hermitian_eig(const ComplexMatrix& a, double herm_tol = 1e-10);

// Rebuild vectors * diag(f(values)) * vectors^dagger.
ComplexMatrix eig_apply(const HermEig& e, const std::vector<double>& fvalues);

// Matrix exponential by scaling-and-squaring on the Taylor series. Valid for
// any square matrix; used directly for non-Hermitian arguments and as the
// independent cross-check path for Hermitian ones.
ComplexMatrix exp_series(const ComplexMatrix& a);

// Principal square root by the Denman-Beavers iteration. Throws EvalError on
// non-convergence (eigenvalues on the closed negative real axis).
ComplexMatrix sqrt_db(const ComplexMatrix& a);

// Principal matrix logarithm by inverse scaling-and-squaring for general
// matrices. Hermitian positive-definite arguments are better served by the
// eigendecomposition path in matrix_function.
ComplexMatrix log_general(const ComplexMatrix& a);

// Nearest-in-spirit density matrix: Hermitian projection, eigenvalues
// clipped to at least floor, trace renormalized to one.
ComplexMatrix density_project(const ComplexMatrix& a, double floor = 1e-12);

}  // namespace wirt
