#pragma once

#include <stdexcept>

#include "wirt/expr.hpp"

namespace wirt {

// Raised when a derivative cannot be formed symbolically, e.g. a
// transcendental matrix function whose cotangent is not a multiple of the
// identity.
struct DeriveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Both halves of the matrix gradient of a scalar f with respect to one
// declared variable, in the entrywise layout (d_var)_ij = df/dz_ij. For a
// real-valued f the conjugate half drives steepest ascent: dz = conj(d_var)
// increases f fastest.
struct WirtingerPair {
  MatrixExpr d_var;       // df/dZ, treating conj(Z) as constant
  MatrixExpr d_var_conj;  // df/dconj(Z), treating Z as constant
  VariableDecl variable;
  bool structure_applied = false;
};

// Gradient with the variable treated as unstructured (every entry free),
// regardless of the declared structure class. Both halves come back
// canonicalized.
WirtingerPair derive_unstructured(const ScalarExpr& f, const VariableDecl& v);

// Rewrite an unstructured gradient pair for the declared structure class, so
// that only the independent coordinates of the class are differentiated and
// dependent entries feed their mirror. Identity on unstructured variables.
WirtingerPair apply_structure(const WirtingerPair& p);

// derive_unstructured followed by apply_structure when the declaration
// carries a structure class.
WirtingerPair derive(const ScalarExpr& f, const VariableDecl& v);

// True when f is holomorphic in v: the canonical df/dconj(Z) is the zero
// matrix.
bool holomorphic_in(const ScalarExpr& f, const VariableDecl& v);

// d(Z^n)/dZ_ij as a matrix in the remaining indices: the sum of
// Z^r E_ij Z^(n-1-r) over r = 0..n-1, canonicalized. E_ij is the matrix
// unit with a single 1 at (i, j).
MatrixExpr power_entry_derivative(const MatrixExpr& z, int n, int i, int j);

}  // namespace wirt
