#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wirt/complex_matrix.hpp"

namespace wirt {

// A declared matrix variable: square, dim x dim, constrained to a structure
// class. Everything downstream (differentiation, finite differences, the
// solver) receives the declaration rather than a bare name because the
// variable's dimension and structure are part of its identity.
struct VariableDecl {
  std::string name;
  int dim = 1;
  StructureClass structure = StructureClass::Unstructured;
};

enum class MatrixOp {
  Const,      // fixed numeric matrix (value)
  Identity,   // I of a known dimension
  Var,        // named matrix variable
  VarConj,    // entrywise conjugate of a named variable
  Transpose,  // child^T
  Add,        // sum of >= 2 children
  ScalarMul,  // scale * child
  MatMul,     // product of >= 2 children, in order
  Hadamard,   // entrywise product of exactly 2 children
  MatPow,     // child^exponent, exponent >= 0
  Apply,      // analytic function of the child
  Conjugate,  // entrywise conjugate (pushed to leaves by canonicalize)
  Adjoint,    // conjugate transpose (rewritten by canonicalize)
};

enum class ScalarOp {
  Lit,       // complex literal
  Param,     // named real parameter
  Trace,     // tr(arg)
  Det,       // det(arg)
  Entry,     // arg(row, col)
  Bilinear,  // left^T arg right, optionally conjugating left
  Neg,       // -child
  Mul,       // product of >= 2 children
  Add,       // sum of >= 2 children
};

enum class FuncKind { Exp, Log, Power, Series, XLogX };

// Entire analytic matrix function F. Power(k) is M^k for any integer k
// (negative k means the inverse power); Series is the finite polynomial
// c0 I + c1 M + c2 M^2 + ...; XLogX is M log(M), the entropy kernel.
struct AnalyticFunction {
  FuncKind kind = FuncKind::Exp;
  int exponent = 0;
  std::vector<cxd> coefficients;

  static AnalyticFunction exp() { return {FuncKind::Exp, 0, {}}; }
  static AnalyticFunction log() { return {FuncKind::Log, 0, {}}; }
  static AnalyticFunction power(int k) { return {FuncKind::Power, k, {}}; }
  static AnalyticFunction series(std::vector<cxd> coeffs);
  static AnalyticFunction xlogx() { return {FuncKind::XLogX, 0, {}}; }
};

struct MatrixNode;
struct ScalarNode;
using MatrixExpr = std::shared_ptr<const MatrixNode>;
using ScalarExpr = std::shared_ptr<const ScalarNode>;

// Nodes are immutable after construction and freely shared between
// expressions and threads. Always build through the factory functions below;
// they enforce the shape invariants.
struct MatrixNode {
  MatrixOp op;
  int dim = 0;
  std::vector<MatrixExpr> children;
  ScalarExpr scale;                             // ScalarMul
  std::string name;                             // Var, VarConj
  std::shared_ptr<const ComplexMatrix> value;   // Const
  int exponent = 0;                             // MatPow
  AnalyticFunction func;                        // Apply
};

struct ScalarNode {
  ScalarOp op;
  std::vector<ScalarExpr> children;  // Neg, Mul, Add
  MatrixExpr arg;                    // Trace, Det, Entry, Bilinear
  cxd lit;                           // Lit
  std::string name;                  // Param
  int row = 0, col = 0;              // Entry
  std::vector<cxd> left, right;      // Bilinear
  bool conj_left = false;            // Bilinear
};

// Matrix factories.
MatrixExpr m_const(const ComplexMatrix& value);
MatrixExpr m_identity(int n);
MatrixExpr m_zero(int n);
MatrixExpr m_var(const std::string& name, int n);
MatrixExpr m_var(const VariableDecl& decl);
MatrixExpr m_var_conj(const std::string& name, int n);
MatrixExpr m_transpose(const MatrixExpr& m);
MatrixExpr m_conj(const MatrixExpr& m);
MatrixExpr m_adjoint(const MatrixExpr& m);
MatrixExpr m_add(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr m_add(std::vector<MatrixExpr> terms);
MatrixExpr m_sub(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr m_neg(const MatrixExpr& m);
MatrixExpr m_smul(const ScalarExpr& s, const MatrixExpr& m);
MatrixExpr m_mul(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr m_mul(std::vector<MatrixExpr> factors);
MatrixExpr m_hadamard(const MatrixExpr& a, const MatrixExpr& b);
MatrixExpr m_pow(const MatrixExpr& m, int k);  // k >= 0
MatrixExpr m_apply(const AnalyticFunction& f, const MatrixExpr& m);
MatrixExpr m_inverse(const MatrixExpr& m);  // Apply(Power(-1), m)

// Scalar factories.
ScalarExpr s_lit(cxd v);
ScalarExpr s_lit(double v);
ScalarExpr s_param(const std::string& name);
ScalarExpr s_trace(const MatrixExpr& m);
ScalarExpr s_det(const MatrixExpr& m);
ScalarExpr s_entry(const MatrixExpr& m, int row, int col);
ScalarExpr s_bilinear(const std::vector<cxd>& left, const MatrixExpr& m,
                      const std::vector<cxd>& right, bool conj_left);
ScalarExpr s_neg(const ScalarExpr& s);
ScalarExpr s_add(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr s_add(std::vector<ScalarExpr> terms);
ScalarExpr s_sub(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr s_mul(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr s_mul(std::vector<ScalarExpr> factors);

// tr(m^dagger m) = ||m||_F^2.
ScalarExpr frob2(const MatrixExpr& m);

// Total structural order; 0 iff structurally identical.
int compare(const MatrixExpr& a, const MatrixExpr& b);
int compare(const ScalarExpr& a, const ScalarExpr& b);
bool equal(const MatrixExpr& a, const MatrixExpr& b);
bool equal(const ScalarExpr& a, const ScalarExpr& b);

// How a variable occurs in an expression, accounting for conjugation parity:
// Z inside conj(...) counts as a conjugated use of Z.
struct VarUse {
  bool plain = false;
  bool conjugated = false;
};
std::map<std::string, VarUse> free_vars(const ScalarExpr& e);
std::map<std::string, VarUse> free_vars(const MatrixExpr& e);

// Dimension of a named variable's occurrences, or 0 if absent.
int var_dim(const ScalarExpr& e, const std::string& name);

// Replace variables by matrix expressions (conjugated occurrences get the
// conjugated replacement). Results are raw; canonicalize afterwards.
ScalarExpr substitute(const ScalarExpr& e,
                      const std::map<std::string, MatrixExpr>& repl);
MatrixExpr substitute(const MatrixExpr& e,
                      const std::map<std::string, MatrixExpr>& repl);

// Replace parameters by literals.
ScalarExpr substitute_params(const ScalarExpr& e,
                             const std::map<std::string, double>& values);
MatrixExpr substitute_params(const MatrixExpr& e,
                             const std::map<std::string, double>& values);

// Structural complex conjugate of a scalar expression (parameters are real).
ScalarExpr sconj(const ScalarExpr& e);

// Canonical form: Adjoint rewritten, Conjugate and Transpose pushed to
// variable leaves, Add/Mul flattened and deterministically ordered, literal
// and constant arithmetic folded, zero and identity terms simplified.
// Idempotent: canonicalize(canonicalize(e)) is identical to canonicalize(e).
ScalarExpr canonicalize(const ScalarExpr& e);
MatrixExpr canonicalize(const MatrixExpr& e);

// True for the canonical zero forms (all-zero Const / literal 0).
bool is_zero(const MatrixExpr& e);
bool is_zero(const ScalarExpr& e);

}  // namespace wirt
