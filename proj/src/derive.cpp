#include "wirt/derive.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wirt {

namespace {

// Reverse-mode accumulation over a canonical tree. A matrix cotangent S at a
// subterm M means the enclosing expression contributes tr(S^T dM) to df;
// scalar subterms carry a plain scalar adjoint. Canonical input guarantees
// the walker never meets Conjugate or Adjoint nodes and sees Transpose only
// directly above a variable leaf.
struct Accum {
  const VariableDecl& var;
  std::vector<MatrixExpr> plain;  // contributions to df/dZ
  std::vector<MatrixExpr> conj;   // contributions to df/dconj(Z)

  explicit Accum(const VariableDecl& v) : var(v) {}
};

MatrixExpr unit_matrix(int n, int i, int j) {
  ComplexMatrix e(n);
  e.set(i, j, cxd(1.0, 0.0));
  return m_const(e);
}

void back_matrix(const MatrixExpr& e, const MatrixExpr& seed, Accum& acc);
void back_scalar(const ScalarExpr& e, const ScalarExpr& adj, Accum& acc);

// Derivative of the analytic function itself, for use inside a trace
// cotangent. Power is never routed here; it gets exact product-rule seeds.
MatrixExpr function_derivative(const AnalyticFunction& f, const MatrixExpr& m) {
  switch (f.kind) {
    case FuncKind::Exp:
      return m_apply(AnalyticFunction::exp(), m);
    case FuncKind::Log:
      return m_inverse(m);
    case FuncKind::XLogX:
      return m_add(m_identity(m->dim), m_apply(AnalyticFunction::log(), m));
    case FuncKind::Series: {
      std::vector<cxd> shifted;
      for (std::size_t k = 1; k < f.coefficients.size(); ++k)
        shifted.push_back(double(k) * f.coefficients[k]);
      return m_apply(AnalyticFunction::series(std::move(shifted)), m);
    }
    case FuncKind::Power:
      break;
  }
  throw DeriveError("no symbolic derivative for this analytic function");
}

void back_transcendental(const MatrixExpr& e, const MatrixExpr& seed,
                         Accum& acc) {
  // d tr(u F(M)) = u tr(F'(M) dM) needs the cotangent to be a multiple of
  // the identity; anything else means F(M) is consumed entrywise, which has
  // no closed matrix form here.
  const MatrixExpr s = canonicalize(seed);
  if (is_zero(s)) return;
  ScalarExpr u;
  if (s->op == MatrixOp::Identity) {
    u = s_lit(1.0);
  } else if (s->op == MatrixOp::ScalarMul &&
             s->children[0]->op == MatrixOp::Identity) {
    u = s->scale;
  } else {
    throw DeriveError(
        "matrix function derivative requires a direct trace context");
  }
  const MatrixExpr& m = e->children[0];
  back_matrix(m, m_smul(u, m_transpose(function_derivative(e->func, m))), acc);
}

void back_matrix(const MatrixExpr& e, const MatrixExpr& seed, Accum& acc) {
  switch (e->op) {
    case MatrixOp::Const:
    case MatrixOp::Identity:
      return;
    case MatrixOp::Var:
      if (e->name == acc.var.name) acc.plain.push_back(seed);
      return;
    case MatrixOp::VarConj:
      if (e->name == acc.var.name) acc.conj.push_back(seed);
      return;
    case MatrixOp::Transpose:
      back_matrix(e->children[0], m_transpose(seed), acc);
      return;
    case MatrixOp::Add:
      for (const auto& c : e->children) back_matrix(c, seed, acc);
      return;
    case MatrixOp::ScalarMul:
      // d(s M) = ds M + s dM.
      back_scalar(e->scale,
                  s_trace(m_mul(m_transpose(seed), e->children[0])), acc);
      back_matrix(e->children[0], m_smul(e->scale, seed), acc);
      return;
    case MatrixOp::MatMul: {
      const auto& c = e->children;
      for (std::size_t i = 0; i < c.size(); ++i) {
        // tr(S^T P dC Q) = tr((P^T S Q^T)^T dC).
        std::vector<MatrixExpr> factors;
        if (i > 0) {
          std::vector<MatrixExpr> prefix(c.begin(), c.begin() + i);
          factors.push_back(m_transpose(
              prefix.size() == 1 ? prefix[0] : m_mul(std::move(prefix))));
        }
        factors.push_back(seed);
        if (i + 1 < c.size()) {
          std::vector<MatrixExpr> suffix(c.begin() + i + 1, c.end());
          factors.push_back(m_transpose(
              suffix.size() == 1 ? suffix[0] : m_mul(std::move(suffix))));
        }
        back_matrix(c[i],
                    factors.size() == 1 ? factors[0] : m_mul(std::move(factors)),
                    acc);
      }
      return;
    }
    case MatrixOp::Hadamard:
      back_matrix(e->children[0], m_hadamard(seed, e->children[1]), acc);
      back_matrix(e->children[1], m_hadamard(seed, e->children[0]), acc);
      return;
    case MatrixOp::MatPow: {
      // d(M^k) = sum over r of M^r dM M^(k-1-r).
      const MatrixExpr& m = e->children[0];
      const MatrixExpr mt = m_transpose(m);
      for (int r = 0; r < e->exponent; ++r) {
        std::vector<MatrixExpr> factors;
        if (r > 0) factors.push_back(m_pow(mt, r));
        factors.push_back(seed);
        if (e->exponent - 1 - r > 0)
          factors.push_back(m_pow(mt, e->exponent - 1 - r));
        back_matrix(m,
                    factors.size() == 1 ? factors[0] : m_mul(std::move(factors)),
                    acc);
      }
      return;
    }
    case MatrixOp::Apply: {
      if (e->func.kind == FuncKind::Power) {
        const int k = e->func.exponent;
        const MatrixExpr& m = e->children[0];
        if (k >= 0) {
          back_matrix(m_pow(m, k), seed, acc);
          return;
        }
        // d(M^k), k < 0: minus the sum over r = 1..|k| of
        // M^-r dM M^(k-1+r); r = |k| pairs M^-|k| with M^-1.
        const MatrixExpr mt = m_transpose(m);
        for (int r = 1; r <= -k; ++r) {
          std::vector<MatrixExpr> factors;
          factors.push_back(m_apply(AnalyticFunction::power(-r), mt));
          factors.push_back(seed);
          factors.push_back(m_apply(AnalyticFunction::power(k - 1 + r), mt));
          back_matrix(m, m_neg(m_mul(std::move(factors))), acc);
        }
        return;
      }
      back_transcendental(e, seed, acc);
      return;
    }
    case MatrixOp::Conjugate:
    case MatrixOp::Adjoint:
      break;
  }
  throw DeriveError("differentiation expects a canonical expression");
}

void back_scalar(const ScalarExpr& e, const ScalarExpr& adj, Accum& acc) {
  switch (e->op) {
    case ScalarOp::Lit:
    case ScalarOp::Param:
      return;
    case ScalarOp::Trace:
      back_matrix(e->arg, m_smul(adj, m_identity(e->arg->dim)), acc);
      return;
    case ScalarOp::Det:
      // d det(M) = det(M) tr(M^-1 dM), so S = u det(M) (M^T)^-1.
      back_matrix(e->arg,
                  m_smul(s_mul(adj, s_det(e->arg)),
                         m_transpose(m_inverse(e->arg))),
                  acc);
      return;
    case ScalarOp::Entry:
      back_matrix(e->arg, m_smul(adj, unit_matrix(e->arg->dim, e->row, e->col)),
                  acc);
      return;
    case ScalarOp::Bilinear: {
      // d(l^T M r) = sum over ij of l_i r_j dM_ij, so S = u l r^T.
      const int n = e->arg->dim;
      ComplexMatrix outer(n);
      for (int i = 0; i < n; ++i) {
        const cxd li = e->conj_left ? std::conj(e->left[i]) : e->left[i];
        for (int j = 0; j < n; ++j) outer.set(i, j, li * e->right[j]);
      }
      back_matrix(e->arg, m_smul(adj, m_const(outer)), acc);
      return;
    }
    case ScalarOp::Neg:
      back_scalar(e->children[0], s_neg(adj), acc);
      return;
    case ScalarOp::Mul:
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        std::vector<ScalarExpr> rest = {adj};
        for (std::size_t j = 0; j < e->children.size(); ++j)
          if (j != i) rest.push_back(e->children[j]);
        back_scalar(e->children[i],
                    rest.size() == 1 ? rest[0] : s_mul(std::move(rest)), acc);
      }
      return;
    case ScalarOp::Add:
      for (const auto& c : e->children) back_scalar(c, adj, acc);
      return;
  }
  throw DeriveError("differentiation expects a canonical expression");
}

MatrixExpr gather(std::vector<MatrixExpr> terms, int n) {
  if (terms.empty()) return m_zero(n);
  return canonicalize(terms.size() == 1 ? terms[0]
                                        : m_add(std::move(terms)));
}

}  // namespace

WirtingerPair derive_unstructured(const ScalarExpr& f, const VariableDecl& v) {
  const int used = var_dim(f, v.name);
  if (used != 0 && used != v.dim)
    throw ShapeError("variable '" + v.name + "' is declared " +
                     std::to_string(v.dim) + "x" + std::to_string(v.dim) +
                     " but appears with dimension " + std::to_string(used));
  Accum acc(v);
  back_scalar(canonicalize(f), s_lit(1.0), acc);
  WirtingerPair out{gather(std::move(acc.plain), v.dim),
                    gather(std::move(acc.conj), v.dim), v, false};
  return out;
}

WirtingerPair apply_structure(const WirtingerPair& p) {
  const MatrixExpr& a = p.d_var;
  const MatrixExpr& b = p.d_var_conj;
  const int n = p.variable.dim;
  const MatrixExpr eye = m_identity(n);
  MatrixExpr ca = a, cb = b;
  switch (p.variable.structure) {
    case StructureClass::Unstructured:
      break;
    case StructureClass::Diagonal:
      ca = m_hadamard(eye, a);
      cb = m_hadamard(eye, b);
      break;
    case StructureClass::Symmetric:
      ca = m_sub(m_add(a, m_transpose(a)), m_hadamard(eye, a));
      cb = m_sub(m_add(b, m_transpose(b)), m_hadamard(eye, b));
      break;
    case StructureClass::AntiSymmetric:
      ca = m_sub(a, m_transpose(a));
      cb = m_sub(b, m_transpose(b));
      break;
    case StructureClass::Hermitian:
      ca = m_add(a, m_transpose(b));
      cb = m_add(b, m_transpose(a));
      break;
    case StructureClass::AntiHermitian:
      ca = m_sub(a, m_transpose(b));
      cb = m_sub(b, m_transpose(a));
      break;
  }
  return {canonicalize(ca), canonicalize(cb), p.variable, true};
}

WirtingerPair derive(const ScalarExpr& f, const VariableDecl& v) {
  WirtingerPair p = derive_unstructured(f, v);
  if (v.structure == StructureClass::Unstructured) return p;
  return apply_structure(p);
}

bool holomorphic_in(const ScalarExpr& f, const VariableDecl& v) {
  return is_zero(derive_unstructured(f, v).d_var_conj);
}

MatrixExpr power_entry_derivative(const MatrixExpr& z, int n, int i, int j) {
  if (n <= 0) return m_zero(z->dim);
  std::vector<MatrixExpr> terms;
  for (int r = 0; r < n; ++r) {
    std::vector<MatrixExpr> factors;
    if (r > 0) factors.push_back(m_pow(z, r));
    factors.push_back(unit_matrix(z->dim, i, j));
    if (n - 1 - r > 0) factors.push_back(m_pow(z, n - 1 - r));
    terms.push_back(factors.size() == 1 ? factors[0]
                                        : m_mul(std::move(factors)));
  }
  return canonicalize(terms.size() == 1 ? terms[0] : m_add(std::move(terms)));
}

}  // namespace wirt
