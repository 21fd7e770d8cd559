#include "wirt/eval.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

namespace wirt {

namespace {

const ComplexMatrix& lookup(const EvalEnv& env, const std::string& name,
                            int dim) {
  auto it = env.bindings.find(name);
  if (it == env.bindings.end())
    throw EvalError("unbound matrix variable '" + name + "'");
  if (it->second.dim() != dim)
    throw EvalError("variable '" + name + "' is bound to a " +
                    std::to_string(it->second.dim()) + "x" +
                    std::to_string(it->second.dim()) + " matrix but used as " +
                    std::to_string(dim) + "x" + std::to_string(dim));
  return it->second;
}

void add_scaled_identity(ComplexMatrix& m, cxd s) {
  for (int i = 0; i < m.dim(); ++i) m.add_at(i, i, s);
}

}  // namespace

ComplexMatrix matrix_function(const AnalyticFunction& f,
                              const ComplexMatrix& a) {
  switch (f.kind) {
    case FuncKind::Power: {
      if (f.exponent >= 0) return a.pow(f.exponent);
      return inverse(a).pow(-f.exponent);
    }
    case FuncKind::Series: {
      const auto& c = f.coefficients;
      if (c.empty()) return ComplexMatrix::zero(a.dim());
      ComplexMatrix acc = ComplexMatrix::scaled_identity(a.dim(), c.back());
      for (std::size_t j = c.size() - 1; j-- > 0;) {
        acc = acc * a;
        add_scaled_identity(acc, c[j]);
      }
      return acc;
    }
    case FuncKind::Exp:
      return exp_series(a);
    case FuncKind::Log: {
      if (a.is_hermitian()) {
        HermEig e = hermitian_eig(a);
        std::vector<double> fv(e.values.size());
        for (std::size_t i = 0; i < e.values.size(); ++i) {
          if (e.values[i] <= 0.0)
            throw EvalError(
                "logarithm needs a positive definite Hermitian argument");
          fv[i] = std::log(e.values[i]);
        }
        return eig_apply(e, fv);
      }
      return log_general(a);
    }
    case FuncKind::XLogX: {
      if (a.is_hermitian()) {
        HermEig e = hermitian_eig(a);
        double top = 1.0;
        for (double w : e.values) top = std::max(top, std::fabs(w));
        const double neg_tol = 1e-12 * top;
        std::vector<double> fv(e.values.size());
        for (std::size_t i = 0; i < e.values.size(); ++i) {
          const double w = e.values[i];
          if (w < -neg_tol)
            throw EvalError(
                "x log x needs a positive semidefinite Hermitian argument");
          // w log w extends continuously to 0 at w = 0; tiny negative
          // eigenvalues are rounding noise on a semidefinite matrix.
          fv[i] = (w <= 1e-300) ? 0.0 : w * std::log(w);
        }
        return eig_apply(e, fv);
      }
      return a * log_general(a);
    }
  }
  throw EvalError("unknown analytic function");
}

ComplexMatrix eval_matrix(const MatrixExpr& e, const EvalEnv& env) {
  switch (e->op) {
    case MatrixOp::Const:
      return *e->value;
    case MatrixOp::Identity:
      return ComplexMatrix::identity(e->dim);
    case MatrixOp::Var:
      return lookup(env, e->name, e->dim);
    case MatrixOp::VarConj:
      return lookup(env, e->name, e->dim).conj();
    case MatrixOp::Transpose:
      return eval_matrix(e->children[0], env).transpose();
    case MatrixOp::Conjugate:
      return eval_matrix(e->children[0], env).conj();
    case MatrixOp::Adjoint:
      return eval_matrix(e->children[0], env).adjoint();
    case MatrixOp::Add: {
      ComplexMatrix acc = eval_matrix(e->children[0], env);
      for (std::size_t i = 1; i < e->children.size(); ++i)
        acc.accumulate(cxd(1.0, 0.0), eval_matrix(e->children[i], env));
      return acc;
    }
    case MatrixOp::ScalarMul:
      return eval_matrix(e->children[0], env).scaled(eval_scalar(e->scale, env));
    case MatrixOp::MatMul: {
      ComplexMatrix acc = eval_matrix(e->children[0], env);
      for (std::size_t i = 1; i < e->children.size(); ++i)
        acc = acc * eval_matrix(e->children[i], env);
      return acc;
    }
    case MatrixOp::Hadamard:
      return eval_matrix(e->children[0], env)
          .hadamard(eval_matrix(e->children[1], env));
    case MatrixOp::MatPow:
      return eval_matrix(e->children[0], env).pow(e->exponent);
    case MatrixOp::Apply:
      return matrix_function(e->func, eval_matrix(e->children[0], env));
  }
  throw EvalError("unknown matrix operation");
}

cxd eval_scalar(const ScalarExpr& e, const EvalEnv& env) {
  switch (e->op) {
    case ScalarOp::Lit:
      return e->lit;
    case ScalarOp::Param: {
      auto it = env.params.find(e->name);
      if (it == env.params.end())
        throw EvalError("unbound parameter '@" + e->name + "'");
      return cxd(it->second, 0.0);
    }
    case ScalarOp::Trace:
      return eval_matrix(e->arg, env).trace();
    case ScalarOp::Det:
      return det(eval_matrix(e->arg, env));
    case ScalarOp::Entry:
      return eval_matrix(e->arg, env)(e->row, e->col);
    case ScalarOp::Bilinear: {
      const ComplexMatrix m = eval_matrix(e->arg, env);
      cxd acc(0.0, 0.0);
      for (int i = 0; i < m.dim(); ++i) {
        const cxd li = e->conj_left ? std::conj(e->left[i]) : e->left[i];
        for (int j = 0; j < m.dim(); ++j) acc += li * m(i, j) * e->right[j];
      }
      return acc;
    }
    case ScalarOp::Neg:
      return -eval_scalar(e->children[0], env);
    case ScalarOp::Mul: {
      cxd acc(1.0, 0.0);
      for (const auto& c : e->children) acc *= eval_scalar(c, env);
      return acc;
    }
    case ScalarOp::Add: {
      cxd acc(0.0, 0.0);
      for (const auto& c : e->children) acc += eval_scalar(c, env);
      return acc;
    }
  }
  throw EvalError("unknown scalar operation");
}

namespace {

void collect_params(const MatrixExpr& e, std::set<std::string>& out);

void collect_params(const ScalarExpr& e, std::set<std::string>& out) {
  if (e->op == ScalarOp::Param) out.insert(e->name);
  for (const auto& c : e->children) collect_params(c, out);
  if (e->arg) collect_params(e->arg, out);
}

void collect_params(const MatrixExpr& e, std::set<std::string>& out) {
  if (e->scale) collect_params(e->scale, out);
  for (const auto& c : e->children) collect_params(c, out);
}

}  // namespace

std::set<std::string> parameter_names(const ScalarExpr& e) {
  std::set<std::string> out;
  collect_params(e, out);
  return out;
}

std::set<std::string> parameter_names(const MatrixExpr& e) {
  std::set<std::string> out;
  collect_params(e, out);
  return out;
}

void validate_env(const ScalarExpr& e, const EvalEnv& env) {
  for (const auto& [name, use] : free_vars(e)) {
    (void)use;
    auto it = env.bindings.find(name);
    if (it == env.bindings.end())
      throw EvalError("no binding for matrix variable '" + name + "'");
    const int want = var_dim(e, name);
    if (want != 0 && it->second.dim() != want)
      throw EvalError("variable '" + name + "' needs a " +
                      std::to_string(want) + "x" + std::to_string(want) +
                      " binding, got " + std::to_string(it->second.dim()) +
                      "x" + std::to_string(it->second.dim()));
  }
  for (const auto& name : parameter_names(e))
    if (env.params.find(name) == env.params.end())
      throw EvalError("no value for parameter '@" + name + "'");
}

}  // namespace wirt
