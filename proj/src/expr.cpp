#include "wirt/expr.hpp"

#include <algorithm>
#include <utility>

namespace wirt {
namespace {

MatrixExpr make(MatrixNode n) {
  return std::make_shared<const MatrixNode>(std::move(n));
}

ScalarExpr make(ScalarNode n) {
  return std::make_shared<const ScalarNode>(std::move(n));
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

int rank(MatrixOp op) {
  switch (op) {
    case MatrixOp::Const: return 0;
    case MatrixOp::Identity: return 1;
    case MatrixOp::Var: return 2;
    case MatrixOp::VarConj: return 3;
    case MatrixOp::Transpose: return 4;
    case MatrixOp::Add: return 5;
    case MatrixOp::ScalarMul: return 6;
    case MatrixOp::MatMul: return 7;
    case MatrixOp::Hadamard: return 8;
    case MatrixOp::MatPow: return 9;
    case MatrixOp::Apply: return 10;
    case MatrixOp::Conjugate: return 11;
    case MatrixOp::Adjoint: return 12;
  }
  return 13;
}

int rank(ScalarOp op) {
  switch (op) {
    case ScalarOp::Lit: return 0;
    case ScalarOp::Param: return 1;
    case ScalarOp::Trace: return 2;
    case ScalarOp::Det: return 3;
    case ScalarOp::Entry: return 4;
    case ScalarOp::Bilinear: return 5;
    case ScalarOp::Neg: return 6;
    case ScalarOp::Mul: return 7;
    case ScalarOp::Add: return 8;
  }
  return 9;
}

int cmp_double(double a, double b) {
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

int cmp_cxd(cxd a, cxd b) {
  if (int c = cmp_double(a.real(), b.real())) return c;
  return cmp_double(a.imag(), b.imag());
}

int cmp_cxd_vec(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = cmp_cxd(a[i], b[i])) return c;
  return 0;
}

int cmp_func(const AnalyticFunction& a, const AnalyticFunction& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (a.exponent != b.exponent) return a.exponent < b.exponent ? -1 : 1;
  return cmp_cxd_vec(a.coefficients, b.coefficients);
}

int cmp_matrix_value(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (int c = cmp_cxd(a(i, j), b(i, j))) return c;
  return 0;
}

}  // namespace

AnalyticFunction AnalyticFunction::series(std::vector<cxd> coeffs) {
  if (coeffs.empty())
    throw ShapeError("series requires at least one coefficient");
  return {FuncKind::Series, 0, std::move(coeffs)};
}

MatrixExpr m_const(const ComplexMatrix& value) {
  MatrixNode n{};
  n.op = MatrixOp::Const;
  n.dim = value.dim();
  n.value = std::make_shared<const ComplexMatrix>(value);
  return make(std::move(n));
}

MatrixExpr m_identity(int n) {
  MatrixNode node{};
  node.op = MatrixOp::Identity;
  node.dim = ComplexMatrix(n).dim();  // validates the range
  return make(std::move(node));
}

MatrixExpr m_zero(int n) { return m_const(ComplexMatrix::zero(n)); }

MatrixExpr m_var(const std::string& name, int n) {
  require(!name.empty(), "variable name must be non-empty");
  MatrixNode node{};
  node.op = MatrixOp::Var;
  node.dim = ComplexMatrix(n).dim();
  node.name = name;
  return make(std::move(node));
}

MatrixExpr m_var(const VariableDecl& decl) { return m_var(decl.name, decl.dim); }

MatrixExpr m_var_conj(const std::string& name, int n) {
  require(!name.empty(), "variable name must be non-empty");
  MatrixNode node{};
  node.op = MatrixOp::VarConj;
  node.dim = ComplexMatrix(n).dim();
  node.name = name;
  return make(std::move(node));
}

namespace {

MatrixExpr unary(MatrixOp op, const MatrixExpr& m) {
  MatrixNode node{};
  node.op = op;
  node.dim = m->dim;
  node.children = {m};
  return make(std::move(node));
}

}  // namespace

MatrixExpr m_transpose(const MatrixExpr& m) {
  return unary(MatrixOp::Transpose, m);
}
MatrixExpr m_conj(const MatrixExpr& m) { return unary(MatrixOp::Conjugate, m); }
MatrixExpr m_adjoint(const MatrixExpr& m) { return unary(MatrixOp::Adjoint, m); }

MatrixExpr m_add(std::vector<MatrixExpr> terms) {
  require(!terms.empty(), "sum of no matrices");
  for (const auto& t : terms)
    require(t->dim == terms[0]->dim, "sum of matrices of different dimension");
  if (terms.size() == 1) return terms[0];
  MatrixNode node{};
  node.op = MatrixOp::Add;
  node.dim = terms[0]->dim;
  node.children = std::move(terms);
  return make(std::move(node));
}

MatrixExpr m_add(const MatrixExpr& a, const MatrixExpr& b) {
  return m_add(std::vector<MatrixExpr>{a, b});
}

MatrixExpr m_neg(const MatrixExpr& m) { return m_smul(s_lit(-1.0), m); }

MatrixExpr m_sub(const MatrixExpr& a, const MatrixExpr& b) {
  return m_add(a, m_neg(b));
}

MatrixExpr m_smul(const ScalarExpr& s, const MatrixExpr& m) {
  MatrixNode node{};
  node.op = MatrixOp::ScalarMul;
  node.dim = m->dim;
  node.children = {m};
  node.scale = s;
  return make(std::move(node));
}

MatrixExpr m_mul(std::vector<MatrixExpr> factors) {
  require(!factors.empty(), "product of no matrices");
  for (const auto& f : factors)
    require(f->dim == factors[0]->dim,
            "product of matrices of different dimension");
  if (factors.size() == 1) return factors[0];
  MatrixNode node{};
  node.op = MatrixOp::MatMul;
  node.dim = factors[0]->dim;
  node.children = std::move(factors);
  return make(std::move(node));
}

MatrixExpr m_mul(const MatrixExpr& a, const MatrixExpr& b) {
  return m_mul(std::vector<MatrixExpr>{a, b});
}

MatrixExpr m_hadamard(const MatrixExpr& a, const MatrixExpr& b) {
  require(a->dim == b->dim, "hadamard of matrices of different dimension");
  MatrixNode node{};
  node.op = MatrixOp::Hadamard;
  node.dim = a->dim;
  node.children = {a, b};
  return make(std::move(node));
}

MatrixExpr m_pow(const MatrixExpr& m, int k) {
  require(k >= 0, "matrix power expects a non-negative exponent");
  MatrixNode node{};
  node.op = MatrixOp::MatPow;
  node.dim = m->dim;
  node.children = {m};
  node.exponent = k;
  return make(std::move(node));
}

MatrixExpr m_apply(const AnalyticFunction& f, const MatrixExpr& m) {
  if (f.kind == FuncKind::Series)
    require(!f.coefficients.empty(), "series requires at least one coefficient");
  MatrixNode node{};
  node.op = MatrixOp::Apply;
  node.dim = m->dim;
  node.children = {m};
  node.func = f;
  return make(std::move(node));
}

MatrixExpr m_inverse(const MatrixExpr& m) {
  return m_apply(AnalyticFunction::power(-1), m);
}

ScalarExpr s_lit(cxd v) {
  ScalarNode node{};
  node.op = ScalarOp::Lit;
  node.lit = v;
  return make(std::move(node));
}

ScalarExpr s_lit(double v) { return s_lit(cxd(v, 0.0)); }

ScalarExpr s_param(const std::string& name) {
  if (name.empty()) throw ShapeError("parameter name must be non-empty");
  ScalarNode node{};
  node.op = ScalarOp::Param;
  node.name = name;
  return make(std::move(node));
}

ScalarExpr s_trace(const MatrixExpr& m) {
  ScalarNode node{};
  node.op = ScalarOp::Trace;
  node.arg = m;
  return make(std::move(node));
}

ScalarExpr s_det(const MatrixExpr& m) {
  ScalarNode node{};
  node.op = ScalarOp::Det;
  node.arg = m;
  return make(std::move(node));
}

ScalarExpr s_entry(const MatrixExpr& m, int row, int col) {
  if (row < 0 || row >= m->dim || col < 0 || col >= m->dim)
    throw ShapeError("entry index out of range");
  ScalarNode node{};
  node.op = ScalarOp::Entry;
  node.arg = m;
  node.row = row;
  node.col = col;
  return make(std::move(node));
}

ScalarExpr s_bilinear(const std::vector<cxd>& left, const MatrixExpr& m,
                      const std::vector<cxd>& right, bool conj_left) {
  if (static_cast<int>(left.size()) != m->dim ||
      static_cast<int>(right.size()) != m->dim)
    throw ShapeError("bilinear vectors must match the matrix dimension");
  ScalarNode node{};
  node.op = ScalarOp::Bilinear;
  node.arg = m;
  node.left = left;
  node.right = right;
  node.conj_left = conj_left;
  return make(std::move(node));
}

ScalarExpr s_neg(const ScalarExpr& s) {
  ScalarNode node{};
  node.op = ScalarOp::Neg;
  node.children = {s};
  return make(std::move(node));
}

ScalarExpr s_add(std::vector<ScalarExpr> terms) {
  if (terms.empty()) throw ShapeError("sum of no scalars");
  if (terms.size() == 1) return terms[0];
  ScalarNode node{};
  node.op = ScalarOp::Add;
  node.children = std::move(terms);
  return make(std::move(node));
}

ScalarExpr s_add(const ScalarExpr& a, const ScalarExpr& b) {
  return s_add(std::vector<ScalarExpr>{a, b});
}

ScalarExpr s_sub(const ScalarExpr& a, const ScalarExpr& b) {
  return s_add(a, s_neg(b));
}

ScalarExpr s_mul(std::vector<ScalarExpr> factors) {
  if (factors.empty()) throw ShapeError("product of no scalars");
  if (factors.size() == 1) return factors[0];
  ScalarNode node{};
  node.op = ScalarOp::Mul;
  node.children = std::move(factors);
  return make(std::move(node));
}

ScalarExpr s_mul(const ScalarExpr& a, const ScalarExpr& b) {
  return s_mul(std::vector<ScalarExpr>{a, b});
}

ScalarExpr frob2(const MatrixExpr& m) {
  return s_trace(m_mul(m_adjoint(m), m));
}

int compare(const MatrixExpr& a, const MatrixExpr& b) {
  if (a.get() == b.get()) return 0;
  if (rank(a->op) != rank(b->op)) return rank(a->op) < rank(b->op) ? -1 : 1;
  if (a->dim != b->dim) return a->dim < b->dim ? -1 : 1;
  switch (a->op) {
    case MatrixOp::Const:
      return cmp_matrix_value(*a->value, *b->value);
    case MatrixOp::Identity:
      return 0;
    case MatrixOp::Var:
    case MatrixOp::VarConj:
      return a->name.compare(b->name);
    case MatrixOp::ScalarMul:
      if (int c = compare(a->scale, b->scale)) return c;
      return compare(a->children[0], b->children[0]);
    case MatrixOp::MatPow:
      if (a->exponent != b->exponent)
        return a->exponent < b->exponent ? -1 : 1;
      return compare(a->children[0], b->children[0]);
    case MatrixOp::Apply:
      if (int c = cmp_func(a->func, b->func)) return c;
      return compare(a->children[0], b->children[0]);
    default:
      break;
  }
  if (a->children.size() != b->children.size())
    return a->children.size() < b->children.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (int c = compare(a->children[i], b->children[i])) return c;
  return 0;
}

int compare(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.get() == b.get()) return 0;
  if (rank(a->op) != rank(b->op)) return rank(a->op) < rank(b->op) ? -1 : 1;
  switch (a->op) {
    case ScalarOp::Lit:
      return cmp_cxd(a->lit, b->lit);
    case ScalarOp::Param:
      return a->name.compare(b->name);
    case ScalarOp::Trace:
    case ScalarOp::Det:
      return compare(a->arg, b->arg);
    case ScalarOp::Entry:
      if (a->row != b->row) return a->row < b->row ? -1 : 1;
      if (a->col != b->col) return a->col < b->col ? -1 : 1;
      return compare(a->arg, b->arg);
    case ScalarOp::Bilinear:
      if (a->conj_left != b->conj_left) return a->conj_left ? 1 : -1;
      if (int c = cmp_cxd_vec(a->left, b->left)) return c;
      if (int c = cmp_cxd_vec(a->right, b->right)) return c;
      return compare(a->arg, b->arg);
    default:
      break;
  }
  if (a->children.size() != b->children.size())
    return a->children.size() < b->children.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (int c = compare(a->children[i], b->children[i])) return c;
  return 0;
}

bool equal(const MatrixExpr& a, const MatrixExpr& b) {
  return compare(a, b) == 0;
}
bool equal(const ScalarExpr& a, const ScalarExpr& b) {
  return compare(a, b) == 0;
}

namespace {

void collect_vars(const MatrixExpr& e, bool conj_parity,
                  std::map<std::string, VarUse>& out) {
  switch (e->op) {
    case MatrixOp::Var:
      (conj_parity ? out[e->name].conjugated : out[e->name].plain) = true;
      return;
    case MatrixOp::VarConj:
      (conj_parity ? out[e->name].plain : out[e->name].conjugated) = true;
      return;
    case MatrixOp::Conjugate:
    case MatrixOp::Adjoint:
      collect_vars(e->children[0], !conj_parity, out);
      return;
    default:
      for (const auto& c : e->children) collect_vars(c, conj_parity, out);
      return;
  }
}

void collect_vars(const ScalarExpr& e, bool conj_parity,
                  std::map<std::string, VarUse>& out) {
  if (e->arg) collect_vars(e->arg, conj_parity, out);
  for (const auto& c : e->children) collect_vars(c, conj_parity, out);
}

void collect_dim(const MatrixExpr& e, const std::string& name, int& dim) {
  if ((e->op == MatrixOp::Var || e->op == MatrixOp::VarConj) &&
      e->name == name) {
    dim = e->dim;
    return;
  }
  for (const auto& c : e->children) collect_dim(c, name, dim);
}

void collect_dim(const ScalarExpr& e, const std::string& name, int& dim) {
  if (e->arg) collect_dim(e->arg, name, dim);
  for (const auto& c : e->children) collect_dim(c, name, dim);
}

}  // namespace

std::map<std::string, VarUse> free_vars(const ScalarExpr& e) {
  std::map<std::string, VarUse> out;
  collect_vars(e, false, out);
  return out;
}

std::map<std::string, VarUse> free_vars(const MatrixExpr& e) {
  std::map<std::string, VarUse> out;
  collect_vars(e, false, out);
  return out;
}

int var_dim(const ScalarExpr& e, const std::string& name) {
  int dim = 0;
  collect_dim(e, name, dim);
  return dim;
}

MatrixExpr substitute(const MatrixExpr& e,
                      const std::map<std::string, MatrixExpr>& repl) {
  if (e->op == MatrixOp::Var || e->op == MatrixOp::VarConj) {
    const auto it = repl.find(e->name);
    if (it == repl.end()) return e;
    require(it->second->dim == e->dim,
            "substitution changes the dimension of " + e->name);
    return e->op == MatrixOp::Var ? it->second : m_conj(it->second);
  }
  MatrixNode node = *e;
  for (auto& c : node.children) c = substitute(c, repl);
  if (node.scale) node.scale = substitute(node.scale, repl);
  return make(std::move(node));
}

ScalarExpr substitute(const ScalarExpr& e,
                      const std::map<std::string, MatrixExpr>& repl) {
  ScalarNode node = *e;
  if (node.arg) node.arg = substitute(node.arg, repl);
  for (auto& c : node.children) c = substitute(c, repl);
  return make(std::move(node));
}

MatrixExpr substitute_params(const MatrixExpr& e,
                             const std::map<std::string, double>& values) {
  MatrixNode node = *e;
  for (auto& c : node.children) c = substitute_params(c, values);
  if (node.scale) node.scale = substitute_params(node.scale, values);
  return make(std::move(node));
}

ScalarExpr substitute_params(const ScalarExpr& e,
                             const std::map<std::string, double>& values) {
  if (e->op == ScalarOp::Param) {
    const auto it = values.find(e->name);
    if (it == values.end()) return e;
    return s_lit(it->second);
  }
  ScalarNode node = *e;
  if (node.arg) node.arg = substitute_params(node.arg, values);
  for (auto& c : node.children) c = substitute_params(c, values);
  return make(std::move(node));
}

ScalarExpr sconj(const ScalarExpr& e) {
  switch (e->op) {
    case ScalarOp::Lit:
      return s_lit(std::conj(e->lit));
    case ScalarOp::Param:
      return e;  // parameters are real
    case ScalarOp::Trace:
      return s_trace(m_conj(e->arg));
    case ScalarOp::Det:
      return s_det(m_conj(e->arg));
    case ScalarOp::Entry:
      return s_entry(m_conj(e->arg), e->row, e->col);
    case ScalarOp::Bilinear: {
      // conj(sum l_i M_ij r_j) flips which side carries the conjugation.
      std::vector<cxd> right = e->right;
      for (auto& v : right) v = std::conj(v);
      return s_bilinear(e->left, m_conj(e->arg), right, !e->conj_left);
    }
    case ScalarOp::Neg:
      return s_neg(sconj(e->children[0]));
    case ScalarOp::Mul:
    case ScalarOp::Add: {
      std::vector<ScalarExpr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) kids.push_back(sconj(c));
      return e->op == ScalarOp::Mul ? s_mul(std::move(kids))
                                    : s_add(std::move(kids));
    }
  }
  throw ShapeError("sconj: unhandled scalar node");
}

bool is_zero(const MatrixExpr& e) {
  if (e->op != MatrixOp::Const) return false;
  const ComplexMatrix& v = *e->value;
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j)
      if (v(i, j) != cxd(0.0)) return false;
  return true;
}

bool is_zero(const ScalarExpr& e) {
  return e->op == ScalarOp::Lit && e->lit == cxd(0.0);
}

}  // namespace wirt
