// Canonical form, produced exclusively through the c_* constructors below so
// every rule is re-applied wherever a node is rebuilt. Invariants of the
// canonical form:
//   - no Adjoint or Conjugate nodes; conjugation lives in VarConj leaves and
//     Const values, Transpose only wraps Var/VarConj leaves
//   - Add/Mul/MatMul are flattened; Add and scalar Mul children are sorted,
//     equal Add terms are collapsed into counted multiples
//   - literal and constant-matrix arithmetic is folded; zero and identity
//     elements are simplified away
//   - fixed matrix values take one shape each: the zero Const, Identity,
//     lit*Identity, or a general Const free of negative zeros
//   - MatMul children carry no ScalarMul (scales hoist out) and no Identity
//   - traces distribute over sums, hoist scales, and fix one cyclic rotation
//   - det distributes over products and powers and hoists scales as s^n
//   - analytic functions of scaled identities fold to literals; log and
//     negative powers of the exact zero matrix are rejected (EvalError)
//   - tr(M log M) products fuse into the XLogX kernel
// canonicalize is idempotent; tests assert this over generated expressions.

#include <algorithm>
#include <utility>

#include "wirt/expr.hpp"
#include "wirt/linalg.hpp"

namespace wirt {
namespace {

MatrixExpr canon_m(const MatrixExpr& e);
ScalarExpr canon_s(const ScalarExpr& e);
MatrixExpr t_push(const MatrixExpr& m);
MatrixExpr conj_push(const MatrixExpr& m);
ScalarExpr conj_push_s(const ScalarExpr& s);

ScalarExpr c_add(std::vector<ScalarExpr> terms);
ScalarExpr c_mul(std::vector<ScalarExpr> factors);
ScalarExpr c_trace(const MatrixExpr& m);
ScalarExpr c_det(const MatrixExpr& m);
ScalarExpr c_entry(const MatrixExpr& m, int i, int j);
MatrixExpr c_madd(std::vector<MatrixExpr> terms);
MatrixExpr c_smul(const ScalarExpr& s, const MatrixExpr& m);
MatrixExpr c_mmul(std::vector<MatrixExpr> factors);
MatrixExpr c_hadamard(MatrixExpr a, MatrixExpr b);
MatrixExpr c_mpow(const MatrixExpr& m, int k);
MatrixExpr c_apply(const AnalyticFunction& f, const MatrixExpr& m);

bool is_lit(const ScalarExpr& s) { return s->op == ScalarOp::Lit; }

bool is_lit_one(const ScalarExpr& s) {
  return is_lit(s) && s->lit == cxd(1.0);
}

cxd norm_zero(cxd v) {
  // Collapse -0.0 so folding cannot produce distinct-looking zeros.
  double re = v.real() == 0.0 ? 0.0 : v.real();
  double im = v.imag() == 0.0 ? 0.0 : v.imag();
  return {re, im};
}

// Numeric Add terms: anything whose value is a fixed matrix.
bool is_numeric_term(const MatrixExpr& m) {
  if (m->op == MatrixOp::Const || m->op == MatrixOp::Identity) return true;
  return m->op == MatrixOp::ScalarMul && is_lit(m->scale) &&
         m->children[0]->op == MatrixOp::Identity;
}

ComplexMatrix numeric_value(const MatrixExpr& m) {
  if (m->op == MatrixOp::Const) return *m->value;
  if (m->op == MatrixOp::Identity) return ComplexMatrix::identity(m->dim);
  return ComplexMatrix::scaled_identity(m->dim, m->scale->lit);
}

// Canonical shape of a fixed matrix value: the zero Const, Identity,
// s*Identity, or a Const with no negative zeros. Keeping scaled identities
// out of Const nodes means numeric simplifications always meet the same
// representative.
MatrixExpr norm_const(const ComplexMatrix& v) {
  const int n = v.dim();
  cxd s = v(0, 0);
  bool scaled_identity = true;
  for (int i = 0; i < n && scaled_identity; ++i)
    for (int j = 0; j < n; ++j)
      if (v(i, j) != (i == j ? s : cxd(0.0))) {
        scaled_identity = false;
        break;
      }
  if (scaled_identity) {
    if (s == cxd(0.0)) return m_const(ComplexMatrix(n));
    if (s == cxd(1.0)) return m_identity(n);
    return m_smul(s_lit(norm_zero(s)), m_identity(n));
  }
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.set(i, j, norm_zero(v(i, j)));
  return m_const(out);
}

// Identity counts as 1; ScalarMul(lit, Identity) yields its literal.
bool scaled_identity_term(const MatrixExpr& m, cxd& s) {
  if (m->op == MatrixOp::Identity) {
    s = 1.0;
    return true;
  }
  if (m->op == MatrixOp::ScalarMul && is_lit(m->scale) &&
      m->children[0]->op == MatrixOp::Identity) {
    s = m->scale->lit;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------- scalars

ScalarExpr c_add(std::vector<ScalarExpr> terms) {
  std::vector<ScalarExpr> flat;
  cxd lit_sum = 0.0;
  for (auto& t : terms) {
    if (t->op == ScalarOp::Add) {
      for (const auto& c : t->children) {
        if (is_lit(c))
          lit_sum += c->lit;
        else
          flat.push_back(c);
      }
    } else if (is_lit(t)) {
      lit_sum += t->lit;
    } else {
      flat.push_back(std::move(t));
    }
  }
  // Group like terms: each term is a literal coefficient times a core, and
  // cores that match sum their coefficients (so X - X cancels).
  struct Group {
    ScalarExpr core;
    cxd coeff;
  };
  std::vector<Group> groups;
  for (const auto& t : flat) {
    cxd coeff = 1.0;
    ScalarExpr core = t;
    if (t->op == ScalarOp::Mul && is_lit(t->children[0])) {
      coeff = t->children[0]->lit;
      std::vector<ScalarExpr> rest(t->children.begin() + 1,
                                   t->children.end());
      core = rest.size() == 1 ? rest[0] : s_mul(std::move(rest));
    }
    bool found = false;
    for (auto& g : groups) {
      if (equal(g.core, core)) {
        g.coeff += coeff;
        found = true;
        break;
      }
    }
    if (!found) groups.push_back({core, coeff});
  }

  std::vector<ScalarExpr> combined;
  for (auto& g : groups) {
    const cxd c = norm_zero(g.coeff);
    if (c == cxd(0.0)) continue;
    combined.push_back(c == cxd(1.0) ? g.core : c_mul({s_lit(c), g.core}));
  }
  if (lit_sum != cxd(0.0)) combined.push_back(s_lit(norm_zero(lit_sum)));
  std::sort(combined.begin(), combined.end(),
            [](const ScalarExpr& a, const ScalarExpr& b) {
              return compare(a, b) < 0;
            });
  if (combined.empty()) return s_lit(0.0);
  if (combined.size() == 1) return combined[0];
  return s_add(std::move(combined));
}

ScalarExpr c_mul(std::vector<ScalarExpr> factors) {
  std::vector<ScalarExpr> flat;
  cxd lit_prod = 1.0;
  for (auto& f : factors) {
    if (f->op == ScalarOp::Mul) {
      for (const auto& c : f->children) {
        if (is_lit(c))
          lit_prod *= c->lit;
        else
          flat.push_back(c);
      }
    } else if (is_lit(f)) {
      lit_prod *= f->lit;
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (lit_prod == cxd(0.0)) return s_lit(0.0);
  std::sort(flat.begin(), flat.end(),
            [](const ScalarExpr& a, const ScalarExpr& b) {
              return compare(a, b) < 0;
            });
  if (lit_prod != cxd(1.0))
    flat.insert(flat.begin(), s_lit(norm_zero(lit_prod)));
  if (flat.empty()) return s_lit(1.0);
  if (flat.size() == 1) return flat[0];
  return s_mul(std::move(flat));
}

ScalarExpr c_trace_product(std::vector<MatrixExpr> kids) {
  // tr(M log M) and tr(log(M) M) collapse to the entropy kernel. This runs
  // before distribution so a sum argument stays fused.
  if (kids.size() == 2) {
    for (int a = 0; a < 2; ++a) {
      const MatrixExpr& x = kids[a];
      const MatrixExpr& y = kids[1 - a];
      if (y->op == MatrixOp::Apply && y->func.kind == FuncKind::Log &&
          equal(y->children[0], x)) {
        return c_trace(c_apply(AnalyticFunction::xlogx(), x));
      }
    }
  }

  // Trace is linear: distribute over sum factors, and open up positive
  // powers of sums so their cross terms distribute too.
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (kids[i]->op == MatrixOp::Add) {
      std::vector<ScalarExpr> terms;
      terms.reserve(kids[i]->children.size());
      for (const auto& t : kids[i]->children) {
        std::vector<MatrixExpr> sub = kids;
        sub[i] = t;
        terms.push_back(c_trace(c_mmul(std::move(sub))));
      }
      return c_add(std::move(terms));
    }
    if (kids[i]->op == MatrixOp::MatPow &&
        kids[i]->children[0]->op == MatrixOp::Add) {
      std::vector<MatrixExpr> sub(kids.begin(), kids.begin() + i);
      for (int r = 0; r < kids[i]->exponent; ++r)
        sub.push_back(kids[i]->children[0]);
      sub.insert(sub.end(), kids.begin() + i + 1, kids.end());
      return c_trace_product(std::move(sub));
    }
  }

  // tr is invariant under cyclic rotation and under transposing the whole
  // product (which reverses and transposes the factors); fix the
  // lexicographically smallest sequence over both orbits.
  std::vector<MatrixExpr> tkids;
  tkids.reserve(kids.size());
  for (auto it = kids.rbegin(); it != kids.rend(); ++it)
    tkids.push_back(t_push(*it));
  std::vector<MatrixExpr> best = kids;
  const auto consider = [&best](const std::vector<MatrixExpr>& seq,
                                std::size_t r) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const int c = compare(seq[(r + i) % seq.size()], best[i]);
      if (c != 0) {
        if (c < 0) {
          std::vector<MatrixExpr> rot;
          rot.reserve(seq.size());
          for (std::size_t j = 0; j < seq.size(); ++j)
            rot.push_back(seq[(r + j) % seq.size()]);
          best = std::move(rot);
        }
        return;
      }
    }
  };
  for (std::size_t r = 1; r < kids.size(); ++r) consider(kids, r);
  for (std::size_t r = 0; r < tkids.size(); ++r) consider(tkids, r);

  // Rotation can bring constants adjacent; rebuild and restart if the
  // product simplified, so the stored form is a fixed point.
  const std::size_t arity = kids.size();
  const MatrixExpr rebuilt = c_mmul(std::move(best));
  if (rebuilt->op == MatrixOp::MatMul && rebuilt->children.size() == arity)
    return s_trace(rebuilt);
  return c_trace(rebuilt);
}

ScalarExpr c_trace(const MatrixExpr& m) {
  switch (m->op) {
    case MatrixOp::Const:
      return s_lit(norm_zero(m->value->trace()));
    case MatrixOp::Identity:
      return s_lit(static_cast<double>(m->dim));
    case MatrixOp::Add: {
      std::vector<ScalarExpr> traced;
      traced.reserve(m->children.size());
      for (const auto& c : m->children) traced.push_back(c_trace(c));
      return c_add(std::move(traced));
    }
    case MatrixOp::ScalarMul:
      return c_mul({m->scale, c_trace(m->children[0])});
    case MatrixOp::Transpose:
      return c_trace(m->children[0]);
    case MatrixOp::MatMul:
      return c_trace_product(m->children);
    case MatrixOp::MatPow:
      if (m->children[0]->op == MatrixOp::Add) {
        std::vector<MatrixExpr> copies(
            static_cast<std::size_t>(m->exponent), m->children[0]);
        return c_trace_product(std::move(copies));
      }
      break;
    default:
      break;
  }
  // tr(M) = tr(M^T) for a lone factor as well.
  const MatrixExpr flip = t_push(m);
  if (compare(flip, m) < 0) return c_trace(flip);
  return s_trace(m);
}

ScalarExpr c_det(const MatrixExpr& m) {
  switch (m->op) {
    case MatrixOp::Const:
      return s_lit(norm_zero(det(*m->value)));
    case MatrixOp::Identity:
      return s_lit(1.0);
    case MatrixOp::Transpose:
      return c_det(m->children[0]);
    case MatrixOp::ScalarMul: {
      // det(s M) = s^n det(M)
      std::vector<ScalarExpr> parts(static_cast<std::size_t>(m->dim),
                                    m->scale);
      parts.push_back(c_det(m->children[0]));
      return c_mul(std::move(parts));
    }
    case MatrixOp::MatMul: {
      std::vector<ScalarExpr> parts;
      parts.reserve(m->children.size());
      for (const auto& c : m->children) parts.push_back(c_det(c));
      return c_mul(std::move(parts));
    }
    case MatrixOp::MatPow: {
      std::vector<ScalarExpr> parts(static_cast<std::size_t>(m->exponent),
                                    c_det(m->children[0]));
      return c_mul(std::move(parts));
    }
    default:
      return s_det(m);
  }
}

ScalarExpr c_entry(const MatrixExpr& m, int i, int j) {
  switch (m->op) {
    case MatrixOp::Const:
      return s_lit(norm_zero((*m->value)(i, j)));
    case MatrixOp::Identity:
      return s_lit(i == j ? 1.0 : 0.0);
    case MatrixOp::Add: {
      std::vector<ScalarExpr> parts;
      parts.reserve(m->children.size());
      for (const auto& c : m->children) parts.push_back(c_entry(c, i, j));
      return c_add(std::move(parts));
    }
    case MatrixOp::ScalarMul:
      return c_mul({m->scale, c_entry(m->children[0], i, j)});
    case MatrixOp::Transpose:
      return c_entry(m->children[0], j, i);
    default:
      return s_entry(m, i, j);
  }
}

// --------------------------------------------------------------- matrices

MatrixExpr c_madd(std::vector<MatrixExpr> terms) {
  const int dim = terms.at(0)->dim;
  std::vector<MatrixExpr> flat;
  for (auto& t : terms) {
    if (t->op == MatrixOp::Add)
      for (const auto& c : t->children) flat.push_back(c);
    else
      flat.push_back(std::move(t));
  }

  // Fold every fixed-value term into one constant.
  ComplexMatrix acc(dim);
  int numeric_count = 0;
  MatrixExpr lone_numeric;
  std::vector<MatrixExpr> parts;
  for (const auto& t : flat) {
    if (is_numeric_term(t)) {
      if (!is_zero(t)) {
        acc = acc + numeric_value(t);
        lone_numeric = t;
        ++numeric_count;
      }
    } else {
      parts.push_back(t);
    }
  }
  // A single non-zero numeric term keeps its shape (Identity stays legible);
  // several are summed into one value, which may cancel away entirely.
  if (numeric_count == 1) {
    parts.push_back(lone_numeric);
  } else if (numeric_count > 1) {
    MatrixExpr folded = norm_const(acc);
    if (!is_zero(folded)) parts.push_back(std::move(folded));
  }

  // Group like terms by their scale-stripped core and sum the scales, so
  // Z - Z cancels and a*I + b*I refolds into (a + b)*I no matter how the
  // pieces arrived.
  struct Group {
    MatrixExpr core;
    std::vector<ScalarExpr> scales;
  };
  std::vector<Group> groups;
  for (const auto& t : parts) {
    ScalarExpr s = s_lit(1.0);
    MatrixExpr core = t;
    if (t->op == MatrixOp::ScalarMul) {
      s = t->scale;
      core = t->children[0];
    }
    bool found = false;
    for (auto& g : groups) {
      if (equal(g.core, core)) {
        g.scales.push_back(s);
        found = true;
        break;
      }
    }
    if (!found) groups.push_back({core, {s}});
  }

  std::vector<MatrixExpr> combined;
  int numeric_out = 0;
  for (auto& g : groups) {
    MatrixExpr term = c_smul(c_add(std::move(g.scales)), g.core);
    if (is_zero(term)) continue;
    if (is_numeric_term(term)) ++numeric_out;
    combined.push_back(std::move(term));
  }
  // Scale sums can fold symbolic terms back into fixed values; refold so a
  // single numeric child remains.
  if (numeric_out > 1) return c_madd(std::move(combined));

  std::sort(combined.begin(), combined.end(),
            [](const MatrixExpr& a, const MatrixExpr& b) {
              return compare(a, b) < 0;
            });
  if (combined.empty()) return m_zero(dim);
  if (combined.size() == 1) return combined[0];
  return m_add(std::move(combined));
}

MatrixExpr c_smul(const ScalarExpr& s, const MatrixExpr& m) {
  if (is_zero(s)) return m_zero(m->dim);
  if (is_lit_one(s)) return m;
  if (is_zero(m)) return m;
  if (m->op == MatrixOp::ScalarMul)
    return c_smul(c_mul({s, m->scale}), m->children[0]);
  if (m->op == MatrixOp::Add) {
    // Scales distribute over sums so like terms regroup in one flat Add.
    std::vector<MatrixExpr> terms;
    for (const auto& c : m->children) terms.push_back(c_smul(s, c));
    return c_madd(std::move(terms));
  }
  if (is_lit(s) && m->op == MatrixOp::Const)
    return norm_const(m->value->scaled(s->lit));
  return m_smul(s, m);
}

MatrixExpr c_mmul(std::vector<MatrixExpr> factors) {
  const int dim = factors.at(0)->dim;
  std::vector<ScalarExpr> scales;
  std::vector<MatrixExpr> flat;
  std::vector<MatrixExpr> queue(factors.rbegin(), factors.rend());
  while (!queue.empty()) {
    MatrixExpr f = queue.back();
    queue.pop_back();
    if (f->op == MatrixOp::ScalarMul) {
      scales.push_back(f->scale);
      queue.push_back(f->children[0]);
    } else if (f->op == MatrixOp::MatMul) {
      for (auto it = f->children.rbegin(); it != f->children.rend(); ++it)
        queue.push_back(*it);
    } else {
      flat.push_back(std::move(f));
    }
  }

  // A factor as base and signed exponent; plain factors count as power one.
  const auto base_exp = [](const MatrixExpr& x, int& e) -> MatrixExpr {
    if (x->op == MatrixOp::MatPow) {
      e = x->exponent;
      return x->children[0];
    }
    if (x->op == MatrixOp::Apply && x->func.kind == FuncKind::Power) {
      e = x->func.exponent;
      return x->children[0];
    }
    e = 1;
    return x;
  };

  MatrixExpr result;
  for (const auto& f : flat)
    if (is_zero(f)) result = m_zero(dim);
  if (!result) {
    std::vector<MatrixExpr> kept;
    bool rerun = false;
    for (auto& f : flat) {
      if (f->op == MatrixOp::Identity) continue;
      // Merge adjacent fixed matrices. A merge can collapse to a scaled
      // identity, which belongs in the scale; rebuild once below.
      if (!kept.empty() && kept.back()->op == MatrixOp::Const &&
          f->op == MatrixOp::Const) {
        kept.back() = norm_const(*kept.back()->value * *f->value);
        if (kept.back()->op != MatrixOp::Const) rerun = true;
        continue;
      }
      // Merge adjacent powers of one base (Z*Z^2 = Z^3, Z*Z^-1 = I). Sums
      // stay unmerged at exponents two and up: the trace rules expand
      // products over sums, and a power would hide the factors again.
      if (!kept.empty()) {
        int e1 = 0, e2 = 0;
        const MatrixExpr b1 = base_exp(kept.back(), e1);
        const MatrixExpr b2 = base_exp(f, e2);
        const int net = e1 + e2;
        if (equal(b1, b2) && !(b1->op == MatrixOp::Add && net >= 2)) {
          kept.pop_back();
          if (net != 0) {
            MatrixExpr merged =
                net > 0 ? c_mpow(b1, net)
                        : c_apply(AnalyticFunction::power(net), b1);
            if (merged->op == MatrixOp::ScalarMul ||
                merged->op == MatrixOp::MatMul || is_numeric_term(merged))
              rerun = true;
            kept.push_back(std::move(merged));
          }
          continue;
        }
      }
      kept.push_back(std::move(f));
    }
    if (rerun)
      result = c_mmul(std::move(kept));
    else if (kept.empty())
      result = m_identity(dim);
    else if (kept.size() == 1)
      result = kept[0];
    else
      result = m_mul(std::move(kept));
  }

  if (scales.empty()) return result;
  return c_smul(c_mul(std::move(scales)), result);
}

MatrixExpr c_hadamard(MatrixExpr a, MatrixExpr b) {
  if (is_zero(a) || is_zero(b)) return m_zero(a->dim);
  if (a->op == MatrixOp::ScalarMul)
    return c_smul(a->scale, c_hadamard(a->children[0], b));
  if (b->op == MatrixOp::ScalarMul)
    return c_smul(b->scale, c_hadamard(a, b->children[0]));
  if (a->op == MatrixOp::Const && b->op == MatrixOp::Const)
    return norm_const(a->value->hadamard(*b->value));
  for (int swap = 0; swap < 2; ++swap) {
    if (a->op == MatrixOp::Identity) {
      if (b->op == MatrixOp::Identity) return a;
      // Only the diagonal survives, and diag(M^T) = diag(M).
      if (b->op == MatrixOp::Transpose) return c_hadamard(a, b->children[0]);
      if (b->op == MatrixOp::Const)
        return norm_const(
            ComplexMatrix::identity(a->dim).hadamard(*b->value));
    }
    std::swap(a, b);
  }
  if (compare(a, b) > 0) std::swap(a, b);
  return m_hadamard(a, b);
}

MatrixExpr c_mpow(const MatrixExpr& m, int k) {
  if (k == 0) return m_identity(m->dim);
  if (k == 1) return m;
  if (m->op == MatrixOp::Identity || is_zero(m)) return m;
  if (m->op == MatrixOp::Const) return norm_const(m->value->pow(k));
  if (m->op == MatrixOp::ScalarMul) {
    std::vector<ScalarExpr> reps(static_cast<std::size_t>(k), m->scale);
    return c_smul(c_mul(std::move(reps)), c_mpow(m->children[0], k));
  }
  if (m->op == MatrixOp::MatPow)
    return c_mpow(m->children[0], m->exponent * k);
  if (m->op == MatrixOp::Apply && m->func.kind == FuncKind::Power)
    return c_apply(AnalyticFunction::power(m->func.exponent * k),
                   m->children[0]);
  return m_pow(m, k);
}

MatrixExpr c_apply(const AnalyticFunction& f, const MatrixExpr& m) {
  cxd s;
  switch (f.kind) {
    case FuncKind::Power: {
      const int k = f.exponent;
      if (k >= 0) return c_mpow(m, k);
      if (m->op == MatrixOp::Identity) return m;
      if (is_zero(m))
        throw EvalError("negative power of the zero matrix");
      if (m->op == MatrixOp::ScalarMul && is_lit(m->scale)) {
        // (s M)^k = s^k M^k; the literal reciprocal keeps scaled
        // identities foldable.
        cxd p = 1.0;
        for (int i = 0; i < -k; ++i) p *= m->scale->lit;
        return c_smul(s_lit(norm_zero(1.0 / p)),
                      c_apply(f, m->children[0]));
      }
      if (m->op == MatrixOp::MatPow)
        return c_apply(AnalyticFunction::power(k * m->exponent),
                       m->children[0]);
      if (m->op == MatrixOp::Apply && m->func.kind == FuncKind::Power)
        return c_apply(AnalyticFunction::power(k * m->func.exponent),
                       m->children[0]);
      return m_apply(f, m);
    }
    case FuncKind::Series: {
      // A finite polynomial expands to its explicit sum, so Series never
      // survives canonicalization and every canonical form stays printable
      // in the surface language.
      std::vector<cxd> coeffs = f.coefficients;
      while (!coeffs.empty() && coeffs.back() == cxd(0.0)) coeffs.pop_back();
      std::vector<MatrixExpr> terms;
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == cxd(0.0)) continue;
        terms.push_back(
            c_smul(s_lit(norm_zero(coeffs[k])),
                   k == 0 ? m_identity(m->dim) : c_mpow(m, int(k))));
      }
      if (terms.empty()) return m_zero(m->dim);
      return c_madd(std::move(terms));
    }
    case FuncKind::Exp:
      if (is_zero(m)) return m_identity(m->dim);
      if (scaled_identity_term(m, s))
        return c_smul(s_lit(norm_zero(std::exp(s))), m_identity(m->dim));
      return m_apply(f, m);
    case FuncKind::Log:
      if (m->op == MatrixOp::Identity) return m_zero(m->dim);
      if (is_zero(m)) throw EvalError("logarithm of the zero matrix");
      if (scaled_identity_term(m, s))
        return c_smul(s_lit(norm_zero(std::log(s))), m_identity(m->dim));
      return m_apply(f, m);
    case FuncKind::XLogX:
      if (m->op == MatrixOp::Identity || is_zero(m)) return m_zero(m->dim);
      if (scaled_identity_term(m, s))
        return c_smul(s_lit(norm_zero(s * std::log(s))),
                      m_identity(m->dim));
      return m_apply(f, m);
  }
  return m_apply(f, m);
}

// Transpose of a canonical expression, pushed to the leaves.
MatrixExpr t_push(const MatrixExpr& m) {
  switch (m->op) {
    case MatrixOp::Const:
      return norm_const(m->value->transpose());
    case MatrixOp::Identity:
      return m;
    case MatrixOp::Var:
    case MatrixOp::VarConj:
      return m_transpose(m);
    case MatrixOp::Transpose:
      return m->children[0];
    case MatrixOp::Add: {
      std::vector<MatrixExpr> kids;
      kids.reserve(m->children.size());
      for (const auto& c : m->children) kids.push_back(t_push(c));
      return c_madd(std::move(kids));
    }
    case MatrixOp::ScalarMul:
      return c_smul(m->scale, t_push(m->children[0]));
    case MatrixOp::MatMul: {
      std::vector<MatrixExpr> kids;
      kids.reserve(m->children.size());
      for (auto it = m->children.rbegin(); it != m->children.rend(); ++it)
        kids.push_back(t_push(*it));
      return c_mmul(std::move(kids));
    }
    case MatrixOp::Hadamard:
      return c_hadamard(t_push(m->children[0]), t_push(m->children[1]));
    case MatrixOp::MatPow:
      return c_mpow(t_push(m->children[0]), m->exponent);
    case MatrixOp::Apply:
      return c_apply(m->func, t_push(m->children[0]));
    case MatrixOp::Conjugate:
    case MatrixOp::Adjoint:
      break;
  }
  throw ShapeError("transpose push on a non-canonical node");
}

AnalyticFunction conj_func(const AnalyticFunction& f) {
  if (f.kind != FuncKind::Series) return f;
  std::vector<cxd> coeffs = f.coefficients;
  for (auto& c : coeffs) c = std::conj(c);
  return AnalyticFunction::series(std::move(coeffs));
}

// Entrywise conjugate of a canonical expression. Commuting conj through Exp,
// Log, Power and XLogX is exact on the principal branch: the spectrum
// reflects across the real axis and the branch cut is conjugation-symmetric.
MatrixExpr conj_push(const MatrixExpr& m) {
  switch (m->op) {
    case MatrixOp::Const:
      return norm_const(m->value->conj());
    case MatrixOp::Identity:
      return m;
    case MatrixOp::Var:
      return m_var_conj(m->name, m->dim);
    case MatrixOp::VarConj:
      return m_var(m->name, m->dim);
    case MatrixOp::Transpose:
      return m_transpose(conj_push(m->children[0]));
    case MatrixOp::Add: {
      std::vector<MatrixExpr> kids;
      kids.reserve(m->children.size());
      for (const auto& c : m->children) kids.push_back(conj_push(c));
      return c_madd(std::move(kids));
    }
    case MatrixOp::ScalarMul:
      return c_smul(conj_push_s(m->scale), conj_push(m->children[0]));
    case MatrixOp::MatMul: {
      std::vector<MatrixExpr> kids;
      kids.reserve(m->children.size());
      for (const auto& c : m->children) kids.push_back(conj_push(c));
      return c_mmul(std::move(kids));
    }
    case MatrixOp::Hadamard:
      return c_hadamard(conj_push(m->children[0]), conj_push(m->children[1]));
    case MatrixOp::MatPow:
      return c_mpow(conj_push(m->children[0]), m->exponent);
    case MatrixOp::Apply:
      return c_apply(conj_func(m->func), conj_push(m->children[0]));
    case MatrixOp::Conjugate:
    case MatrixOp::Adjoint:
      break;
  }
  throw ShapeError("conjugate push on a non-canonical node");
}

ScalarExpr conj_push_s(const ScalarExpr& s) {
  switch (s->op) {
    case ScalarOp::Lit:
      return s_lit(norm_zero(std::conj(s->lit)));
    case ScalarOp::Param:
      return s;
    case ScalarOp::Trace:
      return c_trace(conj_push(s->arg));
    case ScalarOp::Det:
      return c_det(conj_push(s->arg));
    case ScalarOp::Entry:
      return c_entry(conj_push(s->arg), s->row, s->col);
    case ScalarOp::Bilinear: {
      std::vector<cxd> right = s->right;
      for (auto& v : right) v = std::conj(v);
      return s_bilinear(s->left, conj_push(s->arg), right, !s->conj_left);
    }
    case ScalarOp::Neg:
      break;  // canonical scalars carry no Neg
    case ScalarOp::Mul:
    case ScalarOp::Add: {
      std::vector<ScalarExpr> kids;
      kids.reserve(s->children.size());
      for (const auto& c : s->children) kids.push_back(conj_push_s(c));
      return s->op == ScalarOp::Mul ? c_mul(std::move(kids))
                                    : c_add(std::move(kids));
    }
  }
  throw ShapeError("conjugate push on a non-canonical scalar");
}

MatrixExpr canon_m(const MatrixExpr& e) {
  switch (e->op) {
    case MatrixOp::Const:
      return norm_const(*e->value);
    case MatrixOp::Identity:
    case MatrixOp::Var:
    case MatrixOp::VarConj:
      return e;
    case MatrixOp::Transpose:
      return t_push(canon_m(e->children[0]));
    case MatrixOp::Conjugate:
      return conj_push(canon_m(e->children[0]));
    case MatrixOp::Adjoint:
      return t_push(conj_push(canon_m(e->children[0])));
    case MatrixOp::Add: {
      std::vector<MatrixExpr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) kids.push_back(canon_m(c));
      return c_madd(std::move(kids));
    }
    case MatrixOp::ScalarMul:
      return c_smul(canon_s(e->scale), canon_m(e->children[0]));
    case MatrixOp::MatMul: {
      std::vector<MatrixExpr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) kids.push_back(canon_m(c));
      return c_mmul(std::move(kids));
    }
    case MatrixOp::Hadamard:
      return c_hadamard(canon_m(e->children[0]), canon_m(e->children[1]));
    case MatrixOp::MatPow:
      return c_mpow(canon_m(e->children[0]), e->exponent);
    case MatrixOp::Apply:
      return c_apply(e->func, canon_m(e->children[0]));
  }
  throw ShapeError("canonicalize: unhandled matrix node");
}

ScalarExpr canon_s(const ScalarExpr& e) {
  switch (e->op) {
    case ScalarOp::Lit:
      return s_lit(norm_zero(e->lit));
    case ScalarOp::Param:
      return e;
    case ScalarOp::Trace:
      return c_trace(canon_m(e->arg));
    case ScalarOp::Det:
      return c_det(canon_m(e->arg));
    case ScalarOp::Entry:
      return c_entry(canon_m(e->arg), e->row, e->col);
    case ScalarOp::Bilinear: {
      const MatrixExpr arg = canon_m(e->arg);
      if (arg->op == MatrixOp::Const || arg->op == MatrixOp::Identity) {
        cxd acc = 0.0;
        for (int i = 0; i < arg->dim; ++i) {
          const cxd l = e->conj_left ? std::conj(e->left[i]) : e->left[i];
          for (int j = 0; j < arg->dim; ++j) {
            const cxd mij = arg->op == MatrixOp::Identity
                                ? cxd(i == j ? 1.0 : 0.0)
                                : (*arg->value)(i, j);
            acc += l * mij * e->right[j];
          }
        }
        return s_lit(norm_zero(acc));
      }
      return s_bilinear(e->left, arg, e->right, e->conj_left);
    }
    case ScalarOp::Neg:
      return c_mul({s_lit(-1.0), canon_s(e->children[0])});
    case ScalarOp::Mul: {
      std::vector<ScalarExpr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) kids.push_back(canon_s(c));
      return c_mul(std::move(kids));
    }
    case ScalarOp::Add: {
      std::vector<ScalarExpr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) kids.push_back(canon_s(c));
      return c_add(std::move(kids));
    }
  }
  throw ShapeError("canonicalize: unhandled scalar node");
}

}  // namespace

ScalarExpr canonicalize(const ScalarExpr& e) { return canon_s(e); }
MatrixExpr canonicalize(const MatrixExpr& e) { return canon_m(e); }

}  // namespace wirt
