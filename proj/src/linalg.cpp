#include "wirt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wirt {
namespace {

constexpr double kTiny = 1e-300;

}  // namespace

LuFactors lu_factor(const ComplexMatrix& a) {
  const int n = a.dim();
  LuFactors f(n);
  f.lu = a;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(f.lu(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(f.lu(r, col));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best <= kTiny) {
      f.singular = true;
      continue;
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        const cxd tmp = f.lu(col, j);
        f.lu.set(col, j, f.lu(piv, j));
        f.lu.set(piv, j, tmp);
      }
      std::swap(f.perm[col], f.perm[piv]);
      f.sign = -f.sign;
    }
    const cxd d = f.lu(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cxd m = f.lu(r, col) / d;
      f.lu.set(r, col, m);
      if (m == cxd(0.0)) continue;
      for (int j = col + 1; j < n; ++j)
        f.lu.set(r, j, f.lu(r, j) - m * f.lu(col, j));
    }
  }
  return f;
}

cxd lu_det(const LuFactors& f) {
  if (f.singular) return 0.0;
  cxd d = static_cast<double>(f.sign);
  for (int i = 0; i < f.lu.dim(); ++i) d *= f.lu(i, i);
  return d;
}

std::vector<cxd> lu_solve(const LuFactors& f, const std::vector<cxd>& rhs) {
  const int n = f.lu.dim();
  if (f.singular) throw EvalError("linear solve on a singular matrix");
  std::vector<cxd> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

cxd det(const ComplexMatrix& a) { return lu_det(lu_factor(a)); }

double norm1(const ComplexMatrix& a) {
  double best = 0.0;
  for (int j = 0; j < a.dim(); ++j) {
    double col = 0.0;
    for (int i = 0; i < a.dim(); ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

InverseResult inverse_with_cond(const ComplexMatrix& a) {
  const int n = a.dim();
  const LuFactors f = lu_factor(a);
  if (f.singular) throw EvalError("matrix is singular, no inverse");
  ComplexMatrix inv(n);
  std::vector<cxd> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<cxd> col = lu_solve(f, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv.set(i, j, col[i]);
  }
  const double cond = norm1(a) * norm1(inv);
  return {inv, cond};
}

ComplexMatrix inverse(const ComplexMatrix& a, double cond_limit) {
  InverseResult r = inverse_with_cond(a);
  if (!std::isfinite(r.cond1) || r.cond1 > cond_limit) {
    throw EvalError("matrix inverse rejected: condition estimate " +
                    std::to_string(r.cond1) + " exceeds limit");
  }
  return r.inv;
}

HermEig hermitian_eig(const ComplexMatrix& a, double herm_tol) {
  const int n = a.dim();
  if (a.hermiticity_defect() > herm_tol * std::max(1.0, a.max_abs())) {
    throw EvalError("eigendecomposition requires a Hermitian matrix");
  }
  // Work on the exactly Hermitian average so rounding in the input cannot
  // leak into complex diagonal entries.
  ComplexMatrix w = a + a.adjoint();
  w = w.scaled(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, w.frob_norm());
  const double stop = 1e-15 * scale;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(w(p, q));
    off = std::sqrt(2.0 * off);
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cxd apq = w(p, q);
        const double b = std::abs(apq);
        if (b <= 1e-18 * scale) continue;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        const cxd phase = apq / b;
        // Annihilation condition for this rotation convention is
        // t^2 - 2*tau*t - 1 = 0; take the root of smaller magnitude.
        const double tau = (aqq - app) / (2.0 * b);
        const double t =
            (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns p and q of W and V under the plane rotation.
        for (int k = 0; k < n; ++k) {
          const cxd wkp = w(k, p);
          const cxd wkq = w(k, q);
          w.set(k, p, wkp * c + wkq * s * std::conj(phase));
          w.set(k, q, wkq * c - wkp * s * phase);
          const cxd vkp = v(k, p);
          const cxd vkq = v(k, q);
          v.set(k, p, vkp * c + vkq * s * std::conj(phase));
          v.set(k, q, vkq * c - vkp * s * phase);
        }
        // Rows p and q (conjugate transpose of the same rotation).
        for (int k = 0; k < n; ++k) {
          const cxd wpk = w(p, k);
          const cxd wqk = w(q, k);
          w.set(p, k, wpk * c + wqk * s * phase);
          w.set(q, k, wqk * c - wpk * s * std::conj(phase));
        }
        // Pin the pair to exact Hermitian form.
        w.set(p, q, std::conj(w(q, p)));
        w.set(p, p, cxd(w(p, p).real(), 0.0));
        w.set(q, q, cxd(w(q, q).real(), 0.0));
      }
    }
  }

  HermEig e(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = w(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });
  e.values.resize(n);
  for (int j = 0; j < n; ++j) {
    e.values[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) e.vectors.set(i, j, v(i, order[j]));
  }
  return e;
}

ComplexMatrix eig_apply(const HermEig& e, const std::vector<double>& fvalues) {
  const int n = e.vectors.dim();
  if (static_cast<int>(fvalues.size()) != n) {
    throw ShapeError("eig_apply: value count does not match dimension");
  }
  ComplexMatrix scaled(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      scaled.set(i, j, e.vectors(i, j) * fvalues[j]);
  return scaled * e.vectors.adjoint();
}

ComplexMatrix exp_series(const ComplexMatrix& a) {
  const int n = a.dim();
  int squarings = 0;
  double nrm = norm1(a);
  while (nrm > 0.5 && squarings < 64) {
    nrm *= 0.5;
    ++squarings;
  }
  const ComplexMatrix b = a.scaled(std::ldexp(1.0, -squarings));

  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * b).scaled(1.0 / k);
    sum = sum + term;
    if (term.frob_norm() <= 1e-18 * std::max(1.0, sum.frob_norm())) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

ComplexMatrix sqrt_db(const ComplexMatrix& a) {
  ComplexMatrix x = a;
  ComplexMatrix y = ComplexMatrix::identity(a.dim());
  for (int it = 0; it < 100; ++it) {
    InverseResult xi = inverse_with_cond(x);
    InverseResult yi = inverse_with_cond(y);
    const ComplexMatrix xn = (x + yi.inv).scaled(0.5);
    const ComplexMatrix yn = (y + xi.inv).scaled(0.5);
    const double step = max_abs_diff(xn, x);
    x = xn;
    y = yn;
    if (step <= 1e-15 * std::max(1.0, x.max_abs())) return x;
  }
  throw EvalError(
      "matrix square root did not converge (spectrum touches the principal "
      "branch cut)");
}

ComplexMatrix log_general(const ComplexMatrix& a) {
  const int n = a.dim();
  {
    const LuFactors f = lu_factor(a);
    if (f.singular) throw EvalError("log of a singular matrix");
  }
  ComplexMatrix b = a;
  int s = 0;
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  while ((b - eye).frob_norm() > 0.3) {
    if (++s > 60) throw EvalError("matrix log did not converge");
    b = sqrt_db(b);
  }
  // Mercator series for log(I + X), ||X||_F <= 0.3.
  const ComplexMatrix x = b - eye;
  ComplexMatrix powx = x;
  ComplexMatrix sum(n);
  for (int k = 1; k <= 80; ++k) {
    sum.accumulate((k % 2 == 1) ? cxd(1.0 / k) : cxd(-1.0 / k), powx);
    if (powx.frob_norm() / (k + 1) <= 1e-18 * std::max(1.0, sum.frob_norm()))
      break;
    powx = powx * x;
  }
  return sum.scaled(std::ldexp(1.0, s));
}

ComplexMatrix density_project(const ComplexMatrix& a, double floor) {
  // Frobenius-nearest matrix with spectrum in {w_i >= floor, sum w_i = 1}:
  // Hermitian part, then the simplex projection of the eigenvalues in the
  // same eigenbasis. Orthogonality matters: descent methods that project
  // each iterate rely on it (a trace rescale is not orthogonal and can turn
  // a descent direction uphill).
  const int n = a.dim();
  if (n * floor >= 1.0)
    return ComplexMatrix::scaled_identity(n, 1.0 / n);
  const ComplexMatrix herm = structure_project(a, StructureClass::Hermitian);
  HermEig e = hermitian_eig(herm);

  // Water-filling: w_i -> max(floor, w_i - theta) with theta chosen so the
  // results sum to one. e.values is ascending, so the k largest are the
  // last k; the first feasible k gives the projection.
  std::vector<double> w = e.values;
  double suffix = 0.0;
  double theta = 0.0;
  for (int k = 1; k <= n; ++k) {
    suffix += w[n - k];
    const double cand = (suffix - 1.0 + double(n - k) * floor) / k;
    const bool top_ok = w[n - k] - cand >= floor;
    const bool rest_ok = k == n || w[n - k - 1] - cand <= floor;
    if (top_ok && rest_ok) {
      theta = cand;
      break;
    }
    theta = cand;  // k == n fallback: every level active
  }
  for (double& v : w) v = std::max(floor, v - theta);
  return eig_apply(e, w);
}

}  // namespace wirt
