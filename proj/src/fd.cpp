#include "wirt/fd.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace wirt {

namespace {

constexpr cxd kI{0.0, 1.0};
constexpr cxd kHalf{0.5, 0.0};

// f restricted to one independent real coordinate, probed centrally.
struct Prober {
  const ScalarExpr& f;
  const std::string& name;
  const ComplexMatrix& z0;
  EvalEnv work;
  double h;

  Prober(const ScalarExpr& f_, const VariableDecl& v, const EvalEnv& env,
         double h_)
      : f(f_), name(v.name), z0(env.bindings.at(v.name)), work(env), h(h_) {}

  // Central difference along the direction matrix: d/dt f(z0 + t*dir) at 0.
  cxd along(const ComplexMatrix& dir) {
    ComplexMatrix zp = z0;
    zp.accumulate(cxd(h, 0.0), dir);
    work.bindings.at(name) = std::move(zp);
    const cxd fp = eval_scalar(f, work);
    ComplexMatrix zm = z0;
    zm.accumulate(cxd(-h, 0.0), dir);
    work.bindings.at(name) = std::move(zm);
    const cxd fm = eval_scalar(f, work);
    const cxd g = (fp - fm) / (2.0 * h);
    if (!(std::isfinite(g.real()) && std::isfinite(g.imag())))
      throw FDError("non-finite difference quotient for '" + name + "'");
    return g;
  }
};

ComplexMatrix unit(int n, int i, int j, cxd v) {
  ComplexMatrix e(n);
  e.set(i, j, v);
  return e;
}

}  // namespace

FDGradient fd_wirtinger(const ScalarExpr& f, const VariableDecl& v,
                        const EvalEnv& env, const FDConfig& cfg) {
  const auto it = env.bindings.find(v.name);
  if (it == env.bindings.end())
    throw FDError("no binding for matrix variable '" + v.name + "'");
  const ComplexMatrix& z0 = it->second;
  if (z0.dim() != v.dim)
    throw FDError("binding for '" + v.name + "' has the wrong dimension");
  if (z0.structure_defect(v.structure) > 1e-8 * std::max(1.0, z0.max_abs()))
    throw FDError("binding for '" + v.name + "' violates its structure class");

  const int n = v.dim;
  Prober probe(f, v, env, cfg.h);
  FDGradient out(n);

  switch (v.structure) {
    case StructureClass::Unstructured:
    case StructureClass::Diagonal:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (v.structure == StructureClass::Diagonal && i != j) continue;
          const cxd gx = probe.along(unit(n, i, j, cxd(1.0, 0.0)));
          const cxd gy = probe.along(unit(n, i, j, kI));
          out.d_var.set(i, j, kHalf * (gx - kI * gy));
          out.d_var_conj.set(i, j, kHalf * (gx + kI * gy));
        }
      return out;

    case StructureClass::Symmetric:
    case StructureClass::AntiSymmetric: {
      const double mirror =
          v.structure == StructureClass::Symmetric ? 1.0 : -1.0;
      for (int i = 0; i < n; ++i) {
        if (v.structure == StructureClass::Symmetric) {
          const cxd gx = probe.along(unit(n, i, i, cxd(1.0, 0.0)));
          const cxd gy = probe.along(unit(n, i, i, kI));
          out.d_var.set(i, i, kHalf * (gx - kI * gy));
          out.d_var_conj.set(i, i, kHalf * (gx + kI * gy));
        }
        for (int j = i + 1; j < n; ++j) {
          ComplexMatrix dx = unit(n, i, j, cxd(1.0, 0.0));
          dx.set(j, i, cxd(mirror, 0.0));
          ComplexMatrix dy = unit(n, i, j, kI);
          dy.set(j, i, mirror * kI);
          const cxd gx = probe.along(dx);
          const cxd gy = probe.along(dy);
          const cxd d = kHalf * (gx - kI * gy);
          const cxd dc = kHalf * (gx + kI * gy);
          out.d_var.set(i, j, d);
          out.d_var.set(j, i, mirror * d);
          out.d_var_conj.set(i, j, dc);
          out.d_var_conj.set(j, i, mirror * dc);
        }
      }
      return out;
    }

    case StructureClass::Hermitian:
    case StructureClass::AntiHermitian: {
      const double mirror =
          v.structure == StructureClass::Hermitian ? 1.0 : -1.0;
      for (int i = 0; i < n; ++i) {
        if (v.structure == StructureClass::Hermitian) {
          // Real diagonal: one coordinate, no half factor.
          const cxd gx = probe.along(unit(n, i, i, cxd(1.0, 0.0)));
          out.d_var.set(i, i, gx);
          out.d_var_conj.set(i, i, gx);
        } else {
          // Imaginary diagonal: z_ii = i y, df/dy = i (A - B)_ii.
          const cxd gy = probe.along(unit(n, i, i, kI));
          out.d_var.set(i, i, -kI * gy);
          out.d_var_conj.set(i, i, kI * gy);
        }
        for (int j = i + 1; j < n; ++j) {
          // dz moves (i, j); the mirror entry moves by mirror * conj(dz).
          ComplexMatrix dx = unit(n, i, j, cxd(1.0, 0.0));
          dx.set(j, i, cxd(mirror, 0.0));
          ComplexMatrix dy = unit(n, i, j, kI);
          dy.set(j, i, -mirror * kI);
          const cxd gx = probe.along(dx);
          const cxd gy = probe.along(dy);
          const cxd d = kHalf * (gx - kI * gy);
          const cxd dc = kHalf * (gx + kI * gy);
          out.d_var.set(i, j, d);
          out.d_var_conj.set(i, j, dc);
          // The corrected pairs satisfy A_s = mirror * B_s^T.
          out.d_var.set(j, i, mirror * dc);
          out.d_var_conj.set(j, i, mirror * d);
        }
      }
      return out;
    }
  }
  throw FDError("unknown structure class");
}

GradCheckReport grad_check(const WirtingerPair& p, const ScalarExpr& f,
                           const EvalEnv& env, const FDConfig& cfg) {
  const FDGradient fd = fd_wirtinger(f, p.variable, env, cfg);
  const ComplexMatrix sym_d = eval_matrix(p.d_var, env);
  const ComplexMatrix sym_dc = eval_matrix(p.d_var_conj, env);

  GradCheckReport rep;
  const int n = p.variable.dim;
  for (int half = 0; half < 2; ++half) {
    const ComplexMatrix& sym = half == 0 ? sym_d : sym_dc;
    const ComplexMatrix& ora = half == 0 ? fd.d_var : fd.d_var_conj;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double err = std::abs(sym(i, j) - ora(i, j)) /
                           std::max(1.0, std::abs(ora(i, j)));
        if (err > rep.max_rel_err) {
          rep.max_rel_err = err;
          rep.worst_row = i;
          rep.worst_col = j;
          rep.worst_in_conj = half == 1;
        }
      }
  }
  rep.pass = rep.max_rel_err <= cfg.tol;
  return rep;
}

double cauchy_riemann_defect(const ScalarExpr& f, const VariableDecl& v,
                             const EvalEnv& env, const FDConfig& cfg) {
  VariableDecl free = v;
  free.structure = StructureClass::Unstructured;
  return fd_wirtinger(f, free, env, cfg).d_var_conj.max_abs();
}

}  // namespace wirt
