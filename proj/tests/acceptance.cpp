// Acceptance gate: one check per shipped guarantee, one PASS/FAIL line per
// check, nonzero exit when anything fails. Everything here goes through the
// public headers only, so this binary doubles as a sanity run after a build.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "wirt/complex_matrix.hpp"
#include "wirt/derive.hpp"
#include "wirt/eval.hpp"
#include "wirt/expr.hpp"
#include "wirt/fd.hpp"
#include "wirt/linalg.hpp"
#include "wirt/random.hpp"
#include "wirt/rng.hpp"
#include "wirt/solve.hpp"

using namespace wirt;

namespace {

int criterion = 0;
int failures = 0;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

void verdict(bool ok, const std::string& what) {
  ++criterion;
  std::printf("%s  %d  %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double rel_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).frob_norm() / (1.0 + y.frob_norm());
}

// ---- 1: the gradient table against finite differences ----

void check_gradient_table() {
  const auto t0 = std::chrono::steady_clock::now();
  const VariableDecl v{"Z", 4, StructureClass::Unstructured};
  const MatrixExpr zm = m_var(v);
  double worst = 0.0;
  int worst_form = 0;
  bool all = true;

  for (int point = 0; point < 10; ++point) {
    Rng rng(1000 + point);
    const ComplexMatrix am = random_matrix(4, rng, 0.7);
    const ComplexMatrix bm = random_matrix(4, rng, 0.7);
    const MatrixExpr a = m_const(am), b = m_const(bm);
    std::vector<cxd> va(4), vb(4), coeffs(5);
    for (auto& c : va) c = 0.6 * cxd(rng.gauss(), rng.gauss());
    for (auto& c : vb) c = 0.6 * cxd(rng.gauss(), rng.gauss());
    for (auto& c : coeffs) c = 0.4 * cxd(rng.gauss(), rng.gauss());

    const std::vector<ScalarExpr> forms = {
        s_bilinear(va, zm, vb, false),
        s_bilinear(va, zm, vb, true),
        s_trace(zm),
        s_trace(m_conj(zm)),
        s_trace(m_mul(a, zm)),
        s_trace(m_mul(a, m_transpose(zm))),
        s_trace(m_mul(a, m_conj(zm))),
        s_trace(m_mul(a, m_adjoint(zm))),
        s_trace(m_mul({zm, a, zm, b})),
        s_trace(m_mul({zm, a, m_transpose(zm), b})),
        s_trace(m_mul({zm, a, m_conj(zm), b})),
        s_trace(m_mul({zm, a, m_adjoint(zm), b})),
        s_trace(m_pow(zm, 3)),
        s_trace(m_mul(a, m_pow(zm, 3))),
        s_trace(m_apply(AnalyticFunction::series(coeffs), zm)),
        frob2(zm),
        s_det(zm),
        s_det(m_conj(zm)),
        s_det(m_mul({m_adjoint(zm), a, zm})),
        s_det(m_pow(zm, 3)),
    };

    EvalEnv env;
    env.bindings.emplace("Z", random_matrix(4, rng, 0.8));
    for (std::size_t k = 0; k < forms.size(); ++k) {
      const WirtingerPair p = derive_unstructured(forms[k], v);
      const GradCheckReport rep = grad_check(p, forms[k], env);
      if (rep.max_rel_err > worst) {
        worst = rep.max_rel_err;
        worst_form = static_cast<int>(k) + 1;
      }
      all = all && rep.pass;
    }
  }
  const double el = seconds_since(t0);
  verdict(all && el < 10.0,
          fmt("gradient table vs finite differences: 20 forms x 10 points, "
              "worst rel err %.1e (form %d), %.1fs",
              worst, worst_form, el));
}

// ---- 2: structure-aware gradients against structured differences ----

void check_structure_classes() {
  const StructureClass classes[] = {
      StructureClass::Unstructured,  StructureClass::Diagonal,
      StructureClass::Symmetric,     StructureClass::AntiSymmetric,
      StructureClass::Hermitian,     StructureClass::AntiHermitian};
  double worst = 0.0;
  bool all = true;
  int cases = 0;

  for (const StructureClass cls : classes) {
    const VariableDecl v{"Z", 4, cls};
    const MatrixExpr zm = m_var(v);
    for (int point = 0; point < 5; ++point) {
      Rng rng(2000 + 10 * static_cast<int>(cls) + point);
      const MatrixExpr a = m_const(random_matrix(4, rng, 0.7));
      const MatrixExpr b = m_const(random_matrix(4, rng, 0.7));
      const std::vector<ScalarExpr> forms = {
          s_trace(m_mul(a, zm)), s_trace(m_pow(zm, 2)), frob2(zm),
          s_trace(m_mul({zm, a, m_adjoint(zm), b}))};
      EvalEnv env;
      env.bindings.emplace("Z", random_structured(4, cls, rng, 0.8));
      for (const ScalarExpr& f : forms) {
        const WirtingerPair p = derive(f, v);
        const GradCheckReport rep = grad_check(p, f, env);
        worst = std::max(worst, rep.max_rel_err);
        all = all && rep.pass;
        ++cases;
      }
    }
  }
  verdict(all, fmt("structure classes vs structured finite differences: "
                   "%d cases, worst rel err %.1e",
                   cases, worst));
}

// ---- 3: entry derivatives of matrix powers ----

void check_power_entries() {
  const VariableDecl v{"Z", 3, StructureClass::Unstructured};
  const MatrixExpr zm = m_var(v);
  double worst = 0.0;
  bool all = true;

  for (int n = 1; n <= 4; ++n) {
    for (int point = 0; point < 2; ++point) {
      Rng rng(3000 + 10 * n + point);
      EvalEnv env;
      env.bindings.emplace("Z", random_matrix(3, rng, 0.8));

      // Lemma side: d(Z^n)/dZ_ij as a matrix over the output indices.
      ComplexMatrix lemma[3][3] = {{ComplexMatrix(3), ComplexMatrix(3),
                                    ComplexMatrix(3)},
                                   {ComplexMatrix(3), ComplexMatrix(3),
                                    ComplexMatrix(3)},
                                   {ComplexMatrix(3), ComplexMatrix(3),
                                    ComplexMatrix(3)}};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          lemma[i][j] = eval_matrix(power_entry_derivative(zm, n, i, j), env);

      // Oracle side: the numeric gradient of each output entry.
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          const ScalarExpr f = s_entry(m_pow(zm, n), l, m);
          const FDGradient fd = fd_wirtinger(f, v, env);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              const cxd oracle = fd.d_var(i, j);
              const double err = std::abs(lemma[i][j](l, m) - oracle) /
                                 std::max(1.0, std::abs(oracle));
              worst = std::max(worst, err);
              all = all && err <= 1e-6;
              // The entry is holomorphic; the conjugate half must vanish.
              const double hc = std::abs(fd.d_var_conj(i, j));
              worst = std::max(worst, hc);
              all = all && hc <= 1e-6;
            }
        }
    }
  }
  verdict(all, fmt("matrix power entry derivatives vs finite differences: "
                   "n=1..4, all index pairs, worst err %.1e",
                   worst));
}

// ---- 4: stationary points of the radial quartic ----

void check_radial_quartic() {
  const VariableDecl v{"Z", 1, StructureClass::Unstructured};
  const MatrixExpr zm = m_var(v);
  Problem prob;
  prob.objective = s_sub(s_mul(frob2(zm), frob2(zm)), frob2(zm));
  prob.direction = Direction::StationaryOnly;
  prob.variable = v;

  auto from = [&](double x0) {
    ComplexMatrix z0(1);
    z0.set(0, 0, cxd(x0, 0.0));
    SolveOptions opts;
    opts.start = z0;
    return solve(prob, opts);
  };

  const SolveReport rim = from(1.0);
  const double rim_err =
      std::abs(std::abs(rim.solution(0, 0)) - 1.0 / std::sqrt(2.0));
  const SolveReport origin = from(1e-3);
  const double origin_err = std::abs(origin.solution(0, 0));

  verdict(rim.converged && rim_err <= 1e-6 && origin.converged &&
              origin_err <= 1e-6,
          fmt("radial quartic stationary points from both basins: "
              "|z|-1/sqrt2 err %.1e, |z| err %.1e",
              rim_err, origin_err));
}

// ---- 5: the maximally mixed state ----

void check_maximally_mixed() {
  bool symbolic_ok = true;
  for (const int n : {2, 4, 8}) {
    const VariableDecl v{"Z", n, StructureClass::Hermitian};
    const MatrixExpr zm = m_var(v);
    const WirtingerPair p = derive(canonicalize(s_trace(m_pow(zm, 2))), v);
    const WirtingerPair q = derive(canonicalize(s_trace(zm)), v);
    const std::map<std::string, MatrixExpr> at_center = {
        {"Z", m_const(ComplexMatrix::scaled_identity(n, 1.0 / n))}};
    const double lambda = 2.0 / n;
    const MatrixExpr res_conj = canonicalize(substitute(
        m_sub(p.d_var_conj, m_smul(s_lit(lambda), q.d_var_conj)), at_center));
    const MatrixExpr res_plain = canonicalize(substitute(
        m_sub(p.d_var, m_smul(s_lit(lambda), q.d_var)), at_center));
    symbolic_ok = symbolic_ok && is_zero(res_conj) && is_zero(res_plain);
  }

  bool iterative_ok = true;
  double worst = 0.0;
  for (const int n : {2, 4, 8}) {
    const VariableDecl v{"Z", n, StructureClass::Hermitian};
    const MatrixExpr zm = m_var(v);
    Problem prob;
    prob.objective = s_trace(m_pow(zm, 2));
    prob.variable = v;
    prob.constraints.push_back({s_trace(zm), cxd(1.0, 0.0), "normalization"});
    prob.density = true;
    const ComplexMatrix center = ComplexMatrix::scaled_identity(n, 1.0 / n);
    Rng rng(5000 + n);
    for (int s = 0; s < 5; ++s) {
      SolveOptions opts;
      opts.seed = 50 * n + s;
      opts.start = random_density(n, rng);
      const SolveReport rep = solve(prob, opts);
      const double diff = (rep.solution - center).frob_norm();
      worst = std::max(worst, diff);
      iterative_ok = iterative_ok && rep.converged && diff <= 1e-4;
    }
  }
  verdict(symbolic_ok && iterative_ok,
          fmt("maximally mixed state: symbolic stationarity at I/N exact, "
              "15 solves from random densities, worst diff %.1e",
              worst));
}

// ---- 6: entropy of the uniform state ----

void check_uniform_entropy() {
  bool all = true;
  double worst = 0.0;
  for (const int d : {2, 3, 4, 8}) {
    const double target = std::log(static_cast<double>(d));
    const EntropyResult closed = entropy_maximum(d);
    worst = std::max(worst, std::abs(closed.entropy - target));

    const VariableDecl v{"Z", d, StructureClass::Hermitian};
    const MatrixExpr zm = m_var(v);
    Problem prob;
    prob.objective =
        s_neg(s_trace(m_apply(AnalyticFunction::xlogx(), zm)));
    prob.direction = Direction::Maximize;
    prob.variable = v;
    prob.constraints.push_back({s_trace(zm), cxd(1.0, 0.0), "normalization"});
    prob.density = true;
    SolveOptions opts;
    opts.seed = 60 + d;
    const SolveReport rep = solve(prob, opts);
    const double err = std::abs(rep.objective_value - target);
    worst = std::max(worst, err);
    all = all && rep.converged && err <= 1e-5 &&
          std::abs(closed.entropy - target) <= 1e-5;
  }
  verdict(all, fmt("uniform-state entropy log d by closed form and solver: "
                   "d in {2,3,4,8}, worst err %.1e",
                   worst));
}

// ---- 7: thermal states ----

void check_thermal_states() {
  bool all = true;
  double worst = 0.0;
  Rng rng(888);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h =
        random_structured(4, StructureClass::Hermitian, rng);
    const HermEig eig = hermitian_eig(h);
    const double lo = eig.values.front(), hi = eig.values.back();
    for (const double q : {0.25, 0.5, 0.75}) {
      const GibbsResult g = gibbs_state(h, lo + q * (hi - lo));
      const double e_err = std::abs((g.rho * h).trace() -
                                    cxd(lo + q * (hi - lo), 0.0));
      const double herm = g.rho.hermiticity_defect();
      const double min_eig = hermitian_eig(g.rho).values.front();
      const double tr_err = std::abs(g.rho.trace() - cxd(1.0, 0.0));
      const double comm = (g.rho * h - h * g.rho).frob_norm();
      const double bad = std::max({e_err, herm, std::max(0.0, -min_eig),
                                   tr_err, comm});
      worst = std::max(worst, bad);
      all = all && bad <= 1e-10;
    }
  }

  // Two-level system pinned at the inverse temperature beta = 1.
  ComplexMatrix h2(2);
  h2.set(1, 1, cxd(1.0, 0.0));
  const double e2 = std::exp(-1.0) / (1.0 + std::exp(-1.0));
  const double beta_err = std::abs(gibbs_state(h2, e2).beta - 1.0);
  all = all && beta_err <= 1e-8;

  verdict(all, fmt("thermal states: 10 random hamiltonians x 3 energies, "
                   "worst defect %.1e; two-level beta err %.1e",
                   worst, beta_err));
}

// ---- 8: nearest-matrix fits ----

void check_nearest_fits() {
  bool all = true;
  double worst_special = 0.0;
  Rng rng(4242);
  for (const int n : {2, 3, 4}) {
    const ComplexMatrix l = random_matrix(n, rng);
    const double c = 1.5;
    const FrobeniusResult fn = frobenius_fit_norm(l, c);
    const ComplexMatrix want_n = l.scaled(cxd(c / l.frob_norm(), 0.0));
    worst_special = std::max(worst_special, (fn.t - want_n).frob_norm());

    const cxd d(0.4, -0.3);
    const FrobeniusResult ft = frobenius_fit_trace(l, d);
    ComplexMatrix want_t = l;
    want_t.accumulate((d - l.trace()) / static_cast<double>(n),
                      ComplexMatrix::scaled_identity(n, 1.0));
    worst_special = std::max(worst_special, (ft.t - want_t).frob_norm());
  }
  all = all && worst_special <= 1e-12;

  double worst_plug = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int n = 3;
    const ComplexMatrix l = random_matrix(n, rng);
    const double c = 0.8 * l.frob_norm();
    const cxd d(0.5 * l.trace().real(), 0.0);
    const FrobeniusResult fit = frobenius_fit(l, c, d);
    // Plug the answer back into both constraints and the stationarity
    // identity (1 + lambda) t = l - eta I.
    const double c_err = std::abs(fit.t.frob_norm() - c);
    const double d_err = std::abs(fit.t.trace() - d);
    ComplexMatrix res = fit.t.scaled(cxd(1.0 + fit.lambda, 0.0)) - l;
    res.accumulate(fit.eta, ComplexMatrix::scaled_identity(n, 1.0));
    const double bad = std::max({c_err, d_err, res.frob_norm()});
    worst_plug = std::max(worst_plug, bad);
    all = all && bad <= 1e-10;
  }
  verdict(all, fmt("nearest-matrix fits: special cases to %.1e, 10 "
                   "two-constraint plug-backs to %.1e",
                   worst_special, worst_plug));
}

// ---- 9: calculus properties on generated expressions ----

MatrixExpr gen_matrix(Rng& rng, const VariableDecl& v, int depth,
                      bool allow_conj) {
  const int n = v.dim;
  if (depth <= 0 || rng.uniform01() < 0.35) {
    switch (rng.uniform_int(0, allow_conj ? 4 : 3)) {
      case 0:
      case 1:
        return m_var(v);
      case 2:
        return m_const(random_matrix(n, rng, 0.6));
      case 3:
        return m_identity(n);
      default:
        return m_conj(m_var(v));
    }
  }
  switch (rng.uniform_int(0, 4)) {
    case 0:
      return m_add(gen_matrix(rng, v, depth - 1, allow_conj),
                   gen_matrix(rng, v, depth - 1, allow_conj));
    case 1:
      return m_mul(gen_matrix(rng, v, depth - 1, allow_conj),
                   gen_matrix(rng, v, depth - 1, allow_conj));
    case 2:
      return m_smul(s_lit(0.5 * cxd(rng.gauss(), rng.gauss())),
                    gen_matrix(rng, v, depth - 1, allow_conj));
    case 3:
      return m_transpose(gen_matrix(rng, v, depth - 1, allow_conj));
    default:
      return m_pow(gen_matrix(rng, v, depth - 1, allow_conj),
                   static_cast<int>(rng.uniform_int(2, 3)));
  }
}

ScalarExpr gen_scalar_atom(Rng& rng, const VariableDecl& v,
                           bool allow_conj) {
  const MatrixExpr m = gen_matrix(rng, v, 2, allow_conj);
  switch (rng.uniform_int(0, allow_conj ? 3 : 2)) {
    case 0:
      return s_trace(m);
    case 1:
      return s_entry(m, static_cast<int>(rng.uniform_int(0, v.dim - 1)),
                     static_cast<int>(rng.uniform_int(0, v.dim - 1)));
    case 2:
      return s_det(m);
    default:
      return frob2(m);
  }
}

// A generated objective that depends on the variable and stays at a tame
// magnitude at the probe point, so absolute difference tolerances hold.
ScalarExpr gen_objective(Rng& rng, const VariableDecl& v, bool allow_conj,
                         const EvalEnv& env) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    ScalarExpr f = gen_scalar_atom(rng, v, allow_conj);
    if (rng.uniform_int(0, 1) == 1) {
      const ScalarExpr g = gen_scalar_atom(rng, v, allow_conj);
      f = rng.uniform01() < 0.5 ? s_add(f, g) : s_mul(f, g);
    }
    if (!free_vars(f).count(v.name)) continue;
    try {
      if (std::abs(eval_scalar(f, env)) > 50.0) continue;
    } catch (const EvalError&) {
      continue;
    }
    return f;
  }
  return s_trace(m_var(v));  // unreachable at these depths
}

void check_calculus_properties() {
  const int cases = 120;
  double worst_conj = 0.0, worst_real = 0.0, worst_herm = 0.0,
         worst_holo = 0.0;
  bool all = true;
  Rng rng(9001);

  for (int t = 0; t < cases; ++t) {
    const int dim = static_cast<int>(rng.uniform_int(2, 3));

    // Conjugating the objective swaps and conjugates the gradient halves.
    {
      const VariableDecl v{"Z", dim, StructureClass::Unstructured};
      EvalEnv env;
      env.bindings.emplace("Z", random_matrix(dim, rng, 0.7));
      const ScalarExpr f = gen_objective(rng, v, true, env);
      const WirtingerPair pf = derive_unstructured(f, v);
      const WirtingerPair pc = derive_unstructured(sconj(f), v);
      const double e1 = rel_diff(eval_matrix(pc.d_var, env),
                                 eval_matrix(pf.d_var_conj, env).conj());
      const double e2 = rel_diff(eval_matrix(pc.d_var_conj, env),
                                 eval_matrix(pf.d_var, env).conj());
      worst_conj = std::max({worst_conj, e1, e2});
    }

    // Real objectives: the conjugate half is the conjugate of the plain half.
    {
      const VariableDecl v{"Z", dim, StructureClass::Unstructured};
      EvalEnv env;
      env.bindings.emplace("Z", random_matrix(dim, rng, 0.7));
      const ScalarExpr f = gen_objective(rng, v, true, env);
      const ScalarExpr g = s_add(f, sconj(f));
      const WirtingerPair p = derive_unstructured(g, v);
      worst_real = std::max(
          worst_real, rel_diff(eval_matrix(p.d_var_conj, env),
                               eval_matrix(p.d_var, env).conj()));
    }

    // Hermitian variables: the conjugate half is the transpose of the plain
    // half, entry for entry.
    {
      const VariableDecl v{"Z", dim, StructureClass::Hermitian};
      EvalEnv env;
      env.bindings.emplace(
          "Z", random_structured(dim, StructureClass::Hermitian, rng, 0.7));
      const ScalarExpr f = gen_objective(rng, v, true, env);
      const WirtingerPair p = derive(f, v);
      worst_herm = std::max(
          worst_herm, rel_diff(eval_matrix(p.d_var_conj, env),
                               eval_matrix(p.d_var, env).transpose()));
    }

    // Conjugate-free expressions are holomorphic: the symbolic conjugate
    // half cancels to zero and the numeric one vanishes to finite-difference
    // accuracy.
    {
      const VariableDecl v{"Z", dim, StructureClass::Unstructured};
      EvalEnv env;
      env.bindings.emplace("Z", random_matrix(dim, rng, 0.7));
      const ScalarExpr f = gen_objective(rng, v, false, env);
      all = all && holomorphic_in(f, v);
      worst_holo = std::max(worst_holo, cauchy_riemann_defect(f, v, env));
    }
  }

  all = all && worst_conj <= 1e-9 && worst_real <= 1e-9 &&
        worst_herm <= 1e-9 && worst_holo <= 1e-8;
  verdict(all,
          fmt("calculus properties on %d generated cases each: conjugation "
              "%.1e, real pairing %.1e, hermitian transpose %.1e, "
              "holomorphy defect %.1e",
              cases, worst_conj, worst_real, worst_herm, worst_holo));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Entry {
    void (*run)();
    const char* name;
  };
  const Entry entries[] = {
      {check_gradient_table, "gradient table"},
      {check_structure_classes, "structure classes"},
      {check_power_entries, "power entries"},
      {check_radial_quartic, "radial quartic"},
      {check_maximally_mixed, "maximally mixed state"},
      {check_uniform_entropy, "uniform entropy"},
      {check_thermal_states, "thermal states"},
      {check_nearest_fits, "nearest-matrix fits"},
      {check_calculus_properties, "calculus properties"},
  };
  for (const Entry& e : entries) {
    try {
      e.run();
    } catch (const std::exception& ex) {
      verdict(false, fmt("%s threw: %s", e.name, ex.what()));
    }
  }
  std::printf("acceptance: %d/%d criteria passed, %.1fs\n", criterion - failures,
              criterion, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
