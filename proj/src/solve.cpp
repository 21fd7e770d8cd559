#include "wirt/solve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "wirt/derive.hpp"
#include "wirt/eval.hpp"
#include "wirt/linalg.hpp"
#include "wirt/random.hpp"
#include "wirt/rng.hpp"

namespace wirt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double re_dot(const ComplexMatrix& a, const ComplexMatrix& b) {
  double acc = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const cxd x = a(i, j), y = b(i, j);
      acc += x.real() * y.real() + x.imag() * y.imag();
    }
  return acc;
}

// Numeric structure correction of an unstructured Wirtinger pair (values,
// not expressions): the plain half of the corrected pair.
ComplexMatrix correct_plain(const ComplexMatrix& a, const ComplexMatrix& b,
                            StructureClass s) {
  switch (s) {
    case StructureClass::Unstructured:
      return a;
    case StructureClass::Diagonal:
      return structure_project(a, StructureClass::Diagonal);
    case StructureClass::Symmetric: {
      ComplexMatrix out = a + a.transpose();
      for (int i = 0; i < a.dim(); ++i) out.set(i, i, a(i, i));
      return out;
    }
    case StructureClass::AntiSymmetric:
      return a - a.transpose();
    case StructureClass::Hermitian:
      return a + b.transpose();
    case StructureClass::AntiHermitian:
      return a - b.transpose();
  }
  return a;
}

// Unstructured derivative pair of one scalar expression, evaluated on
// demand.
struct Piece {
  ScalarExpr g;
  MatrixExpr da;
  MatrixExpr db;

  Piece(const ScalarExpr& expr, const VariableDecl& v) : g(canonicalize(expr)) {
    const WirtingerPair p = derive_unstructured(g, v);
    da = p.d_var;
    db = p.d_var_conj;
  }
};

struct PieceValue {
  cxd value;
  ComplexMatrix a;
  ComplexMatrix b;
};

PieceValue eval_piece(const Piece& p, const EvalEnv& env, int n) {
  PieceValue out{eval_scalar(p.g, env), eval_matrix(p.da, env),
                 eval_matrix(p.db, env)};
  if (out.a.dim() != n || out.b.dim() != n)
    throw SolveError("gradient dimension mismatch");
  return out;
}

// Real residual channels of one constraint: Re and Im of g - target, with
// their unstructured gradient pairs derived from the complex pair by
//   d(Re g) = (A + conj(B))/2,   d(Im g) = (A - conj(B))/(2i).
struct Channel {
  double residual;
  ComplexMatrix a;
  ComplexMatrix b;
};

void split_channels(const PieceValue& v, cxd target, Channel& re,
                    Channel& im) {
  const cxd r = v.value - target;
  const ComplexMatrix cb = v.b.conj();
  re.residual = r.real();
  re.a = (v.a + cb).scaled(0.5);
  re.b = re.a.conj();
  im.residual = r.imag();
  im.a = (v.a - cb).scaled(cxd(0.0, -0.5));
  im.b = im.a.conj();
}

// Smallest-squares fit of grad f against the active constraint gradients,
// returning the residual matrix and filling the multipliers.
ComplexMatrix fit_multipliers(const ComplexMatrix& gf,
                              const std::vector<ComplexMatrix>& gk,
                              std::vector<double>& lam) {
  const std::size_t m = gk.size();
  lam.assign(m, 0.0);
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < m; ++k)
    if (gk[k].frob_norm() > 1e-12) active.push_back(k);
  if (!active.empty()) {
    const int ma = static_cast<int>(active.size());
    ComplexMatrix gram(ma);
    std::vector<cxd> rhs(ma);
    for (int r = 0; r < ma; ++r) {
      for (int c = 0; c < ma; ++c)
        gram.set(r, c, cxd(re_dot(gk[active[r]], gk[active[c]]), 0.0));
      rhs[r] = cxd(re_dot(gk[active[r]], gf), 0.0);
      // Tiny ridge keeps near-parallel gradients solvable.
      gram.add_at(r, r, cxd(1e-12 * (1.0 + gram(r, r).real()), 0.0));
    }
    const LuFactors f = lu_factor(gram);
    if (!f.singular) {
      const std::vector<cxd> sol = lu_solve(f, rhs);
      for (int r = 0; r < ma; ++r) lam[active[r]] = sol[r].real();
    }
  }
  ComplexMatrix res = gf;
  for (std::size_t k = 0; k < m; ++k)
    res.accumulate(cxd(-lam[k], 0.0), gk[k]);
  return res;
}

struct Objective {
  // phi(z) and the structure-corrected descent gradient at z.
  virtual double value(const ComplexMatrix& z) = 0;
  virtual ComplexMatrix gradient(const ComplexMatrix& z) = 0;
  virtual ~Objective() = default;
};

// Spectral projected gradient: Barzilai-Borwein step, projection onto the
// feasible set (a convex set for every structure class, with or without the
// density confinement), nonmonotone sufficient decrease against the largest
// of the last few accepted values. Returns the reached iterate; `iters`
// accumulates accepted steps and `grad_norm` the projected stationarity
// measure at exit. With `local` set, acceptance is monotone and each move
// is length-capped, which keeps the iterate in the basin that contains the
// start instead of letting a long first step tunnel into a deeper one.
ComplexMatrix descend(Objective& obj, ComplexMatrix z, double grad_tol,
                      int max_iter, const Problem& prob, int& iters,
                      double& grad_norm, bool local = false) {
  auto project = [&](const ComplexMatrix& m) {
    ComplexMatrix out = structure_project(m, prob.variable.structure);
    if (prob.density) out = density_project(out);
    return out;
  };
  // Stationarity of the projected iteration: displacement of a short probe
  // step divided by its length. Coincides with ||g|| when the projection is
  // the identity on the step, and measures the feasible-cone component at a
  // clipped boundary point.
  auto measure = [&](const ComplexMatrix& zz, const ComplexMatrix& gg) {
    const double s0 = 1e-4 / (1.0 + gg.frob_norm());
    ComplexMatrix probe = zz;
    probe.accumulate(cxd(-s0, 0.0), gg.conj());
    return (project(probe) - zz).frob_norm() / s0;
  };

  z = project(z);
  double phi = obj.value(z);
  ComplexMatrix g = obj.gradient(z);
  std::array<double, 10> recent;
  recent.fill(phi);
  std::size_t ring = 0;
  double step = 1.0 / (1.0 + g.frob_norm());
  ComplexMatrix prev_z = z;
  ComplexMatrix prev_g = g;
  bool have_prev = false;

  for (int it = 0; it < max_iter; ++it) {
    grad_norm = measure(z, g);
    if (grad_norm <= grad_tol) return z;

    if (have_prev) {
      // BB1 step from the last accepted move.
      const ComplexMatrix s = z - prev_z;
      const ComplexMatrix y = g - prev_g;
      const double sy = re_dot(s, y);
      if (sy > 1e-300) {
        step = re_dot(s, s) / sy;
        step = std::min(std::max(step, 1e-12), 1e6);
      }
    }

    // One projection per iteration; the backtracking stays on the chord
    // z + alpha * dir, which lies in the (convex) feasible set.
    ComplexMatrix trial = z;
    trial.accumulate(cxd(-step, 0.0), g.conj());
    ComplexMatrix dir = project(trial) - z;
    double dir_sq = dir.frob_norm_sq();
    if (!(dir_sq > 0.0)) break;
    if (local) {
      const double cap = 0.1 * (1.0 + z.frob_norm());
      if (dir_sq > cap * cap) {
        dir = dir.scaled(cap / std::sqrt(dir_sq));
        dir_sq = cap * cap;
      }
    }

    const double phi_ref =
        local ? phi : *std::max_element(recent.begin(), recent.end());
    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt < 60; ++bt) {
      ComplexMatrix cand = z;
      cand.accumulate(cxd(alpha, 0.0), dir);
      double phi_new;
      try {
        phi_new = obj.value(cand);
      } catch (const EvalError&) {
        phi_new = kInf;
      }
      if (phi_new <= phi_ref - 1e-3 * alpha * alpha * dir_sq / step) {
        prev_z = z;
        prev_g = g;
        have_prev = true;
        z = std::move(cand);
        phi = phi_new;
        g = obj.gradient(z);
        recent[ring++ % recent.size()] = phi;
        accepted = true;
        ++iters;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no descent possible at machine resolution
  }
  grad_norm = measure(z, g);
  return z;
}

ComplexMatrix starting_point(const Problem& prob, const SolveOptions& opts) {
  if (opts.start) {
    if (opts.start->dim() != prob.variable.dim)
      throw SolveError("starting point has the wrong dimension");
    ComplexMatrix z = structure_project(*opts.start, prob.variable.structure);
    if (prob.density) z = density_project(z);
    return z;
  }
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  if (prob.density) return random_density(prob.variable.dim, rng);
  return random_structured(prob.variable.dim, prob.variable.structure, rng,
                           0.5);
}

double real_value(cxd v, const char* what) {
  if (std::abs(v.imag()) > 1e-7 * std::max(1.0, std::abs(v.real())))
    throw SolveError(std::string(what) +
                     " is not real on the iterates; only real objectives "
                     "can be optimized");
  return v.real();
}

// Augmented Lagrangian pieces at a point. With no constraints this is just
// the (sign-adjusted) objective and its corrected gradient.
struct AlObjective : Objective {
  const Problem& prob;
  const Piece& fp;
  const std::vector<Piece>& cons;
  EvalEnv& env;
  const std::vector<double>& lam;
  const double* mu;
  double sign;
  int n;

  AlObjective(const Problem& p, const Piece& f, const std::vector<Piece>& c,
              EvalEnv& e, const std::vector<double>& l, const double* m,
              double s, int dim)
      : prob(p), fp(f), cons(c), env(e), lam(l), mu(m), sign(s), n(dim) {}

  double value(const ComplexMatrix& z) override {
    env.bindings.at(prob.variable.name) = z;
    double acc = sign * real_value(eval_scalar(fp.g, env), "the objective");
    for (std::size_t k = 0; k < cons.size(); ++k) {
      const cxd r = eval_scalar(cons[k].g, env) - prob.constraints[k].target;
      const double rr = r.real(), ri = r.imag();
      acc -= lam[2 * k] * rr + lam[2 * k + 1] * ri;
      acc += 0.5 * *mu * (rr * rr + ri * ri);
    }
    return acc;
  }

  ComplexMatrix gradient(const ComplexMatrix& z) override {
    env.bindings.at(prob.variable.name) = z;
    PieceValue fv = eval_piece(fp, env, n);
    ComplexMatrix a = fv.a.scaled(sign);
    ComplexMatrix b = fv.b.scaled(sign);
    for (std::size_t k = 0; k < cons.size(); ++k) {
      const PieceValue cv = eval_piece(cons[k], env, n);
      Channel re{0.0, ComplexMatrix(n), ComplexMatrix(n)};
      Channel im = re;
      split_channels(cv, prob.constraints[k].target, re, im);
      const double wre = -lam[2 * k] + *mu * re.residual;
      const double wim = -lam[2 * k + 1] + *mu * im.residual;
      a.accumulate(cxd(wre, 0.0), re.a);
      b.accumulate(cxd(wre, 0.0), re.b);
      a.accumulate(cxd(wim, 0.0), im.a);
      b.accumulate(cxd(wim, 0.0), im.b);
    }
    return correct_plain(a, b, prob.variable.structure);
  }
};

}  // namespace

SolveReport solve(const Problem& prob, const SolveOptions& opts) {
  const VariableDecl& v = prob.variable;
  const int n = v.dim;

  if (prob.direction == Direction::StationaryOnly) {
    if (!prob.constraints.empty())
      throw SolveError("stationary mode takes no constraints");
    // Minimize || grad f ||_F^2 through the symbolic corrected gradient.
    // The descent runs in local mode so the answer is the stationary point
    // whose basin contains the start, not whichever zero a long first step
    // happens to tunnel into.
    const WirtingerPair p = derive(canonicalize(prob.objective), v);
    Problem sub;
    sub.objective = frob2(p.d_var);
    sub.direction = Direction::Minimize;
    sub.variable = v;
    sub.density = prob.density;
    sub.params = prob.params;
    const Piece merit(sub.objective, v);

    EvalEnv env;
    env.params = prob.params;
    env.bindings.emplace(v.name, ComplexMatrix(n));
    const std::vector<Piece> nocons;
    const std::vector<double> nolam;
    const double mu0 = 0.0;
    AlObjective mobj(sub, merit, nocons, env, nolam, &mu0, 1.0, n);

    SolveReport rep;
    rep.outer_iterations = 1;
    ComplexMatrix z = starting_point(sub, opts);
    double gnorm = 0.0;
    // Near a zero of the gradient, grad(||grad f||^2) shrinks linearly with
    // ||grad f||, so a modestly tighter tolerance on the merit gradient
    // suffices.
    z = descend(mobj, z, opts.gtol * 1e-2, opts.max_inner, sub,
                rep.inner_iterations, gnorm, /*local=*/true);

    env.bindings.at(v.name) = z;
    rep.solution = z;
    rep.objective_value = real_value(
        eval_scalar(canonicalize(prob.objective), env), "the objective");
    rep.grad_residual = eval_matrix(p.d_var, env).frob_norm();
    rep.converged = rep.grad_residual <= opts.gtol * 10.0;
    rep.message = rep.converged ? "stationary point found"
                                : "gradient norm did not reach tolerance";
    return rep;
  }

  const double sign = prob.direction == Direction::Maximize ? -1.0 : 1.0;
  const Piece fpiece(prob.objective, v);
  std::vector<Piece> cons;
  cons.reserve(prob.constraints.size());
  for (const auto& c : prob.constraints) cons.emplace_back(c.expr, v);

  EvalEnv env;
  env.params = prob.params;
  env.bindings.emplace(v.name, ComplexMatrix(n));

  const std::size_t m = prob.constraints.size();
  std::vector<double> lam(2 * m, 0.0);  // re, im per constraint
  double mu = 10.0;

  AlObjective al(prob, fpiece, cons, env, lam, &mu, sign, n);

  ComplexMatrix z = starting_point(prob, opts);
  SolveReport rep;
  rep.solution = z;

  double prev_viol = kInf;
  double inner_tol = cons.empty() ? opts.gtol : 1e-2;
  bool stalled = false;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    rep.outer_iterations = outer + 1;
    const int iters_before = rep.inner_iterations;
    double gnorm = 0.0;
    z = descend(al, z, inner_tol, opts.max_inner, prob, rep.inner_iterations,
                gnorm);
    const bool stepped = rep.inner_iterations != iters_before;

    // Residuals and multiplier update at the reached point.
    env.bindings.at(v.name) = z;
    double viol = 0.0;
    std::vector<Channel> res(2 * m, Channel{0.0, ComplexMatrix(n),
                                            ComplexMatrix(n)});
    for (std::size_t k = 0; k < m; ++k) {
      const PieceValue cv = eval_piece(cons[k], env, n);
      split_channels(cv, prob.constraints[k].target, res[2 * k],
                     res[2 * k + 1]);
      viol = std::max(viol, std::hypot(res[2 * k].residual,
                                       res[2 * k + 1].residual));
    }

    bool gate_failed = false;
    if (viol <= opts.ctol) {
      // Fit multipliers of the original objective and measure stationarity.
      const PieceValue fv = eval_piece(fpiece, env, n);
      const ComplexMatrix gf = correct_plain(fv.a, fv.b, v.structure);
      std::vector<ComplexMatrix> gk;
      for (std::size_t k = 0; k < 2 * m; ++k)
        gk.push_back(correct_plain(res[k].a, res[k].b, v.structure));
      std::vector<double> fitted;
      const ComplexMatrix resid = fit_multipliers(gf, gk, fitted);

      rep.solution = z;
      rep.objective_value = real_value(eval_scalar(fpiece.g, env),
                                       "the objective");
      rep.constraint_residual = viol;
      rep.grad_residual = resid.frob_norm();
      rep.multipliers.clear();
      for (std::size_t k = 0; k < m; ++k) {
        rep.multipliers[prob.constraints[k].name + "_re"] = fitted[2 * k];
        rep.multipliers[prob.constraints[k].name + "_im"] = fitted[2 * k + 1];
      }
      const double scale = 1.0 + gf.frob_norm();
      if (rep.grad_residual <= opts.gtol * scale * 10.0 ||
          (cons.empty() && gnorm <= opts.gtol * 10.0)) {
        rep.converged = true;
        rep.message = "converged";
        return rep;
      }
      gate_failed = true;
    }

    // Multiplier update always. The subproblem tolerance tightens every
    // round so updates use increasingly accurate minimizers; the penalty
    // grows only when feasibility lags badly, and stays moderate: the
    // multiplier iteration does the feasibility work, while a stiff penalty
    // would push the certifiable decrease per descent step below the
    // floating-point resolution of the merit value.
    for (std::size_t k = 0; k < 2 * m; ++k) lam[k] -= mu * res[k].residual;
    if (viol > opts.ctol && viol > 0.25 * prev_viol)
      mu = std::min(mu * 10.0, 1e4);
    inner_tol = std::max(opts.gtol, inner_tol * (gate_failed ? 0.05 : 0.2));
    prev_viol = viol;

    const bool cannot_tighten =
        inner_tol <= opts.gtol && (gate_failed || cons.empty() || mu >= 1e4);
    if (!stepped && cannot_tighten) {
      stalled = true;
      break;
    }
  }

  env.bindings.at(v.name) = z;
  rep.solution = z;
  rep.objective_value =
      real_value(eval_scalar(fpiece.g, env), "the objective");
  double viol = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const cxd r = eval_scalar(cons[k].g, env) - prob.constraints[k].target;
    viol = std::max(viol, std::abs(r));
  }
  rep.constraint_residual = viol;
  rep.converged = false;
  rep.message = stalled ? "descent stalled before reaching the tolerances"
                        : "iteration limit reached";
  return rep;
}

StationarityReport check_stationarity(const Problem& prob,
                                      const ComplexMatrix& z) {
  const VariableDecl& v = prob.variable;
  const int n = v.dim;
  if (z.dim() != n)
    throw SolveError("candidate dimension does not match the variable");

  EvalEnv env;
  env.params = prob.params;
  env.bindings.emplace(v.name, z);

  const Piece fpiece(prob.objective, v);
  const std::size_t m = prob.constraints.size();

  StationarityReport out;
  out.objective_value =
      real_value(eval_scalar(fpiece.g, env), "the objective");

  std::vector<Channel> res(2 * m,
                           Channel{0.0, ComplexMatrix(n), ComplexMatrix(n)});
  for (std::size_t k = 0; k < m; ++k) {
    const Piece ck(prob.constraints[k].expr, v);
    const PieceValue cv = eval_piece(ck, env, n);
    split_channels(cv, prob.constraints[k].target, res[2 * k],
                   res[2 * k + 1]);
    out.constraint_residual =
        std::max(out.constraint_residual,
                 std::hypot(res[2 * k].residual, res[2 * k + 1].residual));
  }

  const PieceValue fv = eval_piece(fpiece, env, n);
  const ComplexMatrix gf = correct_plain(fv.a, fv.b, v.structure);
  out.gradient_norm = gf.frob_norm();
  std::vector<ComplexMatrix> gk;
  gk.reserve(2 * m);
  for (std::size_t k = 0; k < 2 * m; ++k)
    gk.push_back(correct_plain(res[k].a, res[k].b, v.structure));
  std::vector<double> fitted;
  out.grad_residual = fit_multipliers(gf, gk, fitted).frob_norm();
  for (std::size_t k = 0; k < m; ++k) {
    out.multipliers[prob.constraints[k].name + "_re"] = fitted[2 * k];
    out.multipliers[prob.constraints[k].name + "_im"] = fitted[2 * k + 1];
  }
  return out;
}

// ---- Closed forms ----

PurityResult purity_minimum(int n) {
  if (n < 1) throw SolveError("dimension must be positive");
  return {ComplexMatrix::scaled_identity(n, 1.0 / n), 2.0 / n, 1.0 / n};
}

EntropyResult entropy_maximum(int n) {
  if (n < 1) throw SolveError("dimension must be positive");
  return {ComplexMatrix::scaled_identity(n, 1.0 / n), std::log(double(n)) - 1.0,
          std::log(double(n))};
}

GibbsResult gibbs_state(const ComplexMatrix& h, double energy,
                        double beta_tol) {
  const HermEig eig = hermitian_eig(h);
  const int n = h.dim();
  const double h_min = eig.values.front();
  const double h_max = eig.values.back();
  if (!(energy > h_min && energy < h_max))
    throw InfeasibleError(
        "target energy must lie strictly between the extreme eigenvalues");

  // Mean energy under weights exp(-beta h_i), stabilized by shifting the
  // largest exponent to zero.
  auto mean_energy = [&](double beta) {
    double xmax = -kInf;
    for (double w : eig.values) xmax = std::max(xmax, -beta * w);
    double zsum = 0.0, esum = 0.0;
    for (double w : eig.values) {
      const double e = std::exp(-beta * w - xmax);
      zsum += e;
      esum += e * w;
    }
    return esum / zsum;
  };

  // E(beta) decreases from h_max to h_min; bracket then bisect.
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 400 && mean_energy(lo) < energy; ++i) lo *= 2.0;
  for (int i = 0; i < 400 && mean_energy(hi) > energy; ++i) hi *= 2.0;
  if (!(mean_energy(lo) >= energy && mean_energy(hi) <= energy))
    throw InfeasibleError("failed to bracket the inverse temperature");
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= beta_tol * std::max(1.0, std::abs(mid))) break;
    (mean_energy(mid) >= energy ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);

  double xmax = -kInf;
  for (double w : eig.values) xmax = std::max(xmax, -beta * w);
  double zsum = 0.0;
  std::vector<double> p(eig.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(-beta * eig.values[i] - xmax);
    zsum += p[i];
  }
  double achieved = 0.0, entropy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] /= zsum;
    achieved += p[i] * eig.values[i];
    if (p[i] > 1e-300) entropy -= p[i] * std::log(p[i]);
  }
  GibbsResult out{ComplexMatrix(n), beta, xmax + std::log(zsum) - 1.0,
                  achieved, entropy};
  out.rho = eig_apply(eig, p);
  return out;
}

namespace {

FrobeniusResult finish_fit(const ComplexMatrix& l, const ComplexMatrix& t,
                           double lambda, cxd eta) {
  return {t, lambda, eta, (t - l).frob_norm()};
}

}  // namespace

FrobeniusResult frobenius_fit(const ComplexMatrix& l, double c_norm,
                              cxd d_trace) {
  const int n = l.dim();
  if (!(c_norm > 0.0)) throw InfeasibleError("norm target must be positive");
  const cxd trl = l.trace();
  const double num = l.frob_norm_sq() - std::norm(trl) / n;
  const double den = c_norm * c_norm - std::norm(d_trace) / n;
  if (den <= 0.0)
    throw InfeasibleError(
        "norm target too small for the trace target: need C^2 > |D|^2 / n");
  if (num <= 1e-14 * std::max(1.0, l.frob_norm_sq()))
    throw InfeasibleError(
        "input is a multiple of the identity; the fit is not unique");
  const double s_abs = std::sqrt(num / den);

  FrobeniusResult best{ComplexMatrix(n), 0.0, cxd(0.0, 0.0), kInf};
  for (const double s : {s_abs, -s_abs}) {
    const cxd eta = (trl - d_trace * s) / double(n);
    ComplexMatrix t = l;
    for (int i = 0; i < n; ++i) t.add_at(i, i, -eta);
    t = t.scaled(1.0 / s);
    const FrobeniusResult cand = finish_fit(l, t, s - 1.0, eta);
    if (cand.distance < best.distance) best = cand;
  }
  return best;
}

FrobeniusResult frobenius_fit_norm(const ComplexMatrix& l, double c_norm) {
  if (!(c_norm > 0.0)) throw InfeasibleError("norm target must be positive");
  const double ln = l.frob_norm();
  if (ln <= 0.0)
    throw InfeasibleError("cannot scale the zero matrix to a norm");
  const double s = ln / c_norm;
  return finish_fit(l, l.scaled(1.0 / s), s - 1.0, cxd(0.0, 0.0));
}

FrobeniusResult frobenius_fit_trace(const ComplexMatrix& l, cxd d_trace) {
  const int n = l.dim();
  const cxd eta = (l.trace() - d_trace) / double(n);
  ComplexMatrix t = l;
  for (int i = 0; i < n; ++i) t.add_at(i, i, -eta);
  return finish_fit(l, t, 0.0, eta);
}

}  // namespace wirt
