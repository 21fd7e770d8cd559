#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "wirt/eval.hpp"
#include "wirt/expr.hpp"
#include "wirt/linalg.hpp"
#include "wirt/parse.hpp"
#include "wirt/random.hpp"
#include "wirt/rng.hpp"

using namespace wirt;

namespace {

const std::vector<VariableDecl>& eval_decls() {
  static const std::vector<VariableDecl> decls = {
      {"Z", 2, StructureClass::Unstructured},
      {"W", 2, StructureClass::Unstructured},
  };
  return decls;
}

EvalEnv basic_env() {
  EvalEnv env;
  ComplexMatrix z(2);
  z.set(0, 0, {1.0, 0.0});
  z.set(0, 1, {2.0, -1.0});
  z.set(1, 0, {3.0, 0.5});
  z.set(1, 1, {4.0, 0.0});
  ComplexMatrix w(2);
  w.set(0, 0, {0.0, 1.0});
  w.set(0, 1, {1.0, 0.0});
  w.set(1, 0, {-1.0, 0.0});
  w.set(1, 1, {2.0, 2.0});
  env.bindings.emplace("Z", z);
  env.bindings.emplace("W", w);
  env.params["a"] = 1.5;
  return env;
}

cxd ev(const std::string& text, const EvalEnv& env) {
  return eval_scalar(parse(text, eval_decls(), 2), env);
}

bool close(cxd a, cxd b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

ComplexMatrix diag2(cxd a, cxd b) {
  ComplexMatrix m(2);
  m.set(0, 0, a);
  m.set(1, 1, b);
  return m;
}

}  // namespace

TEST_CASE("scalar evaluation on bound matrices") {
  EvalEnv env = basic_env();
  const ComplexMatrix& z = env.bindings.at("Z");
  const ComplexMatrix& w = env.bindings.at("W");

  CHECK(close(ev("2*3 + 1", env), {7.0, 0.0}));
  CHECK(close(ev("(1 + 2i)*(1 - 2i)", env), {5.0, 0.0}));
  CHECK(close(ev("tr(Z)", env), z(0, 0) + z(1, 1)));
  CHECK(close(ev("det(Z)", env), z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0)));
  CHECK(close(ev("entry(Z, 0, 1)", env), z(0, 1)));
  CHECK(close(ev("entry(tp(Z), 0, 1)", env), z(1, 0)));
  CHECK(close(ev("entry(conj(Z), 1, 0)", env), std::conj(z(1, 0))));
  CHECK(close(ev("entry(adj(Z), 1, 0)", env), std::conj(z(0, 1))));
  CHECK(close(ev("frob2(Z)", env), {z.frob_norm_sq(), 0.0}));
  CHECK(close(ev("tr(Z*W)", env), (z * w).trace()));
  CHECK(close(ev("tr(had(Z, W))", env), z.hadamard(w).trace()));
  CHECK(close(ev("@a * tr(Z)", env), 1.5 * (z(0, 0) + z(1, 1))));
  CHECK(close(ev("tr(Z^3)", env), z.pow(3).trace()));
  CHECK(close(ev("det(Z^-1)", env), 1.0 / det(z)));
  CHECK(close(ev("-tr(Z) + tr(Z)", env), {0.0, 0.0}));
}

TEST_CASE("evaluation error conditions") {
  EvalEnv env = basic_env();

  CHECK_THROWS_AS(eval_scalar(s_trace(m_var("Q", 2)), env), EvalError);
  CHECK_THROWS_AS(ev("@b * tr(Z)", env), EvalError);

  EvalEnv wrong;
  wrong.bindings.emplace("Z", ComplexMatrix::identity(3));
  CHECK_THROWS_AS(eval_scalar(parse("tr(Z)", eval_decls(), 2), wrong),
                  EvalError);

  EvalEnv sing;
  sing.bindings.emplace("Z", ComplexMatrix::zero(2));
  CHECK_THROWS_AS(eval_scalar(parse("tr(Z^-1)", eval_decls(), 2), sing),
                  EvalError);
  CHECK_THROWS_AS(eval_scalar(parse("tr(log(Z))", eval_decls(), 2), sing),
                  EvalError);
}

TEST_CASE("environment validation names the first problem") {
  const ScalarExpr f = parse("@a * tr(Z*W)", eval_decls(), 2);

  EvalEnv env = basic_env();
  CHECK_NOTHROW(validate_env(f, env));

  EvalEnv missing_var = basic_env();
  missing_var.bindings.erase("W");
  CHECK_THROWS_WITH_AS(validate_env(f, missing_var),
                       "no binding for matrix variable 'W'", EvalError);

  EvalEnv wrong_dim = basic_env();
  wrong_dim.bindings.erase("W");
  wrong_dim.bindings.emplace("W", ComplexMatrix::identity(3));
  CHECK_THROWS_AS(validate_env(f, wrong_dim), EvalError);

  EvalEnv missing_param = basic_env();
  missing_param.params.clear();
  CHECK_THROWS_WITH_AS(validate_env(f, missing_param),
                       "no value for parameter '@a'", EvalError);

  CHECK(parameter_names(f) == std::set<std::string>{"a"});
}

TEST_CASE("analytic functions on diagonal matrices are exact") {
  const ComplexMatrix d = diag2({0.3, 0.0}, {1.7, 0.0});

  const ComplexMatrix e = matrix_function(AnalyticFunction::exp(), d);
  CHECK(close(e(0, 0), std::exp(cxd(0.3, 0.0))));
  CHECK(close(e(1, 1), std::exp(cxd(1.7, 0.0))));
  CHECK(close(e(0, 1), {0.0, 0.0}));

  const ComplexMatrix l = matrix_function(AnalyticFunction::log(), d);
  CHECK(close(l(0, 0), std::log(cxd(0.3, 0.0))));
  CHECK(close(l(1, 1), std::log(cxd(1.7, 0.0))));

  const ComplexMatrix x = matrix_function(AnalyticFunction::xlogx(), d);
  CHECK(close(x(0, 0), 0.3 * std::log(cxd(0.3, 0.0))));
  CHECK(close(x(1, 1), 1.7 * std::log(cxd(1.7, 0.0))));

  const ComplexMatrix p = matrix_function(AnalyticFunction::power(-2), d);
  CHECK(close(p(0, 0), 1.0 / (0.3 * 0.3)));
  CHECK(close(p(1, 1), 1.0 / (1.7 * 1.7)));

  // c0 + c1 x + c2 x^2 by Horner.
  const ComplexMatrix s = matrix_function(
      AnalyticFunction::series({{2.0, 0.0}, {-1.0, 0.0}, {0.5, 0.0}}), d);
  CHECK(close(s(0, 0), 2.0 - 0.3 + 0.5 * 0.3 * 0.3));
  CHECK(close(s(1, 1), 2.0 - 1.7 + 0.5 * 1.7 * 1.7));
}

TEST_CASE("analytic function domain checks on Hermitian arguments") {
  const ComplexMatrix neg = diag2({-1.0, 0.0}, {2.0, 0.0});
  CHECK_THROWS_AS(matrix_function(AnalyticFunction::log(), neg), EvalError);
  CHECK_THROWS_AS(matrix_function(AnalyticFunction::xlogx(), neg), EvalError);

  // A zero eigenvalue is inside the domain of x log x (limit 0) but not log.
  const ComplexMatrix psd = diag2({0.0, 0.0}, {1.0, 0.0});
  CHECK_THROWS_AS(matrix_function(AnalyticFunction::log(), psd), EvalError);
  const ComplexMatrix x = matrix_function(AnalyticFunction::xlogx(), psd);
  CHECK(close(x(0, 0), {0.0, 0.0}));
  CHECK(close(x(1, 1), {0.0, 0.0}));
  CHECK(x.all_finite());
}

TEST_CASE("entropy of a random density matrix matches its spectrum") {
  Rng rng(404);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix rho = random_density(4, rng);
    const ComplexMatrix xl = matrix_function(AnalyticFunction::xlogx(), rho);
    const HermEig e = hermitian_eig(rho);
    double expect = 0.0;
    for (double w : e.values)
      if (w > 1e-300) expect += w * std::log(w);
    CHECK(close(xl.trace(), {expect, 0.0}, 1e-9));
  }
}

TEST_CASE("log and exp invert each other on random arguments") {
  Rng rng(505);
  for (int rep = 0; rep < 5; ++rep) {
    // Hermitian positive definite: spectral path.
    const ComplexMatrix h = random_hpd(3, rng);
    const ComplexMatrix lh = matrix_function(AnalyticFunction::log(), h);
    CHECK(max_abs_diff(exp_series(lh), h) <= 1e-9 * std::max(1.0, h.max_abs()));

    // General non-Hermitian with spectrum near 1: log_general path.
    ComplexMatrix g = random_matrix(3, rng, 0.2);
    for (int i = 0; i < 3; ++i) g.add_at(i, i, {1.0, 0.0});
    const ComplexMatrix lg = matrix_function(AnalyticFunction::log(), g);
    CHECK(max_abs_diff(exp_series(lg), g) <= 1e-9 * std::max(1.0, g.max_abs()));

    // x log x on the same general argument equals g * log(g).
    const ComplexMatrix xg = matrix_function(AnalyticFunction::xlogx(), g);
    CHECK(max_abs_diff(xg, g * lg) <= 1e-10);
  }
}

TEST_CASE("negative matrix powers agree with repeated inversion") {
  Rng rng(606);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix a = random_matrix(3, rng);
    const ComplexMatrix inv = inverse(a);
    const ComplexMatrix p2 = matrix_function(AnalyticFunction::power(-2), a);
    CHECK(max_abs_diff(p2, inv * inv) <= 1e-8 * std::max(1.0, p2.max_abs()));
    const ComplexMatrix p1 = matrix_function(AnalyticFunction::power(-1), a);
    CHECK(max_abs_diff(a * p1, ComplexMatrix::identity(3)) <= 1e-10);
  }
}

namespace {

// Raw random trees over Z, W at dim 3, mirroring the canonicalizer test
// generator but kept shallow so the numeric comparison stays well
// conditioned.
struct EvalGen {
  Rng rng;

  explicit EvalGen(uint64_t seed) : rng(seed) {}

  cxd lit() {
    switch (rng.uniform_int(0, 3)) {
      case 0: return cxd(rng.uniform_int(-3, 3), 0.0);
      case 1: return cxd(0.0, rng.uniform_int(-2, 2));
      case 2: return cxd(0.4 * rng.gauss(), 0.4 * rng.gauss());
      default: return cxd(1.0, 0.0);
    }
  }

  MatrixExpr leaf() {
    switch (rng.uniform_int(0, 5)) {
      case 0: return m_var("Z", 3);
      case 1: return m_var("W", 3);
      case 2: return m_conj(m_var("Z", 3));
      case 3: return m_identity(3);
      case 4: return m_const(random_matrix(3, rng, 0.5));
      default: return m_smul(s_lit(lit()), m_identity(3));
    }
  }

  MatrixExpr mat(int depth) {
    if (depth <= 0) return leaf();
    switch (rng.uniform_int(0, 9)) {
      case 0: {
        std::vector<MatrixExpr> t;
        for (int i = 0, k = int(rng.uniform_int(2, 3)); i < k; ++i)
          t.push_back(mat(depth - 1));
        return m_add(std::move(t));
      }
      case 1: {
        std::vector<MatrixExpr> t;
        for (int i = 0, k = int(rng.uniform_int(2, 3)); i < k; ++i)
          t.push_back(mat(depth - 1));
        return m_mul(std::move(t));
      }
      case 2: return m_smul(scal(depth - 1), mat(depth - 1));
      case 3: return m_transpose(mat(depth - 1));
      case 4: return m_conj(mat(depth - 1));
      case 5: return m_adjoint(mat(depth - 1));
      case 6: return m_hadamard(mat(depth - 1), mat(depth - 1));
      case 7: return m_pow(mat(depth - 1), int(rng.uniform_int(0, 3)));
      case 8: {
        const int pick = int(rng.uniform_int(0, 2));
        AnalyticFunction f = AnalyticFunction::exp();
        if (pick == 1) {
          std::vector<cxd> cs;
          for (int i = 0, k = int(rng.uniform_int(1, 3)); i < k; ++i)
            cs.push_back(lit());
          f = AnalyticFunction::series(std::move(cs));
        }
        if (pick == 2) f = AnalyticFunction::log();
        return m_apply(f, mat(depth - 1));
      }
      default: return leaf();
    }
  }

  ScalarExpr scal(int depth) {
    if (depth <= 0) {
      switch (rng.uniform_int(0, 3)) {
        case 0: return s_lit(lit());
        case 1: return s_param("a");
        case 2: return s_trace(mat(0));
        default: return s_entry(mat(0), int(rng.uniform_int(0, 2)),
                                int(rng.uniform_int(0, 2)));
      }
    }
    switch (rng.uniform_int(0, 6)) {
      case 0: {
        std::vector<ScalarExpr> t;
        for (int i = 0, k = int(rng.uniform_int(2, 3)); i < k; ++i)
          t.push_back(scal(depth - 1));
        return s_add(std::move(t));
      }
      case 1: {
        std::vector<ScalarExpr> t;
        for (int i = 0, k = int(rng.uniform_int(2, 3)); i < k; ++i)
          t.push_back(scal(depth - 1));
        return s_mul(std::move(t));
      }
      case 2: return s_neg(scal(depth - 1));
      case 3: return s_trace(mat(depth - 1));
      case 4: return s_det(mat(depth - 1));
      case 5: return s_entry(mat(depth - 1), int(rng.uniform_int(0, 2)),
                             int(rng.uniform_int(0, 2)));
      default: return s_lit(lit());
    }
  }
};

}  // namespace

TEST_CASE("canonicalization preserves numeric value") {
  // The rewriting engine may only change how an expression is written, never
  // what it computes. Rewrites can also widen or narrow the numeric domain
  // (folding log(s*I) to a literal skips the matrix branch cut), so cases
  // where either side fails to evaluate are skipped and counted.
  EvalGen gen(2026);
  int compared = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const ScalarExpr raw = gen.scal(3);

    EvalEnv env;
    env.bindings.emplace("Z", random_matrix(3, gen.rng, 0.6));
    env.bindings.emplace("W", random_matrix(3, gen.rng, 0.6));
    env.params["a"] = gen.rng.gauss();

    ScalarExpr canon;
    try {
      canon = canonicalize(raw);
    } catch (const EvalError&) {
      continue;
    }

    cxd v_raw, v_canon;
    try {
      v_raw = eval_scalar(raw, env);
      v_canon = eval_scalar(canon, env);
    } catch (const EvalError&) {
      continue;
    }
    if (!(std::isfinite(v_raw.real()) && std::isfinite(v_raw.imag())))
      continue;

    ++compared;
    const double tol = 1e-7 * std::max(1.0, std::abs(v_raw));
    CHECK_MESSAGE(std::abs(v_raw - v_canon) <= tol,
                  "rep ", rep, ": raw=", v_raw.real(), "+", v_raw.imag(),
                  "i canon=", v_canon.real(), "+", v_canon.imag(), "i");
  }
  // The property must not be vacuous.
  CHECK(compared >= 150);
}
