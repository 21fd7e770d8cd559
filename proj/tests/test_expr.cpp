#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "wirt/expr.hpp"
#include "wirt/linalg.hpp"
#include "wirt/parse.hpp"
#include "wirt/printer.hpp"
#include "wirt/random.hpp"
#include "wirt/rng.hpp"

using namespace wirt;

namespace {

const std::vector<VariableDecl>& test_decls() {
  static const std::vector<VariableDecl> decls = {
      {"Z", 3, StructureClass::Unstructured},
      {"W", 3, StructureClass::Unstructured},
  };
  return decls;
}

ScalarExpr cparse(const std::string& text) {
  return canonicalize(parse(text, test_decls(), 3));
}

MatrixExpr cparse_m(const std::string& text) {
  return canonicalize(parse_matrix(text, test_decls(), 3));
}

// Random raw trees over Z, W (dim 3). parseable=false additionally allows
// Series nodes, which have no surface syntax.
struct Gen {
  Rng rng;
  bool parseable = true;

  explicit Gen(uint64_t seed, bool p = true) : rng(seed), parseable(p) {}

  cxd lit() {
    switch (rng.uniform_int(0, 5)) {
      case 0: return cxd(rng.uniform_int(-3, 3), 0.0);
      case 1: return cxd(0.0, rng.uniform_int(-2, 2));
      case 2: return cxd(0.5 * rng.uniform_int(-4, 4), 0.0);
      case 3: return cxd(rng.gauss(), rng.gauss());
      case 4: return cxd(rng.gauss(), 0.0);
      default: return cxd(1.0, 0.0);
    }
  }

  MatrixExpr leaf() {
    switch (rng.uniform_int(0, 5)) {
      case 0: return m_var("Z", 3);
      case 1: return m_var("W", 3);
      case 2: return m_conj(m_var("Z", 3));
      case 3: return m_identity(3);
      case 4: return m_const(random_matrix(3, rng));
      default: return m_smul(s_lit(lit()), m_identity(3));
    }
  }

  MatrixExpr mat(int depth) {
    if (depth <= 0) return leaf();
    switch (rng.uniform_int(0, 10)) {
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
        const int pick =
            int(rng.uniform_int(0, parseable ? 2 : 3));
        AnalyticFunction f = AnalyticFunction::exp();
        if (pick == 1) f = AnalyticFunction::log();
        if (pick == 2) f = AnalyticFunction::xlogx();
        if (pick == 3) {
          std::vector<cxd> cs;
          for (int i = 0, k = int(rng.uniform_int(1, 3)); i < k; ++i)
            cs.push_back(lit());
          f = AnalyticFunction::series(std::move(cs));
        }
        return m_apply(f, mat(depth - 1));
      }
      case 9:
        return m_apply(AnalyticFunction::power(int(rng.uniform_int(-2, -1))),
                       mat(depth - 1));
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

TEST_CASE("parser recognizes the surface language") {
  // Numbers, parameters, precedence.
  ScalarExpr s = cparse("2*tr(Z) + 3.5*tr(W)");
  CHECK(equal(s, cparse("tr(Z)*2 + tr(W)*3.5")));
  CHECK(equal(cparse("1 + 2*3"), canonicalize(s_lit(7.0))));
  CHECK(equal(cparse("(1 + 2)*3"), canonicalize(s_lit(9.0))));
  CHECK(equal(cparse("2i*3i"), canonicalize(s_lit(-6.0))));
  CHECK(equal(cparse("1e2"), canonicalize(s_lit(100.0))));
  CHECK(equal(cparse("-tr(Z)"), cparse("0 - tr(Z)")));
  CHECK(equal(cparse("@beta*tr(Z)"), cparse("tr(Z)*@beta")));

  // Matrix sublanguage, adjoint and transpose sugar, powers.
  CHECK(equal(cparse("tr(adj(Z)*Z)"), cparse("tr(tp(conj(Z))*Z)")));
  CHECK(equal(cparse("frob2(Z)"), cparse("tr(adj(Z)*Z)")));
  CHECK(equal(cparse("tr(Z^3)"), cparse("tr(Z*Z*Z)")));
  CHECK(equal(cparse("tr(Z^-2)"), cparse("tr((Z^-1)*(Z^-1))")));
  CHECK(equal(cparse("tr((Z + W)^2)"), cparse("tr((Z + W)*(Z + W))")));

  // Scalar atoms lift to s*I in matrix position.
  CHECK(equal(cparse("tr(Z + 2*I)"), cparse("tr(Z) + 6")));
  CHECK(equal(cparse("tr(W*(Z - tr(Z)*I))"),
              cparse("tr(W*Z) - tr(Z)*tr(W)")));

  // Entry and matrix literals.
  CHECK(equal(cparse("entry(Z + W, 0, 1)"),
              cparse("entry(Z, 0, 1) + entry(W, 0, 1)")));
  CHECK(equal(canonicalize(parse_matrix("mat(2; 1, 0, 0, 1)", test_decls())),
              canonicalize(m_identity(2))));
  CHECK(equal(cparse_m("mat(3; 2, 0, 0, 0, 2, 0, 0, 0, 2)"),
              cparse_m("2*I")));

  // Dimension inference from declared variables.
  MatrixExpr m = parse_matrix("2*I", test_decls(), 4);
  CHECK(m->dim == 4);
}

TEST_CASE("parser reports errors with positions") {
  CHECK_THROWS_AS(parse("tr(Q)", test_decls()), DeclError);
  CHECK_THROWS_AS(parse("tr(Z", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("tr(Z))", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("Z", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("tr(Z^1.5)", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("2 + ", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("tr(2*I)", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("1.e3", test_decls()), ParseError);
  CHECK_THROWS_AS(parse("3iq", test_decls()), ParseError);
  CHECK_THROWS_AS(parse_matrix("mat(2; 1, 2, 3)", test_decls()), ParseError);
  CHECK_THROWS_AS(parse_matrix("mat(2; tr(Z), 0, 0, 1)", test_decls()),
                  ParseError);
  CHECK_THROWS_AS(parse_matrix("mat(0; )", test_decls()), ParseError);
  CHECK_THROWS_AS(parse_matrix("Z + mat(2; 1, 0, 0, 1)", test_decls()),
                  ShapeError);
  CHECK_THROWS_AS(parse_matrix("I", test_decls()), ParseError);

  try {
    parse("tr(Z) + &", test_decls());
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("offset 8") != std::string::npos);
  }
}

TEST_CASE("canonical golden forms") {
  // Adjoint becomes transpose of the conjugate leaf.
  CHECK(equal(canonicalize(m_adjoint(m_var("Z", 3))),
              m_transpose(m_var_conj("Z", 3))));

  // Trace is cyclic: all rotations share one canonical form.
  ScalarExpr t1 = cparse("tr(Z*W*Z)");
  CHECK(equal(t1, cparse("tr(W*Z*Z)")));
  CHECK(equal(t1, cparse("tr(Z*Z*W)")));

  // Transposes vanish under trace.
  CHECK(equal(cparse("tr(tp(Z))"), cparse("tr(Z)")));
  CHECK(equal(cparse("tr(tp(W*Z))"), cparse("tr(Z*W)")));

  // Sum collapsing and numeric folding.
  CHECK(equal(cparse_m("Z + Z"), cparse_m("2*Z")));
  CHECK(equal(cparse_m("Z - Z"), canonicalize(m_zero(3))));
  CHECK(equal(cparse_m("Z + I - I"), canonicalize(m_var("Z", 3))));
  CHECK(equal(cparse_m("I + I"), cparse_m("2*I")));
  CHECK(equal(canonicalize(s_trace(m_smul(s_lit(2.0), m_identity(3)))),
              s_lit(6.0)));

  // Scalar multiples hoist through products.
  CHECK(equal(cparse_m("Z*(2*W)"), cparse_m("2*(Z*W)")));
  CHECK(equal(cparse_m("(2*Z)*(3*W)"), cparse_m("6*(Z*W)")));

  // Determinant rules.
  CHECK(equal(cparse("det(2*Z)"), cparse("8*det(Z)")));
  CHECK(equal(cparse("det(Z*W)"), cparse("det(W)*det(Z)")));
  CHECK(equal(cparse("det(Z^2)"), cparse("det(Z)*det(Z)")));
  CHECK(equal(cparse("det(tp(Z))"), cparse("det(Z)")));

  // Hadamard with the identity keeps only the diagonal.
  CHECK(equal(cparse_m("had(I, tp(Z))"), cparse_m("had(I, Z)")));
  CHECK(equal(cparse_m("had(I, I)"), canonicalize(m_identity(3))));
  CHECK(equal(cparse_m("had(Z, 2*W)"), cparse_m("2*had(W, Z)")));

  // Analytic simplifications.
  CHECK(equal(cparse_m("exp(0*Z)"), canonicalize(m_identity(3))));
  CHECK(equal(cparse_m("log(I)"), canonicalize(m_zero(3))));
  CHECK(equal(cparse_m("xlogx(I)"), canonicalize(m_zero(3))));
  CHECK(equal(cparse_m("(Z^-1)^-1"), canonicalize(m_var("Z", 3))));
  CHECK(equal(cparse_m("(Z^2)^-3"),
              canonicalize(m_apply(AnalyticFunction::power(-6),
                                   m_var("Z", 3)))));
  CHECK(equal(cparse_m("(2*Z)^-1"), cparse_m("0.5*(Z^-1)")));
  CHECK(equal(cparse_m("exp(2*I)"),
              canonicalize(m_smul(s_lit(std::exp(cxd(2.0))),
                                  m_identity(3)))));
  CHECK(equal(cparse_m("log(2*I)"),
              canonicalize(m_smul(s_lit(std::log(cxd(2.0))),
                                  m_identity(3)))));
  CHECK_THROWS_AS(cparse_m("log(0*Z)"), EvalError);
  CHECK_THROWS_AS(cparse_m("(0*Z)^-1"), EvalError);

  // The entropy kernel fuses.
  CHECK(equal(cparse("tr(Z*log(Z))"),
              canonicalize(s_trace(
                  m_apply(AnalyticFunction::xlogx(), m_var("Z", 3))))));
  CHECK(equal(cparse("tr(log(Z)*Z)"), cparse("tr(Z*log(Z))")));

  // Matrix powers of constants fold.
  CHECK(equal(canonicalize(parse_matrix("mat(2; 0, 1, 1, 0)^2", test_decls())),
              canonicalize(m_identity(2))));
}

TEST_CASE("free variables track conjugation parity") {
  auto fv = free_vars(cparse("tr(Z*conj(W)) + tr(adj(Z)*Z)"));
  CHECK(fv.size() == 2);
  CHECK(fv["Z"].plain);
  CHECK(fv["Z"].conjugated);
  CHECK(fv["W"].conjugated);
  CHECK(!fv["W"].plain);

  // conj(conj(Z)) is a plain use.
  auto fv2 = free_vars(parse("tr(conj(conj(Z)))", test_decls()));
  CHECK(fv2["Z"].plain);
  CHECK(!fv2["Z"].conjugated);

  CHECK(var_dim(cparse("tr(Z)"), "Z") == 3);
  CHECK(var_dim(cparse("tr(Z)"), "W") == 0);
}

TEST_CASE("substitution and structural conjugation") {
  const ScalarExpr f = parse("tr(Z*W) + tr(conj(Z))", test_decls());
  std::map<std::string, MatrixExpr> repl = {{"Z", m_var("W", 3)}};
  CHECK(equal(canonicalize(substitute(f, repl)),
              cparse("tr(W*W) + tr(conj(W))")));

  const ScalarExpr g = parse("@mu*tr(Z) + 2", test_decls());
  CHECK(equal(canonicalize(substitute_params(g, {{"mu", 3.0}})),
              cparse("3*tr(Z) + 2")));

  // sconj swaps plain and conjugated uses and conjugates literals.
  CHECK(equal(canonicalize(sconj(parse("2i*tr(Z)", test_decls()))),
              cparse("-2i*tr(conj(Z))")));
  CHECK(equal(canonicalize(sconj(parse("tr(adj(Z)*Z)", test_decls()))),
              cparse("tr(adj(Z)*Z)")));
  CHECK(equal(canonicalize(sconj(parse("@a*det(Z)", test_decls()))),
              cparse("@a*det(conj(Z))")));
}

TEST_CASE("structural comparison is a strict total order on samples") {
  Gen gen(421, false);
  std::vector<ScalarExpr> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(gen.scal(2));
  for (const auto& a : xs) {
    CHECK(compare(a, a) == 0);
    for (const auto& b : xs) {
      const int ab = compare(a, b);
      const int ba = compare(b, a);
      CHECK(((ab == 0 && ba == 0) || (ab < 0 && ba > 0) ||
             (ab > 0 && ba < 0)));
      CHECK(equal(a, b) == (ab == 0));
    }
  }
}

TEST_CASE("canonicalization is idempotent on generated trees") {
  Gen gen(7, false);
  int done = 0;
  while (done < 250) {
    const ScalarExpr raw = gen.scal(3);
    ScalarExpr c;
    try {
      c = canonicalize(raw);
    } catch (const EvalError&) {
      continue;  // statically singular subtree (log or inverse of zero)
    }
    CHECK(equal(canonicalize(c), c));
    ++done;
  }
}

TEST_CASE("printed canonical scalars parse back to the same form") {
  Gen gen(99, true);
  int done = 0;
  while (done < 250) {
    const ScalarExpr raw = gen.scal(3);
    ScalarExpr c;
    try {
      c = canonicalize(raw);
    } catch (const EvalError&) {
      continue;
    }
    const std::string text = pretty_print(c);
    CAPTURE(text);
    const ScalarExpr back = canonicalize(parse(text, test_decls(), 3));
    CHECK(equal(back, c));
    ++done;
  }
}

TEST_CASE("printed canonical matrices parse back to the same form") {
  Gen gen(1234, true);
  int done = 0;
  while (done < 250) {
    const MatrixExpr raw = gen.mat(3);
    MatrixExpr c;
    try {
      c = canonicalize(raw);
    } catch (const EvalError&) {
      continue;
    }
    const std::string text = pretty_print(c);
    CAPTURE(text);
    const MatrixExpr back = canonicalize(parse_matrix(text, test_decls(), 3));
    CHECK(equal(back, c));
    ++done;
  }
}

TEST_CASE("printer output samples") {
  CHECK(pretty_print(cparse("tr(Z) - tr(Z)")) == "0");
  CHECK(format_complex(cxd(2.5, 0.0)) == "2.5");
  CHECK(format_complex(cxd(0.0, -2.0)) == "-2i");
  CHECK(format_complex(cxd(1.0, 2.0)) == "(1 + 2i)");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e100) == "1e+100");

  // A canonical zero matrix prints as plain 0.
  CHECK(pretty_print(canonicalize(m_sub(m_var("Z", 3), m_var("Z", 3)))) ==
        "0");
  CHECK(pretty_print(canonicalize(m_adjoint(m_var("Z", 3)))) == "adj(Z)");
}

TEST_CASE("factories enforce shapes") {
  CHECK_THROWS_AS(m_add(m_var("Z", 3), m_var("Q", 4)), ShapeError);
  CHECK_THROWS_AS(m_mul(m_var("Z", 3), m_identity(2)), ShapeError);
  CHECK_THROWS_AS(m_hadamard(m_var("Z", 3), m_var("Q", 2)), ShapeError);
  CHECK_THROWS_AS(s_entry(m_var("Z", 3), 3, 0), ShapeError);
  CHECK_THROWS_AS(s_entry(m_var("Z", 3), 0, -1), ShapeError);
  CHECK_THROWS_AS(m_pow(m_var("Z", 3), -1), ShapeError);
}
