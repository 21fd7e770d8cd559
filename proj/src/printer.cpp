#include "wirt/printer.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace wirt {

namespace {

// Precedence levels shared by both grammars. A node prints parenthesized
// when its own level is below what the context requires.
constexpr int kAdd = 0;
constexpr int kMul = 1;
constexpr int kPow = 2;
constexpr int kAtom = 3;

void print_s(std::ostream& os, const ScalarExpr& e, int need);
void print_m(std::ostream& os, const MatrixExpr& e, int need);

bool is_negative_real(cxd v) {
  if (v.imag() == 0.0) return v.real() < 0.0;
  return v.real() == 0.0 && v.imag() < 0.0;
}

// Splits a leading minus off an additive term so sums print "a - b"
// rather than "a + -1*b". Returns false when the term has no such form.
bool print_negated_s(std::ostream& os, const ScalarExpr& e, int need) {
  if (e->op == ScalarOp::Neg) {
    print_s(os, e->children[0], need);
    return true;
  }
  if (e->op == ScalarOp::Lit && is_negative_real(e->lit)) {
    print_s(os, s_lit(-e->lit), need);
    return true;
  }
  if (e->op == ScalarOp::Mul && !e->children.empty() &&
      e->children[0]->op == ScalarOp::Lit &&
      is_negative_real(e->children[0]->lit)) {
    std::vector<ScalarExpr> ch = e->children;
    ch[0] = s_lit(-ch[0]->lit);
    if (ch[0]->lit == cxd(1.0, 0.0) && ch.size() == 2) {
      print_s(os, ch[1], need);
    } else {
      bool first = true;
      for (const auto& c : ch) {
        if (!first) os << "*";
        print_s(os, c, kPow);
        first = false;
      }
    }
    return true;
  }
  return false;
}

bool print_negated_m(std::ostream& os, const MatrixExpr& e, int need) {
  if (e->op == MatrixOp::ScalarMul && e->scale->op == ScalarOp::Lit &&
      is_negative_real(e->scale->lit)) {
    const cxd flipped = -e->scale->lit;
    if (flipped == cxd(1.0, 0.0))
      print_m(os, e->children[0], need);
    else
      print_m(os, m_smul(s_lit(flipped), e->children[0]), need);
    return true;
  }
  return false;
}

void print_s(std::ostream& os, const ScalarExpr& e, int need) {
  switch (e->op) {
    case ScalarOp::Lit: {
      const bool mixed = e->lit.real() != 0.0 && e->lit.imag() != 0.0;
      if (!mixed && is_negative_real(e->lit) && need > kMul) {
        os << "(" << format_complex(e->lit) << ")";
      } else {
        os << format_complex(e->lit);
      }
      return;
    }
    case ScalarOp::Param:
      os << "@" << e->name;
      return;
    case ScalarOp::Trace:
      os << "tr(";
      print_m(os, e->arg, kAdd);
      os << ")";
      return;
    case ScalarOp::Det:
      os << "det(";
      print_m(os, e->arg, kAdd);
      os << ")";
      return;
    case ScalarOp::Entry:
      os << "entry(";
      print_m(os, e->arg, kAdd);
      os << ", " << e->row << ", " << e->col << ")";
      return;
    case ScalarOp::Bilinear:
      // Debug form; Bilinear carries vectors and has no surface syntax.
      os << "bilinear[" << (e->conj_left ? "adj" : "tp") << "; ";
      print_m(os, e->arg, kAdd);
      os << "]";
      return;
    case ScalarOp::Neg:
      if (need > kMul) os << "(";
      os << "-";
      print_s(os, e->children[0], kAtom);
      if (need > kMul) os << ")";
      return;
    case ScalarOp::Mul: {
      if (need > kMul) os << "(";
      bool first = true;
      for (const auto& c : e->children) {
        if (!first) os << "*";
        print_s(os, c, kPow);
        first = false;
      }
      if (need > kMul) os << ")";
      return;
    }
    case ScalarOp::Add: {
      if (need > kAdd) os << "(";
      bool first = true;
      for (const auto& t : e->children) {
        if (!first) {
          std::ostringstream neg;
          if (print_negated_s(neg, t, kMul)) {
            os << " - " << neg.str();
            continue;
          }
          os << " + ";
        }
        print_s(os, t, kMul);
        first = false;
      }
      if (need > kAdd) os << ")";
      return;
    }
  }
}

// True when the value is c*I for some scalar c (returned through `c`).
bool scaled_identity_value(const ComplexMatrix& m, cxd& c) {
  c = m(0, 0);
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (m(i, j) != (i == j ? c : cxd(0.0, 0.0))) return false;
    }
  }
  return true;
}

void print_const(std::ostream& os, const ComplexMatrix& m, int need) {
  cxd c;
  if (m.max_abs() == 0.0) {
    os << "0";
    return;
  }
  if (scaled_identity_value(m, c)) {
    if (c == cxd(1.0, 0.0)) {
      os << "I";
      return;
    }
    if (need > kMul) os << "(";
    if (is_negative_real(c)) {
      os << "-";
      c = -c;
    }
    os << format_complex(c) << "*I";
    if (need > kMul) os << ")";
    return;
  }
  os << "mat(" << m.dim() << ";";
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      os << (i == 0 && j == 0 ? " " : ", ") << format_complex(m(i, j));
    }
  }
  os << ")";
}

// Scale factors sit at matom position inside a term, so anything looser
// than an atom is parenthesized.
void print_scale(std::ostream& os, const ScalarExpr& s) {
  print_s(os, s, kAtom);
}

void print_m(std::ostream& os, const MatrixExpr& e, int need) {
  switch (e->op) {
    case MatrixOp::Const:
      print_const(os, *e->value, need);
      return;
    case MatrixOp::Identity:
      os << "I";
      return;
    case MatrixOp::Var:
      os << e->name;
      return;
    case MatrixOp::VarConj:
      os << "conj(" << e->name << ")";
      return;
    case MatrixOp::Transpose: {
      const auto& c = e->children[0];
      if (c->op == MatrixOp::Var) {
        os << "tp(" << c->name << ")";
      } else if (c->op == MatrixOp::VarConj) {
        os << "adj(" << c->name << ")";
      } else {
        os << "tp(";
        print_m(os, c, kAdd);
        os << ")";
      }
      return;
    }
    case MatrixOp::Conjugate:
      os << "conj(";
      print_m(os, e->children[0], kAdd);
      os << ")";
      return;
    case MatrixOp::Adjoint:
      os << "adj(";
      print_m(os, e->children[0], kAdd);
      os << ")";
      return;
    case MatrixOp::Add: {
      if (need > kAdd) os << "(";
      bool first = true;
      for (const auto& t : e->children) {
        if (!first) {
          std::ostringstream neg;
          if (print_negated_m(neg, t, kMul)) {
            os << " - " << neg.str();
            continue;
          }
          os << " + ";
        }
        print_m(os, t, kMul);
        first = false;
      }
      if (need > kAdd) os << ")";
      return;
    }
    case MatrixOp::ScalarMul: {
      if (need > kMul) os << "(";
      ScalarExpr s = e->scale;
      if (s->op == ScalarOp::Lit && is_negative_real(s->lit)) {
        os << "-";
        s = s_lit(-s->lit);
      }
      print_scale(os, s);
      os << "*";
      print_m(os, e->children[0], kPow);
      if (need > kMul) os << ")";
      return;
    }
    case MatrixOp::MatMul: {
      if (need > kMul) os << "(";
      bool first = true;
      for (const auto& c : e->children) {
        if (!first) os << "*";
        print_m(os, c, kPow);
        first = false;
      }
      if (need > kMul) os << ")";
      return;
    }
    case MatrixOp::Hadamard:
      os << "had(";
      print_m(os, e->children[0], kAdd);
      os << ", ";
      print_m(os, e->children[1], kAdd);
      os << ")";
      return;
    case MatrixOp::MatPow:
      if (need > kPow) os << "(";
      print_m(os, e->children[0], kAtom);
      os << "^" << e->exponent;
      if (need > kPow) os << ")";
      return;
    case MatrixOp::Apply: {
      const AnalyticFunction& f = e->func;
      switch (f.kind) {
        case FuncKind::Exp:
          os << "exp(";
          print_m(os, e->children[0], kAdd);
          os << ")";
          return;
        case FuncKind::Log:
          os << "log(";
          print_m(os, e->children[0], kAdd);
          os << ")";
          return;
        case FuncKind::XLogX:
          os << "xlogx(";
          print_m(os, e->children[0], kAdd);
          os << ")";
          return;
        case FuncKind::Power:
          if (need > kPow) os << "(";
          print_m(os, e->children[0], kAtom);
          os << "^" << f.exponent;
          if (need > kPow) os << ")";
          return;
        case FuncKind::Series: {
          // Debug form; truncated series have no surface syntax.
          os << "series[";
          for (size_t i = 0; i < f.coefficients.size(); ++i) {
            if (i) os << ", ";
            os << format_complex(f.coefficients[i]);
          }
          os << "](";
          print_m(os, e->children[0], kAdd);
          os << ")";
          return;
        }
      }
      return;
    }
  }
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_complex(cxd v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) return format_double(v.imag()) + "i";
  std::string out = "(" + format_double(v.real());
  out += v.imag() < 0.0 ? " - " : " + ";
  out += format_double(std::abs(v.imag())) + "i)";
  return out;
}

std::string pretty_print(const ScalarExpr& e) {
  std::ostringstream os;
  print_s(os, e, kAdd);
  return os.str();
}

std::string pretty_print(const MatrixExpr& e) {
  std::ostringstream os;
  print_m(os, e, kAdd);
  return os.str();
}

}  // namespace wirt
