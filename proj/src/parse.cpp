#include "wirt/parse.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <utility>

namespace wirt {
namespace {

const std::set<std::string>& reserved() {
  static const std::set<std::string> words = {
      "I",   "tr",  "det",   "frob2", "entry", "conj",
      "adj", "tp",  "exp",   "log",   "xlogx", "had",   "mat",
  };
  return words;
}

enum class Tok { End, Number, Ident, Param, Plus, Minus, Star, Caret, LParen,
                 RParen, Comma, Semicolon };

struct Token {
  Tok kind = Tok::End;
  cxd num;
  bool is_int = false;
  long long int_val = 0;
  std::string ident;
  std::size_t at = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_ = Token{};
    current_.at = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': current_.kind = Tok::Plus; ++pos_; return;
      case '-': current_.kind = Tok::Minus; ++pos_; return;
      case '*': current_.kind = Tok::Star; ++pos_; return;
      case '^': current_.kind = Tok::Caret; ++pos_; return;
      case '(': current_.kind = Tok::LParen; ++pos_; return;
      case ')': current_.kind = Tok::RParen; ++pos_; return;
      case ',': current_.kind = Tok::Comma; ++pos_; return;
      case ';': current_.kind = Tok::Semicolon; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    if (c == '@') {
      ++pos_;
      const std::string name = lex_ident_chars();
      if (name.empty())
        throw ParseError("expected a parameter name after '@'", current_.at);
      current_.kind = Tok::Param;
      current_.ident = name;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      current_.kind = Tok::Ident;
      current_.ident = lex_ident_chars();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string lex_ident_chars() {
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      out.push_back(text_[pos_]);
      ++pos_;
    }
    return out;
  }

  void lex_number() {
    const std::size_t start = pos_;
    bool has_dot = false, has_exp = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      has_dot = true;
      ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected digits after the decimal point", pos_);
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      has_exp = true;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected digits in the exponent", pos_);
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    const std::string_view digits(text_.data() + start, pos_ - start);
    double value = 0.0;
    const auto res =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (res.ec != std::errc())
      throw ParseError("malformed number", start);
    bool imaginary = false;
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      imaginary = true;
      ++pos_;
      if (pos_ < text_.size() &&
          (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
           text_[pos_] == '_'))
        throw ParseError("malformed imaginary literal", start);
    }
    current_.kind = Tok::Number;
    current_.num = imaginary ? cxd(0.0, value) : cxd(value, 0.0);
    current_.is_int = !has_dot && !has_exp && !imaginary;
    if (current_.is_int) {
      long long iv = 0;
      const auto ires =
          std::from_chars(digits.data(), digits.data() + digits.size(), iv);
      current_.is_int = ires.ec == std::errc();
      current_.int_val = iv;
    }
    current_.at = start;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_;
};

// A matrix subexpression whose dimension may still be open ("I", lifted
// scalars). dim == 0 means polymorphic; build(n) produces the tree once the
// dimension is known from context.
struct PMat {
  int dim = 0;
  std::size_t at = 0;
  std::function<MatrixExpr(int)> build;
};

class Parser {
 public:
  Parser(const std::string& text, const std::vector<VariableDecl>& decls,
         int default_dim)
      : lex_(text), default_dim_(default_dim) {
    for (const auto& d : decls) decls_[d.name] = d;
  }

  ScalarExpr parse_scalar_toplevel() {
    ScalarExpr s = parse_scalar();
    expect_end();
    return s;
  }

  MatrixExpr parse_matrix_toplevel() {
    PMat m = parse_matrix();
    expect_end();
    if (default_dim_ > 0 && m.dim != 0 && m.dim != default_dim_)
      throw ShapeError("matrix dimension " + std::to_string(m.dim) +
                       " does not match the expected " +
                       std::to_string(default_dim_));
    return resolve(m);
  }

 private:
  void expect_end() {
    if (lex_.peek().kind != Tok::End)
      throw ParseError("unexpected trailing input", lex_.peek().at);
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      throw ParseError("expected " + what, lex_.peek().at);
    return lex_.take();
  }

  MatrixExpr resolve(const PMat& m) {
    if (m.dim == 0) {
      if (default_dim_ > 0) return m.build(default_dim_);
      throw ParseError("cannot infer the matrix dimension here", m.at);
    }
    return m.build(m.dim);
  }

  // ----- scalar grammar -----

  ScalarExpr parse_scalar() {
    bool lead_neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      lead_neg = true;
    }
    ScalarExpr acc = parse_scalar_term();
    if (lead_neg) acc = s_neg(acc);
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      const bool minus = lex_.take().kind == Tok::Minus;
      ScalarExpr rhs = parse_scalar_term();
      acc = minus ? s_sub(acc, rhs) : s_add(acc, rhs);
    }
    return acc;
  }

  ScalarExpr parse_scalar_term() {
    ScalarExpr acc = parse_scalar_factor();
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      acc = s_mul(acc, parse_scalar_factor());
    }
    return acc;
  }

  ScalarExpr parse_scalar_factor() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return s_neg(parse_scalar_factor());
    }
    ScalarExpr base = parse_scalar_primary();
    // Postfix power desugars to a repeated product; scalars have no inverse
    // node, so negative exponents are rejected here.
    while (lex_.peek().kind == Tok::Caret) {
      const Token caret = lex_.take();
      bool negative = false;
      if (lex_.peek().kind == Tok::Minus) {
        lex_.take();
        negative = true;
      }
      const Token e = expect(Tok::Number, "an integer exponent");
      if (!e.is_int) throw ParseError("exponent must be an integer", e.at);
      if (negative)
        throw ParseError("scalar powers must be nonnegative", caret.at);
      const int k = static_cast<int>(e.int_val);
      if (k == 0) {
        base = s_lit(1.0);
      } else if (k > 1) {
        base = s_mul(std::vector<ScalarExpr>(static_cast<std::size_t>(k),
                                             base));
      }
    }
    return base;
  }

  ScalarExpr parse_scalar_primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number:
        return s_lit(lex_.take().num);
      case Tok::Param:
        return s_param(lex_.take().ident);
      case Tok::LParen: {
        lex_.take();
        ScalarExpr inner = parse_scalar();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        if (t.ident == "tr" || t.ident == "det" || t.ident == "frob2" ||
            t.ident == "entry")
          return parse_scalar_function();
        throw ParseError("matrices may appear in a scalar only inside tr, "
                         "det, frob2 or entry",
                         t.at);
      default:
        throw ParseError("expected a scalar", t.at);
    }
  }

  ScalarExpr parse_scalar_function() {
    return parse_scalar_function_named(lex_.take());
  }

  ScalarExpr parse_scalar_function_named(const Token& name) {
    expect(Tok::LParen, "'('");
    const MatrixExpr arg = resolve(parse_matrix());
    if (name.ident == "entry") {
      expect(Tok::Comma, "','");
      const Token ri = expect(Tok::Number, "a row index");
      if (!ri.is_int) throw ParseError("row index must be an integer", ri.at);
      expect(Tok::Comma, "','");
      const Token ci = expect(Tok::Number, "a column index");
      if (!ci.is_int)
        throw ParseError("column index must be an integer", ci.at);
      expect(Tok::RParen, "')'");
      return s_entry(arg, static_cast<int>(ri.int_val),
                     static_cast<int>(ci.int_val));
    }
    expect(Tok::RParen, "')'");
    if (name.ident == "tr") return s_trace(arg);
    if (name.ident == "det") return s_det(arg);
    return frob2(arg);
  }

  // ----- matrix grammar -----

  PMat parse_matrix() {
    const std::size_t at = lex_.peek().at;
    bool lead_neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      lead_neg = true;
    }
    PMat acc = parse_matrix_term();
    if (lead_neg) acc = wrap(acc, [](MatrixExpr m) { return m_neg(m); });
    acc.at = at;
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      const bool minus = lex_.take().kind == Tok::Minus;
      PMat rhs = parse_matrix_term();
      acc = combine(acc, rhs,
                    [minus](MatrixExpr a, MatrixExpr b) {
                      return minus ? m_sub(a, b) : m_add(a, b);
                    });
    }
    return acc;
  }

  PMat parse_matrix_term() {
    PMat acc = parse_matrix_atom();
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      PMat rhs = parse_matrix_atom();
      acc = combine(acc, rhs, [](MatrixExpr a, MatrixExpr b) {
        return m_mul(a, b);
      });
    }
    return acc;
  }

  PMat parse_matrix_atom() {
    PMat base = parse_matrix_primary();
    while (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      bool negative = false;
      if (lex_.peek().kind == Tok::Minus) {
        lex_.take();
        negative = true;
      }
      const Token e = expect(Tok::Number, "an integer exponent");
      if (!e.is_int) throw ParseError("exponent must be an integer", e.at);
      const int k = static_cast<int>(negative ? -e.int_val : e.int_val);
      base = wrap(base, [k](MatrixExpr m) {
        return k >= 0 ? m_pow(m, k) : m_apply(AnalyticFunction::power(k), m);
      });
    }
    return base;
  }

  PMat parse_matrix_primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        const Token n = lex_.take();
        return lift(s_lit(n.num), n.at);
      }
      case Tok::Param: {
        const Token p = lex_.take();
        return lift(s_param(p.ident), p.at);
      }
      case Tok::LParen: {
        lex_.take();
        PMat inner = parse_matrix();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return parse_matrix_ident();
      default:
        throw ParseError("expected a matrix", t.at);
    }
  }

  PMat parse_matrix_ident() {
    const Token name = lex_.take();
    const std::string& id = name.ident;
    if (id == "I") {
      PMat m;
      m.at = name.at;
      m.build = [](int n) { return m_identity(n); };
      return m;
    }
    if (id == "tr" || id == "det" || id == "frob2" || id == "entry") {
      // Scalar-valued atom lifted into matrix position as s*I.
      return lift(parse_scalar_function_named(name), name.at);
    }
    if (id == "conj" || id == "adj" || id == "tp" || id == "exp" ||
        id == "log" || id == "xlogx") {
      expect(Tok::LParen, "'('");
      PMat inner = parse_matrix();
      expect(Tok::RParen, "')'");
      if (id == "conj") return wrap(inner, [](MatrixExpr m) { return m_conj(m); });
      if (id == "adj")
        return wrap(inner, [](MatrixExpr m) { return m_adjoint(m); });
      if (id == "tp")
        return wrap(inner, [](MatrixExpr m) { return m_transpose(m); });
      if (id == "exp")
        return wrap(inner,
                    [](MatrixExpr m) { return m_apply(AnalyticFunction::exp(), m); });
      if (id == "log")
        return wrap(inner,
                    [](MatrixExpr m) { return m_apply(AnalyticFunction::log(), m); });
      return wrap(inner, [](MatrixExpr m) {
        return m_apply(AnalyticFunction::xlogx(), m);
      });
    }
    if (id == "had") {
      expect(Tok::LParen, "'('");
      PMat a = parse_matrix();
      expect(Tok::Comma, "','");
      PMat b = parse_matrix();
      expect(Tok::RParen, "')'");
      return combine(a, b, [](MatrixExpr x, MatrixExpr y) {
        return m_hadamard(x, y);
      });
    }
    if (id == "mat") return parse_matrix_literal(name.at);
    const auto it = decls_.find(id);
    if (it == decls_.end())
      throw DeclError("undeclared identifier '" + id + "' at offset " +
                      std::to_string(name.at));
    PMat m;
    m.dim = it->second.dim;
    m.at = name.at;
    const VariableDecl decl = it->second;
    m.build = [decl](int) { return m_var(decl); };
    return m;
  }

  // mat(n; e00, e01, ..., e_{n-1,n-1}) with n*n constant scalar entries
  // in row-major order.
  PMat parse_matrix_literal(std::size_t at) {
    expect(Tok::LParen, "'('");
    const Token dt = expect(Tok::Number, "a dimension");
    if (!dt.is_int || dt.int_val < 1 || dt.int_val > 256)
      throw ParseError("matrix literal dimension must be an integer in "
                       "[1, 256]",
                       dt.at);
    const int n = static_cast<int>(dt.int_val);
    expect(Tok::Semicolon, "';'");
    ComplexMatrix value(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != 0 || j != 0) expect(Tok::Comma, "','");
        const std::size_t entry_at = lex_.peek().at;
        const ScalarExpr entry = canonicalize(parse_scalar());
        if (entry->op != ScalarOp::Lit)
          throw ParseError("matrix literal entries must be constants",
                           entry_at);
        value.set(i, j, entry->lit);
      }
    }
    expect(Tok::RParen, "')'");
    PMat m;
    m.dim = n;
    m.at = at;
    MatrixExpr c = m_const(value);
    m.build = [c](int) { return c; };
    return m;
  }

  // ----- helpers over the deferred representation -----

  static PMat lift(const ScalarExpr& s, std::size_t at) {
    PMat m;
    m.at = at;
    m.build = [s](int n) { return m_smul(s, m_identity(n)); };
    return m;
  }

  static PMat wrap(const PMat& inner,
                   std::function<MatrixExpr(MatrixExpr)> f) {
    PMat out;
    out.dim = inner.dim;
    out.at = inner.at;
    auto build = inner.build;
    out.build = [build, f](int n) { return f(build(n)); };
    return out;
  }

  PMat combine(const PMat& a, const PMat& b,
               std::function<MatrixExpr(MatrixExpr, MatrixExpr)> f) {
    if (a.dim != 0 && b.dim != 0 && a.dim != b.dim)
      throw ShapeError("matrix dimensions disagree: " + std::to_string(a.dim) +
                       " vs " + std::to_string(b.dim) + " at offset " +
                       std::to_string(b.at));
    PMat out;
    out.dim = a.dim != 0 ? a.dim : b.dim;
    out.at = a.at;
    auto ab = a.build;
    auto bb = b.build;
    out.build = [ab, bb, f](int n) { return f(ab(n), bb(n)); };
    return out;
  }

  Lexer lex_;
  int default_dim_ = 0;
  std::map<std::string, VariableDecl> decls_;
};

}  // namespace

ScalarExpr parse(const std::string& text,
                 const std::vector<VariableDecl>& decls, int default_dim) {
  Parser p(text, decls, default_dim);
  return p.parse_scalar_toplevel();
}

MatrixExpr parse_matrix(const std::string& text,
                        const std::vector<VariableDecl>& decls,
                        int expect_dim) {
  Parser p(text, decls, expect_dim);
  return p.parse_matrix_toplevel();
}

bool is_reserved_word(const std::string& name) {
  return reserved().count(name) > 0;
}

}  // namespace wirt
