#include "wirt/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wirt/eval.hpp"
#include "wirt/parse.hpp"
#include "wirt/printer.hpp"

namespace wirt {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write file: " + path);
  out << content;
  if (!out) throw IOError("write failed: " + path);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Non-comment lines of a document, in order.
std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty() || !std::isfinite(v))
    throw IOError("bad " + what + ": '" + tok + "'");
  return v;
}

int parse_dim(const std::string& tok) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty() || v < 1 || v > 256)
    throw IOError("bad dimension: '" + tok + "'");
  return static_cast<int>(v);
}

ComplexMatrix matrix_of_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re") ||
      !j.contains("im"))
    throw IOError("matrix object needs keys n, re, im");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > 256) throw IOError("matrix dimension out of range");
  ComplexMatrix m(n);
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != n ||
      static_cast<int>(im.size()) != n)
    throw IOError("re/im must each hold n rows");
  for (int i = 0; i < n; ++i) {
    const json& rr = re.at(i);
    const json& ri = im.at(i);
    if (!rr.is_array() || !ri.is_array() || static_cast<int>(rr.size()) != n ||
        static_cast<int>(ri.size()) != n)
      throw IOError("matrix rows must hold n entries");
    for (int k = 0; k < n; ++k)
      m.set(i, k, {rr.at(k).get<double>(), ri.at(k).get<double>()});
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  const int n = m.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < n; ++i) {
    json rr = json::array(), ri = json::array();
    for (int k = 0; k < n; ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

std::string write_matrix_text(const ComplexMatrix& m) {
  const int n = m.dim();
  std::string out = std::to_string(n) + "\n";
  char buf[48];
  for (int plane = 0; plane < 2; ++plane) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const cxd v = m(i, k);
        std::snprintf(buf, sizeof buf, "%.17g",
                      plane == 0 ? v.real() : v.imag());
        out += buf;
        out += k + 1 < n ? ' ' : '\n';
      }
    }
  }
  return out;
}

std::string write_matrix_json(const ComplexMatrix& m) {
  return matrix_to_json(m).dump(2) + "\n";
}

ComplexMatrix read_matrix(const std::string& text) {
  std::size_t first = 0;
  while (first < text.size() &&
         std::isspace(static_cast<unsigned char>(text[first])))
    ++first;
  if (first < text.size() && text[first] == '{') {
    try {
      return matrix_of_json(json::parse(text));
    } catch (const json::exception& e) {
      throw IOError(std::string("bad matrix JSON: ") + e.what());
    }
  }
  const std::vector<std::string> toks = split_ws(text);
  if (toks.empty()) throw IOError("empty matrix document");
  const int n = parse_dim(toks[0]);
  const std::size_t need = 2 * static_cast<std::size_t>(n) * n;
  if (toks.size() != need + 1)
    throw IOError("matrix document for n=" + std::to_string(n) + " needs " +
                  std::to_string(need) + " entries, found " +
                  std::to_string(toks.size() - 1));
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const std::size_t at = 1 + static_cast<std::size_t>(i) * n + k;
      m.set(i, k, {parse_double(toks[at], "matrix entry"),
                   parse_double(toks[at + static_cast<std::size_t>(n) * n],
                                "matrix entry")});
    }
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  try {
    return read_matrix(slurp(path));
  } catch (const IOError& e) {
    throw IOError(std::string(e.what()) + " (in " + path + ")");
  }
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m,
                       bool as_json) {
  spill(path, as_json ? write_matrix_json(m) : write_matrix_text(m));
}

VariableDecl parse_decl_line(const std::string& line) {
  const std::vector<std::string> toks = split_ws(line);
  if (toks.size() != 3)
    throw IOError("declaration line needs 'name dim structure': '" + line +
                  "'");
  if (is_reserved_word(toks[0]))
    throw IOError("reserved name in declaration: '" + toks[0] + "'");
  VariableDecl d;
  d.name = toks[0];
  d.dim = parse_dim(toks[1]);
  d.structure = structure_from_string(toks[2]);
  return d;
}

std::vector<VariableDecl> parse_decls(const std::string& text) {
  std::vector<VariableDecl> out;
  for (const std::string& line : content_lines(text)) {
    VariableDecl d = parse_decl_line(line);
    for (const VariableDecl& seen : out)
      if (seen.name == d.name)
        throw IOError("duplicate declaration of '" + d.name + "'");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<VariableDecl> read_decls_file(const std::string& path) {
  try {
    return parse_decls(slurp(path));
  } catch (const IOError& e) {
    throw IOError(std::string(e.what()) + " (in " + path + ")");
  }
}

ProblemFile read_problem(const std::string& text,
                         const std::string& base_dir) {
  ProblemFile pf;
  bool have_variable = false, have_objective = false, have_direction = false;
  std::vector<std::pair<std::string, std::string>> constraints;  // expr, value
  std::optional<std::string> start_path;

  for (const std::string& line : content_lines(text)) {
    const std::size_t sp = line.find_first_of(" \t");
    const std::string key = line.substr(0, sp);
    const std::string rest =
        sp == std::string::npos ? std::string() : trim(line.substr(sp + 1));

    if (key == "objective") {
      if (have_objective) throw IOError("more than one objective line");
      if (rest.empty()) throw IOError("objective line is empty");
      pf.objective_text = rest;
      have_objective = true;
    } else if (key == "variable") {
      if (have_variable) throw IOError("more than one variable line");
      pf.problem.variable = parse_decl_line(rest);
      pf.variable_text = rest;
      have_variable = true;
    } else if (key == "constraint") {
      const std::size_t eq = rest.find('=');
      if (eq == std::string::npos)
        throw IOError("constraint line needs 'expr = value': '" + line + "'");
      const std::string expr = trim(rest.substr(0, eq));
      const std::string value = trim(rest.substr(eq + 1));
      if (expr.empty() || value.empty())
        throw IOError("constraint line needs 'expr = value': '" + line + "'");
      constraints.emplace_back(expr, value);
      pf.constraint_texts.push_back(expr + " = " + value);
    } else if (key == "direction") {
      if (have_direction) throw IOError("more than one direction line");
      if (rest == "minimize")
        pf.problem.direction = Direction::Minimize;
      else if (rest == "maximize")
        pf.problem.direction = Direction::Maximize;
      else if (rest == "stationary")
        pf.problem.direction = Direction::StationaryOnly;
      else
        throw IOError("direction must be minimize, maximize or stationary");
      pf.direction_text = rest;
      have_direction = true;
    } else if (key == "density") {
      if (!rest.empty()) throw IOError("density line takes no argument");
      pf.problem.density = true;
    } else if (key == "matrix") {
      const std::vector<std::string> toks = split_ws(rest);
      if (toks.size() != 2)
        throw IOError("matrix line needs 'name path': '" + line + "'");
      if (is_reserved_word(toks[0]))
        throw IOError("reserved name in matrix line: '" + toks[0] + "'");
      if (pf.bindings.count(toks[0]))
        throw IOError("duplicate matrix '" + toks[0] + "'");
      pf.bindings.emplace(toks[0],
                          read_matrix_file(resolve(base_dir, toks[1])));
    } else if (key == "param") {
      const std::vector<std::string> toks = split_ws(rest);
      if (toks.size() != 2)
        throw IOError("param line needs 'name value': '" + line + "'");
      if (pf.problem.params.count(toks[0]))
        throw IOError("duplicate param '" + toks[0] + "'");
      pf.problem.params[toks[0]] = parse_double(toks[1], "param value");
    } else if (key == "start") {
      if (start_path) throw IOError("more than one start line");
      if (rest.empty()) throw IOError("start line needs a path");
      start_path = rest;
    } else {
      throw IOError("unknown directive '" + key + "'");
    }
  }

  if (!have_objective) throw IOError("problem needs an objective line");
  if (!have_variable) throw IOError("problem needs a variable line");
  if (pf.bindings.count(pf.problem.variable.name))
    throw IOError("'" + pf.problem.variable.name +
                  "' is both the variable and a bound matrix");

  std::vector<VariableDecl> decls{pf.problem.variable};
  std::map<std::string, MatrixExpr> repl;
  for (const auto& [name, value] : pf.bindings) {
    decls.push_back({name, value.dim(), StructureClass::Unstructured});
    repl.emplace(name, m_const(value));
  }

  const int dim = pf.problem.variable.dim;
  pf.problem.objective =
      substitute(parse(pf.objective_text, decls, dim), repl);
  EvalEnv value_env;
  value_env.params = pf.problem.params;
  int index = 0;
  for (const auto& [expr_text, value_text] : constraints) {
    Constraint c{substitute(parse(expr_text, decls, dim), repl),
                 eval_scalar(parse(value_text, {}, dim), value_env),
                 "c" + std::to_string(++index)};
    pf.problem.constraints.push_back(std::move(c));
  }

  if (start_path)
    pf.start = read_matrix_file(resolve(base_dir, *start_path));
  return pf;
}

ProblemFile read_problem_file(const std::string& path) {
  return read_problem(slurp(path),
                      std::filesystem::path(path).parent_path().string());
}

std::string closed_kind_name(ClosedKind k) {
  switch (k) {
    case ClosedKind::None: return "none";
    case ClosedKind::Purity: return "purity";
    case ClosedKind::Entropy: return "entropy";
    case ClosedKind::Gibbs: return "gibbs";
    case ClosedKind::FrobeniusNorm: return "frobenius norm-only";
    case ClosedKind::FrobeniusTrace: return "frobenius trace-only";
    case ClosedKind::FrobeniusNormAndTrace: return "frobenius";
  }
  return "none";
}

namespace {

std::string canon_text(const ScalarExpr& e) {
  return pretty_print(canonicalize(e));
}

// Canonical text of a reference expression over the problem's variable and
// at most one bound matrix, substituted the same way the problem file was.
std::string ref_text(const std::string& text, const VariableDecl& v,
                     const std::string& mat_name, const ComplexMatrix* mat) {
  std::vector<VariableDecl> decls{v};
  if (mat != nullptr)
    decls.push_back({mat_name, mat->dim(), StructureClass::Unstructured});
  ScalarExpr e = parse(text, decls, v.dim);
  if (mat != nullptr) e = substitute(e, {{mat_name, m_const(*mat)}});
  return canon_text(e);
}

bool near_one(cxd v) { return std::abs(v - 1.0) <= 1e-12; }

}  // namespace

ClosedMatch match_closed(const ProblemFile& pf) {
  const Problem& p = pf.problem;
  const VariableDecl& v = p.variable;
  if (p.direction == Direction::StationaryOnly) return {};

  const std::string obj = canon_text(p.objective);
  std::vector<std::string> cons;
  cons.reserve(p.constraints.size());
  for (const auto& c : p.constraints) cons.push_back(canon_text(c.expr));
  const std::string trace_ref = ref_text("tr(" + v.name + ")", v, "", nullptr);

  // Purity: min tr(Z^2) with tr(Z) = 1 on a hermitian variable.
  if (v.structure == StructureClass::Hermitian &&
      p.direction == Direction::Minimize && p.constraints.size() == 1 &&
      obj == ref_text("tr(" + v.name + "^2)", v, "", nullptr) &&
      cons[0] == trace_ref && near_one(p.constraints[0].target)) {
    ClosedMatch m;
    m.kind = ClosedKind::Purity;
    return m;
  }

  // Entropy-form objective: -tr(xlogx(Z)) maximized, or its negation
  // minimized. tr(Z*log(Z)) canonicalizes to tr(xlogx(Z)), so both
  // spellings land here.
  const bool entropy_form =
      (p.direction == Direction::Maximize &&
       obj == ref_text("-tr(xlogx(" + v.name + "))", v, "", nullptr)) ||
      (p.direction == Direction::Minimize &&
       obj == ref_text("tr(xlogx(" + v.name + "))", v, "", nullptr));

  if (v.structure == StructureClass::Hermitian && entropy_form) {
    if (p.constraints.size() == 1 && cons[0] == trace_ref &&
        near_one(p.constraints[0].target)) {
      ClosedMatch m;
      m.kind = ClosedKind::Entropy;
      return m;
    }
    if (p.constraints.size() == 2) {
      int norm_at = -1;
      for (int k = 0; k < 2; ++k)
        if (cons[k] == trace_ref && near_one(p.constraints[k].target))
          norm_at = k;
      if (norm_at >= 0) {
        const int other = 1 - norm_at;
        const cxd target = p.constraints[other].target;
        for (const auto& [name, value] : pf.bindings) {
          if (value.dim() != v.dim || !value.is_hermitian()) continue;
          if (cons[other] ==
                  ref_text("tr(" + name + "*" + v.name + ")", v, name,
                           &value) &&
              std::abs(target.imag()) <= 1e-12) {
            ClosedMatch m;
            m.kind = ClosedKind::Gibbs;
            m.mat = value;
            m.energy = target.real();
            return m;
          }
        }
      }
    }
  }

  // Frobenius fit: min frob2(Z - L) under a norm and/or trace constraint on
  // an unstructured variable.
  if (v.structure == StructureClass::Unstructured &&
      p.direction == Direction::Minimize && !p.constraints.empty() &&
      p.constraints.size() <= 2) {
    const ComplexMatrix* l = nullptr;
    for (const auto& [name, value] : pf.bindings) {
      if (value.dim() != v.dim) continue;
      if (obj == ref_text("frob2(" + v.name + " - " + name + ")", v, name,
                          &value)) {
        l = &value;
        break;
      }
    }
    if (l != nullptr) {
      const std::string norm_ref =
          ref_text("frob2(" + v.name + ")", v, "", nullptr);
      bool have_norm = false, have_trace = false, recognized = true;
      double c_norm = 0.0;
      cxd d_trace = 0.0;
      for (std::size_t k = 0; k < p.constraints.size(); ++k) {
        const cxd target = p.constraints[k].target;
        if (cons[k] == norm_ref && !have_norm &&
            std::abs(target.imag()) <= 1e-12 && target.real() > 0.0) {
          have_norm = true;
          c_norm = std::sqrt(target.real());
        } else if (cons[k] == trace_ref && !have_trace) {
          have_trace = true;
          d_trace = target;
        } else {
          recognized = false;
        }
      }
      if (recognized && (have_norm || have_trace)) {
        ClosedMatch m;
        m.kind = have_norm && have_trace ? ClosedKind::FrobeniusNormAndTrace
                 : have_norm             ? ClosedKind::FrobeniusNorm
                                         : ClosedKind::FrobeniusTrace;
        m.mat = *l;
        m.c_norm = c_norm;
        m.d_trace = d_trace;
        return m;
      }
    }
  }

  return {};
}

SolveReport solve_closed(const ProblemFile& pf, const ClosedMatch& m) {
  const int n = pf.problem.variable.dim;
  SolveReport rep;
  switch (m.kind) {
    case ClosedKind::Purity:
      rep.solution = purity_minimum(n).rho;
      break;
    case ClosedKind::Entropy:
      rep.solution = entropy_maximum(n).rho;
      break;
    case ClosedKind::Gibbs:
      rep.solution = gibbs_state(*m.mat, m.energy).rho;
      break;
    case ClosedKind::FrobeniusNorm:
      rep.solution = frobenius_fit_norm(*m.mat, m.c_norm).t;
      break;
    case ClosedKind::FrobeniusTrace:
      rep.solution = frobenius_fit_trace(*m.mat, m.d_trace).t;
      break;
    case ClosedKind::FrobeniusNormAndTrace:
      rep.solution = frobenius_fit(*m.mat, m.c_norm, m.d_trace).t;
      break;
    case ClosedKind::None:
      throw IOError("no closed form matches this problem");
  }

  const StationarityReport st = check_stationarity(pf.problem, rep.solution);
  rep.objective_value = st.objective_value;
  rep.grad_residual = st.grad_residual;
  rep.constraint_residual = st.constraint_residual;
  rep.multipliers = st.multipliers;
  rep.converged = st.grad_residual <= 1e-8 * (1.0 + st.gradient_norm) &&
                  st.constraint_residual <= 1e-8;
  rep.message = "closed form (" + closed_kind_name(m.kind) + ")";
  return rep;
}

std::string report_json(const SolveReport& rep, const ProblemFile& pf,
                        const std::string& method) {
  json mats = json::object();
  for (const auto& [name, value] : pf.bindings)
    mats[name] = matrix_to_json(value);
  json problem{{"objective", pf.objective_text},
               {"variable", pf.variable_text},
               {"constraints", pf.constraint_texts},
               {"direction", pf.direction_text},
               {"density", pf.problem.density},
               {"params", pf.problem.params},
               {"matrices", std::move(mats)}};
  json doc{{"method", method},
           {"converged", rep.converged},
           {"objective_value", rep.objective_value},
           {"multipliers", rep.multipliers},
           {"grad_residual", rep.grad_residual},
           {"constraint_residual", rep.constraint_residual},
           {"outer_iterations", rep.outer_iterations},
           {"inner_iterations", rep.inner_iterations},
           {"message", rep.message},
           {"solution", matrix_to_json(rep.solution)},
           {"problem", std::move(problem)}};
  return doc.dump(2) + "\n";
}

}  // namespace wirt
