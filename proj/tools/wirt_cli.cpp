#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wirt/derive.hpp"
#include "wirt/eval.hpp"
#include "wirt/fd.hpp"
#include "wirt/io.hpp"
#include "wirt/linalg.hpp"
#include "wirt/parse.hpp"
#include "wirt/printer.hpp"
#include "wirt/random.hpp"
#include "wirt/rng.hpp"
#include "wirt/solve.hpp"

namespace {

using namespace wirt;
using nlohmann::json;

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

void write_out(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write file: " + path);
  out << doc.dump(2) << "\n";
}

std::vector<VariableDecl> load_decls(const std::string& decls_file,
                                     const std::vector<std::string>& inline_decls) {
  std::vector<VariableDecl> decls;
  if (!decls_file.empty()) decls = read_decls_file(decls_file);
  for (const std::string& line : inline_decls) {
    VariableDecl d = parse_decl_line(line);
    for (const VariableDecl& seen : decls)
      if (seen.name == d.name)
        throw IOError("duplicate declaration of '" + d.name + "'");
    decls.push_back(std::move(d));
  }
  return decls;
}

const VariableDecl& find_decl(const std::vector<VariableDecl>& decls,
                              const std::string& name) {
  for (const VariableDecl& d : decls)
    if (d.name == name) return d;
  throw DeclError("variable '" + name + "' is not declared");
}

// ---- derive ----

struct DeriveArgs {
  std::string expr, var, decls_file, out;
  std::vector<std::string> inline_decls;
  bool structure_aware = false;
};

int cmd_derive(const DeriveArgs& a) {
  const std::vector<VariableDecl> decls =
      load_decls(a.decls_file, a.inline_decls);
  const VariableDecl& v = find_decl(decls, a.var);
  const ScalarExpr f = parse(a.expr, decls, v.dim);
  const WirtingerPair p =
      a.structure_aware ? derive(f, v) : derive_unstructured(f, v);
  const std::string dv = pretty_print(p.d_var);
  const std::string dc = pretty_print(p.d_var_conj);
  std::cout << "d/d" << a.var << ": " << dv << "\n"
            << "d/d" << a.var << "*: " << dc << "\n";
  write_out(a.out, json{{"command", "derive"},
                        {"expr", a.expr},
                        {"var", a.var},
                        {"dim", v.dim},
                        {"structure", to_string(v.structure)},
                        {"structure_aware", a.structure_aware},
                        {"d_var", dv},
                        {"d_var_conj", dc}});
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string expr, decls_file, out;
  std::vector<std::string> inline_decls, binds, params;
};

int cmd_eval(const EvalArgs& a) {
  const std::vector<VariableDecl> decls =
      load_decls(a.decls_file, a.inline_decls);
  const ScalarExpr f =
      parse(a.expr, decls, decls.empty() ? 0 : decls.front().dim);
  EvalEnv env;
  for (const std::string& spec : a.binds) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw IOError("--bind needs NAME=FILE: '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    const VariableDecl& d = find_decl(decls, name);
    ComplexMatrix m = read_matrix_file(spec.substr(eq + 1));
    if (m.dim() != d.dim)
      throw ShapeError("binding for '" + name + "' has dimension " +
                       std::to_string(m.dim()) + ", declared " +
                       std::to_string(d.dim));
    env.bindings.emplace(name, std::move(m));
  }
  for (const std::string& spec : a.params) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw IOError("--param needs NAME=VALUE: '" + spec + "'");
    char* end = nullptr;
    const std::string text = spec.substr(eq + 1);
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
      throw IOError("bad --param value: '" + spec + "'");
    env.params[spec.substr(0, eq)] = value;
  }
  validate_env(f, env);
  const cxd value = eval_scalar(f, env);
  std::cout << "value: " << format_complex(value) << "\n";
  write_out(a.out, json{{"command", "eval"},
                        {"expr", a.expr},
                        {"value_re", value.real()},
                        {"value_im", value.imag()}});
  return 0;
}

// ---- check ----

struct CheckArgs {
  std::string expr, var, decls_file, out;
  std::vector<std::string> inline_decls;
  int points = 10;
  std::uint64_t seed = 0;
  double h = 1e-5;
  double tol = 1e-6;
};

// Variables that appear inside log or xlogx, which finite differences can
// only probe at points with positive spectrum.
void collect_log_vars(const MatrixExpr& e, std::set<std::string>* out);

void collect_log_vars(const ScalarExpr& e, std::set<std::string>* out) {
  if (e->arg) collect_log_vars(e->arg, out);
  for (const ScalarExpr& c : e->children) collect_log_vars(c, out);
}

void collect_log_vars(const MatrixExpr& e, std::set<std::string>* out) {
  if (e->op == MatrixOp::Apply && (e->func.kind == FuncKind::Log ||
                                   e->func.kind == FuncKind::XLogX)) {
    for (const auto& [name, use] : free_vars(e->children[0]))
      out->insert(name);
  }
  if (e->scale) collect_log_vars(e->scale, out);
  for (const MatrixExpr& c : e->children) collect_log_vars(c, out);
}

int cmd_check(const CheckArgs& a) {
  const std::vector<VariableDecl> decls =
      load_decls(a.decls_file, a.inline_decls);
  const VariableDecl& v = find_decl(decls, a.var);
  const ScalarExpr f = parse(a.expr, decls, v.dim);
  const WirtingerPair p = derive(f, v);

  const auto uses = free_vars(f);
  std::set<std::string> positive;
  collect_log_vars(canonicalize(f), &positive);

  std::cout << "check: " << a.expr << "\n"
            << "variable: " << a.var << " (dim " << v.dim << ", "
            << to_string(v.structure) << ")\n"
            << fmt("points %d, h %g, tol %g, seed %llu\n", a.points, a.h,
                   a.tol, static_cast<unsigned long long>(a.seed));

  Rng rng(a.seed);
  const FDConfig cfg{a.h, a.tol};
  bool all_pass = true;
  double worst_err = -1.0;
  int worst_point = 0;
  GradCheckReport worst;
  json point_rows = json::array();
  for (int k = 0; k < a.points; ++k) {
    EvalEnv env;
    for (const VariableDecl& d : decls) {
      if (!uses.count(d.name)) continue;
      ComplexMatrix m = positive.count(d.name)
                            ? structure_project(random_hpd(d.dim, rng),
                                                d.structure)
                            : random_structured(d.dim, d.structure, rng);
      env.bindings.emplace(d.name, std::move(m));
    }
    const GradCheckReport r = grad_check(p, f, env, cfg);
    const std::string entry =
        fmt("d/d%s%s(%d,%d)", a.var.c_str(), r.worst_in_conj ? "*" : "",
            r.worst_row, r.worst_col);
    std::cout << fmt("point %d: max rel err %.3e at %s, %s\n", k,
                     r.max_rel_err, entry.c_str(),
                     r.pass ? "pass" : "FAIL");
    point_rows.push_back(json{{"point", k},
                              {"max_rel_err", r.max_rel_err},
                              {"entry", entry},
                              {"pass", r.pass}});
    if (r.max_rel_err > worst_err) {
      worst_err = r.max_rel_err;
      worst_point = k;
      worst = r;
    }
    all_pass = all_pass && r.pass;
  }
  std::cout << fmt("worst: point %d, d/d%s%s(%d,%d), rel err %.3e\n",
                   worst_point, a.var.c_str(), worst.worst_in_conj ? "*" : "",
                   worst.worst_row, worst.worst_col, worst_err)
            << (all_pass ? "PASS" : "FAIL") << "\n";
  write_out(a.out, json{{"command", "check"},
                        {"expr", a.expr},
                        {"var", a.var},
                        {"points", a.points},
                        {"seed", a.seed},
                        {"h", a.h},
                        {"tol", a.tol},
                        {"pass", all_pass},
                        {"worst_rel_err", worst_err},
                        {"per_point", std::move(point_rows)}});
  return all_pass ? 0 : 1;
}

// ---- optimize ----

struct OptimizeArgs {
  std::string file, method = "auto", out;
  double gtol = 1e-7;
  double ctol = 1e-8;
  std::uint64_t seed = 0;
};

void print_report(const SolveReport& rep, const std::string& method) {
  std::cout << "method: " << method << "\n"
            << "converged: " << (rep.converged ? "true" : "false") << "\n"
            << "message: " << rep.message << "\n"
            << "objective: " << format_double(rep.objective_value) << "\n"
            << fmt("grad residual: %.3e\n", rep.grad_residual)
            << fmt("constraint residual: %.3e\n", rep.constraint_residual)
            << fmt("iterations: %d outer, %d inner\n", rep.outer_iterations,
                   rep.inner_iterations);
  for (const auto& [name, value] : rep.multipliers)
    std::cout << "multiplier " << name << ": " << format_double(value)
              << "\n";
  std::cout << "solution:\n" << write_matrix_text(rep.solution);
}

int cmd_optimize(const OptimizeArgs& a) {
  const ProblemFile pf = read_problem_file(a.file);
  const ClosedMatch m = match_closed(pf);
  SolveReport rep;
  std::string used;
  if (a.method == "closed" || (a.method == "auto" && m)) {
    if (!m)
      throw IOError(
          "no closed form matches this problem; use --method iterative");
    rep = solve_closed(pf, m);
    used = "closed";
  } else {
    SolveOptions opts;
    opts.gtol = a.gtol;
    opts.ctol = a.ctol;
    opts.seed = a.seed;
    opts.start = pf.start;
    rep = solve(pf.problem, opts);
    used = "iterative";
  }
  print_report(rep, used);
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw IOError("cannot write file: " + a.out);
    out << report_json(rep, pf, used);
  }
  return rep.converged ? 0 : 5;
}

// ---- demo ----

struct DemoArgs {
  std::string out;
  std::uint64_t seed = 0;
};

struct DemoRow {
  std::string name;
  std::string detail;
  bool pass = true;
};

Problem purity_problem(int n) {
  Problem prob;
  prob.variable = {"Z", n, StructureClass::Hermitian};
  prob.objective = parse("tr(Z^2)", {prob.variable});
  prob.constraints.push_back(
      {parse("tr(Z)", {prob.variable}), 1.0, "normalization"});
  return prob;
}

Problem entropy_problem(int n) {
  Problem prob;
  prob.variable = {"Z", n, StructureClass::Hermitian};
  prob.objective = parse("-tr(xlogx(Z))", {prob.variable});
  prob.direction = Direction::Maximize;
  prob.density = true;
  prob.constraints.push_back(
      {parse("tr(Z)", {prob.variable}), 1.0, "normalization"});
  return prob;
}

Problem gibbs_problem(int n, const ComplexMatrix& h, double energy) {
  Problem prob = entropy_problem(n);
  const std::vector<VariableDecl> decls{
      prob.variable, {"H", n, StructureClass::Unstructured}};
  prob.constraints.push_back(
      {substitute(parse("tr(H*Z)", decls), {{"H", m_const(h)}}), energy,
       "energy"});
  return prob;
}

Problem frobenius_problem(int n, const ComplexMatrix& l,
                          std::optional<double> c_norm,
                          std::optional<cxd> d_trace) {
  Problem prob;
  prob.variable = {"T", n, StructureClass::Unstructured};
  const std::vector<VariableDecl> decls{
      prob.variable, {"L", n, StructureClass::Unstructured}};
  prob.objective =
      substitute(parse("frob2(T - L)", decls), {{"L", m_const(l)}});
  if (c_norm)
    prob.constraints.push_back(
        {parse("frob2(T)", decls), *c_norm * *c_norm, "norm"});
  if (d_trace)
    prob.constraints.push_back({parse("tr(T)", decls), *d_trace, "trace"});
  return prob;
}

SolveOptions demo_opts(std::uint64_t seed) {
  SolveOptions opts;
  opts.seed = seed;
  opts.max_inner = 4000;
  return opts;
}

void demo_purity(std::uint64_t seed, std::vector<DemoRow>* rows) {
  for (int n : {2, 4, 8}) {
    const Problem prob = purity_problem(n);
    const PurityResult closed = purity_minimum(n);
    const StationarityReport st = check_stationarity(prob, closed.rho);
    SolveOptions opts = demo_opts(seed ^ (0x11u + n));
    Rng rng(seed ^ (0x211u + n));
    opts.start = random_density(n, rng);
    const SolveReport it = solve(prob, opts);
    const double diff =
        (it.solution - ComplexMatrix::scaled_identity(n, 1.0 / n))
            .frob_norm();
    DemoRow row;
    row.name = fmt("purity N=%d", n);
    row.pass = st.grad_residual <= 1e-8 && st.constraint_residual <= 1e-8 &&
               it.converged && diff <= 1e-4;
    row.detail = fmt(
        "closed rho*=I/%d lambda %s grad %.1e | iter diff %.1e grad %.1e",
        n, format_double(closed.lambda).c_str(), st.grad_residual, diff,
        it.grad_residual);
    rows->push_back(std::move(row));
  }
}

void demo_entropy(std::uint64_t seed, std::vector<DemoRow>* rows) {
  for (int n : {2, 4, 8}) {
    const Problem prob = entropy_problem(n);
    const EntropyResult closed = entropy_maximum(n);
    const StationarityReport st = check_stationarity(prob, closed.rho);
    const SolveReport it = solve(prob, demo_opts(seed ^ (0x22u + n)));
    const double diff =
        (it.solution - ComplexMatrix::scaled_identity(n, 1.0 / n))
            .frob_norm();
    const double value_err = std::abs(it.objective_value - closed.entropy);
    DemoRow row;
    row.name = fmt("entropy d=%d", n);
    row.pass = st.grad_residual <= 1e-8 && it.converged && diff <= 1e-4 &&
               value_err <= 1e-5;
    row.detail =
        fmt("closed H=log%d=%.9g grad %.1e | iter value err %.1e diff %.1e",
            n, closed.entropy, st.grad_residual, value_err, diff);
    rows->push_back(std::move(row));
  }
}

void demo_gibbs(std::uint64_t seed, std::vector<DemoRow>* rows) {
  for (int n : {2, 4, 8}) {
    Rng rng(seed ^ (0x33u + n));
    const ComplexMatrix h =
        random_structured(n, StructureClass::Hermitian, rng);
    const HermEig eig = hermitian_eig(h);
    const double energy =
        eig.values.front() +
        0.4 * (eig.values.back() - eig.values.front());
    const GibbsResult closed = gibbs_state(h, energy);
    const double e_err =
        std::abs((closed.rho * h).trace().real() - energy);
    const double comm = (closed.rho * h - h * closed.rho).frob_norm();

    const Problem prob = gibbs_problem(n, h, energy);
    const SolveReport it = solve(prob, demo_opts(seed ^ (0x233u + n)));
    const double diff = (it.solution - closed.rho).frob_norm();
    const double beta_fit = it.multipliers.count("energy_re")
                                ? it.multipliers.at("energy_re")
                                : 0.0;
    const double beta_err = std::abs(beta_fit - closed.beta);
    DemoRow row;
    row.name = fmt("gibbs d=%d", n);
    row.pass = e_err <= 1e-10 && comm <= 1e-10 && it.converged &&
               diff <= 1e-4 && beta_err <= 1e-3 * (1.0 + std::abs(closed.beta));
    row.detail = fmt(
        "closed beta %.6g E err %.1e comm %.1e | iter diff %.1e beta err "
        "%.1e",
        closed.beta, e_err, comm, diff, beta_err);
    rows->push_back(std::move(row));
  }

  // Two-level analytic case: H = diag(0, 1) at E = 1/(1+e) has beta = 1.
  ComplexMatrix h(2);
  h.set(1, 1, 1.0);
  const double energy = 1.0 / (1.0 + std::exp(1.0));
  const GibbsResult closed = gibbs_state(h, energy);
  const Problem prob = gibbs_problem(2, h, energy);
  const SolveReport it = solve(prob, demo_opts(seed ^ 0x40u));
  const double beta_fit = it.multipliers.count("energy_re")
                              ? it.multipliers.at("energy_re")
                              : 0.0;
  DemoRow row;
  row.name = "gibbs d=2, beta=1";
  row.pass = std::abs(closed.beta - 1.0) <= 1e-8 && it.converged &&
             std::abs(beta_fit - 1.0) <= 1e-3;
  row.detail = fmt(
      "E target 1/(1+e) = %.9g | closed beta err %.1e | iter beta err %.1e",
      energy, std::abs(closed.beta - 1.0), std::abs(beta_fit - 1.0));
  rows->push_back(std::move(row));
}

void demo_frobenius(std::uint64_t seed, std::vector<DemoRow>* rows) {
  for (int n : {2, 4, 8}) {
    Rng rng(seed ^ (0x55u + n));
    const ComplexMatrix l = random_matrix(n, rng);
    const double c_norm = 0.8 * l.frob_norm();
    const cxd d_trace = 0.5 * l.trace();
    const FrobeniusResult closed = frobenius_fit(l, c_norm, d_trace);
    const double norm_err = std::abs(closed.t.frob_norm() - c_norm);
    const double trace_err = std::abs(closed.t.trace() - d_trace);
    const Problem prob = frobenius_problem(n, l, c_norm, d_trace);
    const StationarityReport st = check_stationarity(prob, closed.t);

    SolveOptions opts = demo_opts(seed ^ (0x255u + n));
    opts.start = l;
    const SolveReport it = solve(prob, opts);
    const double diff = (it.solution - closed.t).frob_norm();
    DemoRow row;
    row.name = fmt("frobenius N=%d", n);
    row.pass = norm_err <= 1e-10 && trace_err <= 1e-10 &&
               st.grad_residual <= 1e-8 * (1.0 + st.gradient_norm) &&
               it.converged && diff <= 1e-4;
    row.detail = fmt(
        "closed dist %.6g norm err %.1e trace err %.1e grad %.1e | iter "
        "diff %.1e",
        closed.distance, norm_err, trace_err, st.grad_residual, diff);
    rows->push_back(std::move(row));
  }

  // Special cases at n = 3: norm-only gives T = C*L/||L||_F, trace-only
  // gives T = L - ((tr L - D)/n) I.
  Rng rng(seed ^ 0x66u);
  const ComplexMatrix l = random_matrix(3, rng);
  {
    const double c_norm = 1.5;
    const FrobeniusResult closed = frobenius_fit_norm(l, c_norm);
    const ComplexMatrix expect = l.scaled(c_norm / l.frob_norm());
    const double formula_err = (closed.t - expect).frob_norm();
    Problem prob = frobenius_problem(3, l, c_norm, std::nullopt);
    SolveOptions opts = demo_opts(seed ^ 0x266u);
    opts.start = l;
    const SolveReport it = solve(prob, opts);
    const double diff = (it.solution - expect).frob_norm();
    DemoRow row;
    row.name = "frobenius, norm-only";
    row.pass = formula_err <= 1e-12 && it.converged && diff <= 1e-4;
    row.detail = fmt(
        "T = C*L/||L||_F err %.1e | iter diff %.1e", formula_err, diff);
    rows->push_back(std::move(row));
  }
  {
    const cxd d_trace(0.3, -0.2);
    const FrobeniusResult closed = frobenius_fit_trace(l, d_trace);
    ComplexMatrix expect = l;
    expect.accumulate(-(l.trace() - d_trace) / 3.0,
                      ComplexMatrix::identity(3));
    const double formula_err = (closed.t - expect).frob_norm();
    Problem prob = frobenius_problem(3, l, std::nullopt, d_trace);
    SolveOptions opts = demo_opts(seed ^ 0x277u);
    opts.start = l;
    const SolveReport it = solve(prob, opts);
    const double diff = (it.solution - expect).frob_norm();
    DemoRow row;
    row.name = "frobenius, trace-only";
    row.pass = formula_err <= 1e-12 && it.converged && diff <= 1e-4;
    row.detail = fmt(
        "T = L - ((tr L - D)/n)*I err %.1e | iter diff %.1e", formula_err,
        diff);
    rows->push_back(std::move(row));
  }
}

int cmd_demo(const DemoArgs& a) {
  std::cout << fmt("demo: closed forms vs iterative solves, seed %llu\n",
                   static_cast<unsigned long long>(a.seed));
  std::vector<DemoRow> rows;
  demo_purity(a.seed, &rows);
  demo_entropy(a.seed, &rows);
  demo_gibbs(a.seed, &rows);
  demo_frobenius(a.seed, &rows);

  std::size_t name_width = 0;
  for (const DemoRow& r : rows)
    name_width = std::max(name_width, r.name.size());
  int passed = 0;
  json out_rows = json::array();
  for (const DemoRow& r : rows) {
    std::cout << r.name << std::string(name_width - r.name.size(), ' ')
              << " | " << r.detail << " | " << (r.pass ? "PASS" : "FAIL")
              << "\n";
    passed += r.pass ? 1 : 0;
    out_rows.push_back(
        json{{"name", r.name}, {"detail", r.detail}, {"pass", r.pass}});
  }
  const bool all = passed == static_cast<int>(rows.size());
  std::cout << fmt("demo: %d/%zu rows passed\n", passed, rows.size());
  write_out(a.out, json{{"command", "demo"},
                        {"seed", a.seed},
                        {"rows", std::move(out_rows)},
                        {"all_pass", all}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic Wirtinger derivatives of matrix objectives"};
  app.require_subcommand(1);

  DeriveArgs da;
  CLI::App* derive_cmd = app.add_subcommand(
      "derive", "print both Wirtinger derivatives of a scalar objective");
  derive_cmd->add_option("expr", da.expr, "objective expression")->required();
  derive_cmd->add_option("var", da.var, "variable to differentiate by")
      ->required();
  derive_cmd->add_option("--decls", da.decls_file,
                         "declaration file, one 'name dim structure' per line");
  derive_cmd->add_option("--var-decl", da.inline_decls,
                         "inline declaration 'name dim structure'");
  derive_cmd->add_flag("--structure-aware", da.structure_aware,
                       "correct the pair for the declared structure class");
  derive_cmd->add_option("--out", da.out, "write a JSON record here");

  EvalArgs ea;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a scalar objective at a point");
  eval_cmd->add_option("expr", ea.expr, "objective expression")->required();
  eval_cmd->add_option("--decls", ea.decls_file, "declaration file");
  eval_cmd->add_option("--var-decl", ea.inline_decls,
                       "inline declaration 'name dim structure'");
  eval_cmd->add_option("--bind", ea.binds,
                       "matrix binding NAME=FILE (text or JSON layout)");
  eval_cmd->add_option("--param", ea.params, "real parameter NAME=VALUE");
  eval_cmd->add_option("--out", ea.out, "write a JSON record here");

  CheckArgs ca;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "compare symbolic derivatives against finite differences");
  // The finite-difference step is spelled --h, so help keeps only its long
  // form here.
  check_cmd->set_help_flag("--help", "print help");
  check_cmd->add_option("expr", ca.expr, "objective expression")->required();
  check_cmd->add_option("var", ca.var, "variable to differentiate by")
      ->required();
  check_cmd->add_option("--decls", ca.decls_file, "declaration file");
  check_cmd->add_option("--var-decl", ca.inline_decls,
                        "inline declaration 'name dim structure'");
  check_cmd->add_option("--points", ca.points, "random points to test")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", ca.seed, "random seed");
  check_cmd->add_option("--h", ca.h, "finite-difference step")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--tol", ca.tol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--out", ca.out, "write a JSON record here");

  OptimizeArgs oa;
  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "solve the constrained problem in a problem file");
  optimize_cmd->add_option("file", oa.file, "problem file")->required();
  optimize_cmd
      ->add_option("--method", oa.method,
                   "auto (default), closed, or iterative")
      ->check(CLI::IsMember({"auto", "closed", "iterative"}));
  optimize_cmd->add_option("--gtol", oa.gtol, "stationarity tolerance")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--ctol", oa.ctol, "constraint tolerance")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--seed", oa.seed, "random seed");
  optimize_cmd->add_option("--out", oa.out, "write the JSON report here");

  DemoArgs dma;
  CLI::App* demo_cmd = app.add_subcommand(
      "demo", "run the worked examples, closed forms against the solver");
  demo_cmd->add_option("--seed", dma.seed, "random seed");
  demo_cmd->add_option("--out", dma.out, "write a JSON record here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(derive_cmd)) return cmd_derive(da);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(ea);
    if (app.got_subcommand(check_cmd)) return cmd_check(ca);
    if (app.got_subcommand(optimize_cmd)) return cmd_optimize(oa);
    if (app.got_subcommand(demo_cmd)) return cmd_demo(dma);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DeclError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const FDError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DeriveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
