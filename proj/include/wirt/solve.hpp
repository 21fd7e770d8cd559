#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wirt/expr.hpp"

namespace wirt {

// The problem statement cannot be solved as posed: an equality target outside
// the reachable range, or a degenerate geometry with no unique solution.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ill-posed solver input (non-real objective, unsupported combination).
struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Direction { Minimize, Maximize, StationaryOnly };

struct Constraint {
  ScalarExpr expr;   // g(Z)
  cxd target;        // enforce g(Z) = target (complex targets split Re/Im)
  std::string name;  // multiplier label in reports
};

// One matrix variable, a scalar objective, equality constraints. `density`
// additionally confines iterates to density matrices (Hermitian, positive
// semidefinite, unit trace), which keeps entropy objectives evaluable.
struct Problem {
  ScalarExpr objective;
  Direction direction = Direction::Minimize;
  VariableDecl variable;
  std::vector<Constraint> constraints;
  bool density = false;
  std::map<std::string, double> params;
};

struct SolveOptions {
  double gtol = 1e-7;   // stationarity residual target
  double ctol = 1e-8;   // constraint residual target
  int max_outer = 40;   // multiplier updates
  int max_inner = 2000; // descent steps per multiplier update
  uint64_t seed = 0;    // starting-point randomness
  std::optional<ComplexMatrix> start;
};

struct SolveReport {
  bool converged = false;
  ComplexMatrix solution;
  double objective_value = 0.0;
  // Fitted real multipliers of the original objective's gradient against the
  // constraint gradients, keyed "<name>_re" / "<name>_im".
  std::map<std::string, double> multipliers;
  double grad_residual = 0.0;        // || grad f - sum lam_k grad g_k ||_F
  double constraint_residual = 0.0;  // max |g_k - target_k|
  int outer_iterations = 0;
  int inner_iterations = 0;
  std::string message;

  SolveReport() : solution(1) {}
};

// Augmented-Lagrangian descent on the structure-corrected Wirtinger
// gradient. StationaryOnly minimizes || grad f ||_F^2 instead and accepts no
// constraints.
SolveReport solve(const Problem& problem, const SolveOptions& opts = {});

// First-order optimality of a candidate point, measured symbolically: the
// structure-corrected gradient of the objective is fitted against the
// constraint gradients, and the residual of that fit is the distance from
// stationarity. Used to certify closed-form solutions with the same
// machinery the iterative path trusts.
struct StationarityReport {
  double objective_value = 0.0;
  double gradient_norm = 0.0;        // || grad f ||_F, for relative gates
  double grad_residual = 0.0;        // || grad f - sum lam_k grad g_k ||_F
  double constraint_residual = 0.0;  // max |g_k - target_k|
  std::map<std::string, double> multipliers;
};
StationarityReport check_stationarity(const Problem& problem,
                                      const ComplexMatrix& z);

// ---- Closed forms for the worked problems ----

// Minimize tr(rho^2) over density matrices: the maximally mixed state.
struct PurityResult {
  ComplexMatrix rho;
  double lambda;  // multiplier of tr(rho) = 1
  double purity;
};
PurityResult purity_minimum(int n);

// Maximize -tr(rho log rho) over density matrices.
struct EntropyResult {
  ComplexMatrix rho;
  double lambda;
  double entropy;
};
EntropyResult entropy_maximum(int n);

// Maximize entropy subject to tr(rho h) = energy: the Gibbs state
// exp(-beta h)/Z. Requires min eig(h) < energy < max eig(h) strictly;
// otherwise InfeasibleError.
struct GibbsResult {
  ComplexMatrix rho;
  double beta;     // multiplier of the energy constraint
  double eta;      // multiplier of the normalization constraint, log Z - 1
  double energy;   // achieved tr(rho h)
  double entropy;
};
GibbsResult gibbs_state(const ComplexMatrix& h, double energy,
                        double beta_tol = 1e-13);

// Minimize || t - l ||_F^2 subject to || t ||_F = c_norm and/or
// tr(t) = d_trace. The stationarity identity is (1 + lambda) t = l - eta I.
struct FrobeniusResult {
  ComplexMatrix t;
  double lambda;
  cxd eta;
  double distance;  // || t - l ||_F
};
FrobeniusResult frobenius_fit(const ComplexMatrix& l, double c_norm,
                              cxd d_trace);
FrobeniusResult frobenius_fit_norm(const ComplexMatrix& l, double c_norm);
FrobeniusResult frobenius_fit_trace(const ComplexMatrix& l, cxd d_trace);

}  // namespace wirt
