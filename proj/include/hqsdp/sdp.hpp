#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hqsdp/instance.hpp"
#include "hqsdp/matrix.hpp"

namespace hqsdp {

// ---------------------------------------------------------------------------
// Generic dense conic program over  K = S^n_+ x R^p_+  in equality form
//
//   min  <C, X> + c_lin' x_lin   s.t.  <A_i, X> + a_lin(i,:) x_lin = b_i,
//
// with dual  max b'y  s.t.  C - sum_i y_i A_i = Z >= 0,  c_lin - a_lin' y >= 0.
// ---------------------------------------------------------------------------

struct ConicProblem {
  int psd_dim = 0;
  int num_linear = 0;
  std::vector<Matrix> a_psd;  // one symmetric psd_dim x psd_dim matrix per row
  Matrix a_lin;               // rows x num_linear
  Vector b;
  Matrix c_psd;
  Vector c_lin;

  int rows() const { return static_cast<int>(b.size()); }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };
std::string to_string(SolveStatus s);

struct SolverSettings {
  int max_iterations = 200;
  double step_fraction = 0.98;
  double gap_tol = 1e-8;       // relative duality gap at which to stop
  double feas_tol = 1e-9;      // relative primal/dual residual at which to stop
  double cert_tol = 1e-11;     // certificate residual at which to stop
  double infeas_tol = 1e-8;    // certificate residual accepted when progress stalls
  double fallback_tol = 1e-7;  // accepted as optimal when progress stalls
};

struct ConicResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Matrix x_psd;
  Vector x_lin;
  Vector y;
  Matrix z_psd;
  Vector z_lin;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // relative, on the unscaled data
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  // Infeasible: (y, z) with b'y = 1 and A'y + z = 0.  Unbounded: x with
  // Ax = 0 and <c,x> = -1.  Stored in the primal/dual fields above.
};

/// Primal-dual path following on the homogeneous self-dual embedding with
/// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
ConicResult solve_conic(const ConicProblem& problem, const SolverSettings& settings = {});

// ---------------------------------------------------------------------------
// SDP relaxation of a homogeneous QCQP
// ---------------------------------------------------------------------------

/// min / max Tr(C X) s.t. Tr(A_k X) >= rhs (min) or <= rhs (max), X >= 0.
/// Complex instances are embedded into real matrices of size 2n with rhs 2,
/// so every trace value is twice its complex counterpart.
struct Relaxation {
  Sense sense = Sense::Minimize;
  Field field = Field::Real;
  SymMatrix objective;
  std::vector<SymMatrix> constraints;
  double rhs = 1.0;

  int dim() const { return objective.n(); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  /// Slack-augmented equality form: Tr(A_k X) -/+ s_k = rhs, minimizing.
  ConicProblem standard_form() const;
};

Relaxation build_relaxation(const QcqpInstance& inst);

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Sense sense = Sense::Minimize;
  Field field = Field::Real;
  SymMatrix X;                      // embedded (2n) for complex instances
  double objective_value = 0.0;     // in the instance's own normalization
  double dual_objective = 0.0;
  std::vector<double> dual_multipliers;  // >= 0, one per constraint
  SymMatrix dual_slack;             // C - sum y_k A_k (min) or sum y_k A_k - C (max)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  /// Unbounded: PSD direction D with Tr(A_k D) <= 0 (max) / >= 0 (min) and
  /// strictly improving objective.
  std::optional<SymMatrix> ray;
  /// Infeasible: mu >= 0, sum mu = 1, with sum mu_k A_k <= 0 (min) or >= 0 (max)
  /// contradicting every feasible X.
  std::vector<double> farkas;

  /// Numerical rank of X with eigenvalues below tol * lambda_max treated as
  /// zero; halved for complex instances.
  int rank(double tol = 1e-9) const;
  /// The Hermitian Z recovered from the embedded X (complex instances).
  HermMatrix complex_X() const;
};

SdpSolution solve(const Relaxation& relaxation, const SolverSettings& settings = {});
inline SdpSolution solve(const QcqpInstance& inst, const SolverSettings& settings = {}) {
  return solve(build_relaxation(inst), settings);
}

// ---------------------------------------------------------------------------
// Slater-type probes
// ---------------------------------------------------------------------------

struct SlaterProbe {
  bool holds = false;        // verified: sign * sum mu_k A_k has lambda_min > 1e-9 scale
  bool determinate = false;  // false when the auxiliary solve failed
  double margin = 0.0;       // optimal t of  max t s.t. sign * sum mu_k A_k >= t I, sum mu = 1
  std::vector<double> multipliers;
};

struct SlaterReport {
  SlaterProbe positive;  // sum mu_k A_k > 0
  SlaterProbe negative;  // sum mu_k A_k < 0
  /// The probe matching the instance's sense as the assumption is stated in
  /// the literature: positive for maximization, negative for minimization.
  bool dual_slater = false;
};

SlaterProbe slater_probe(const std::vector<SymMatrix>& constraints, double sign,
                         const SolverSettings& settings = {});
SlaterReport slater_check(const QcqpInstance& inst, const SolverSettings& settings = {});

/// True when the minimization relaxation is strictly feasible, i.e. some
/// X >= 0 has Tr(A_k X) > 0 for all k; equivalent to a negative margin in the
/// negative-sign probe.
bool min_form_strictly_feasible(const QcqpInstance& inst, const SolverSettings& settings = {});

}  // namespace hqsdp
