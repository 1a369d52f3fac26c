#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hqsdp/instance.hpp"
#include "hqsdp/random.hpp"
#include "hqsdp/rank_reduction.hpp"
#include "hqsdp/sdp.hpp"

namespace hqsdp {

enum class Scheme { GaussianMin, SignMax, GaussianMax };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct RoundingParams {
  Scheme scheme = Scheme::GaussianMin;
  int num_samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> gamma;  // joint-event constraint level (minimization)
  std::optional<double> mu;     // joint-event objective factor (minimization)
  std::optional<double> alpha;  // joint-event constraint level (maximization)
  Execution execution = Execution::Parallel;

  void validate() const;
};

struct RoundingReport {
  Scheme scheme = Scheme::GaussianMin;
  std::uint64_t seed = 0;
  int num_samples = 0;
  bool success = false;
  std::string failure;
  std::string warning;

  Vector best_x;  // embedded (2n) for complex instances
  int best_index = -1;
  double best_objective = 0.0;
  double v_sdp = 0.0;
  double empirical_ratio = 0.0;  // v_hat/v_sdp (min) or v_sdp/v_hat (max); inf when undefined
  int samples_feasible = 0;
  int samples_discarded = 0;
  int rank = 0;

  bool bound_claimed = false;
  double theoretical_bound = 0.0;  // +inf when not claimed
  bool certificate_satisfied = false;

  // Frequency of the fixed-constant event used in the existence argument.
  double event_gamma = 0.0, event_mu = 0.0, event_alpha = 0.0;
  int joint_event_count = 0;
};

/// 10^6 m^2 / pi (real) or 2400 m (complex, 1 when m <= 3).
double bound_certificate_min(int m, Field field);

struct MaxBoundCertificate {
  double alpha = 0.0;  // the event level, equal to the bound
  double bound = 0.0;
  std::vector<double> frobenius;  // ||A_k X||_F per constraint (instance normalization)
  std::vector<bool> indefinite;   // membership in the non-PSD index set
  int num_indefinite = 0;
  int num_psd = 0;
};

/// Data-dependent ratio bound for the maximization form with any number of
/// indefinite constraints. Non-PSD (including NSD) constraints are counted as
/// indefinite. `X` is the embedded solution for complex instances.
MaxBoundCertificate bound_certificate_max(const QcqpInstance& inst, const SymMatrix& X);

/// 2 log(174 m mu_eff) with mu_eff = min{m, max_k rank(A_k X)}.
double bound_sign_max(int m, int mu_eff);

/// Per-constraint failure bound for Gaussian samples of a PSD constraint:
/// max{sqrt(g), 2(r-1)g/(pi-2)} (real) or max{4g/3, 16(r-1)^2 g^2} (complex).
double quoted_tail_bounds(double gamma, int r, Field field);
/// 2 m mu exp(-alpha/2): tail of max_k xi' A_k xi over sign vectors.
double sign_tail_bound(int m, int mu, double alpha);
/// Union-bound lower estimate of the joint-event probability for the
/// minimization rounding: p0 - m * quoted_tail_bounds - 1/mu, with
/// p0 = 3/100 (real) or 1/20 (complex).
double min_event_probability_bound(int m, int r, Field field, double gamma, double mu);

double default_gamma(int m, Field field);
double default_mu(Field field);

// ---------------------------------------------------------------------------
// Sample kernel
// ---------------------------------------------------------------------------

/// Quadratic forms compressed to the factor's column space: a sample is
/// g in R^r (Gaussian with per-coordinate scale, or +/-1), and
/// q_k = g' A_k g, c = g' C g.
struct SampleKernel {
  enum class Draw { Gaussian, Sign };
  enum class Bind { Min, Max };
  Draw draw = Draw::Gaussian;
  Bind bind = Bind::Min;
  double noise_scale = 1.0;
  std::vector<Matrix> A;
  Matrix C;
  // Joint event: Bind::Min  -> q_k >= level for all k and c <= objective_level,
  //              Bind::Max  -> q_k <= level for all k and c >= objective_level.
  double level = 0.0;
  bool check_objective = false;
  double objective_level = 0.0;

  int dim() const { return static_cast<int>(C.rows()); }
  Vector draw_sample(std::uint64_t seed, int index) const;
};

struct SampleOutcome {
  double binding = 0.0;    // min_k q_k or max_k q_k
  double objective = 0.0;  // c / binding, meaningful when feasible
  bool feasible = false;
  bool joint_event = false;
};

/// Evaluates samples 0..count-1 with sample i drawn from derive_seed(seed, i).
/// Serial and parallel execution return identical vectors.
std::vector<SampleOutcome> evaluate_samples(const SampleKernel& kernel, int count, std::uint64_t seed,
                                            Execution execution);

// ---------------------------------------------------------------------------
// Rounding schemes
// ---------------------------------------------------------------------------

/// Gaussian samples of the low-rank solution, each rescaled by its smallest
/// constraint value; best objective among feasible samples.
RoundingReport gaussian_round_min(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p);

/// Sign vectors through the factor rotated to diagonalize U'CU, rescaled by
/// the largest constraint value.
RoundingReport sign_round_max(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p);

/// Gaussian samples of the SDP solution, rescaled by the largest constraint
/// value.
RoundingReport gaussian_round_max(const QcqpInstance& inst, const LowRankSolution& factored, const RoundingParams& p);
RoundingReport gaussian_round_max(const QcqpInstance& inst, const SdpSolution& sol, const RoundingParams& p);

/// Dispatches on p.scheme.
RoundingReport round(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p);

}  // namespace hqsdp
