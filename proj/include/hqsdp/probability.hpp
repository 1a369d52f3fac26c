#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqsdp/instance.hpp"
#include "hqsdp/matrix.hpp"
#include "hqsdp/random.hpp"

namespace hqsdp {

enum class LemmaId { L2_1, L2_2, L3_1, L3_2, L3_4, L3_5, L4_1, L5_1 };
enum class Method { Exhaustive, MonteCarlo, ClosedForm };
enum class AsymKind { ChiSq, Exp, Bernoulli };

std::string to_string(LemmaId id);
LemmaId lemma_from_string(const std::string& s);
std::string to_string(Method m);

class IllConditionedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AsymmetryResult {
  LemmaId lemma_id = LemmaId::L3_1;
  double analytic_lower_bound = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double confidence_radius = 0.0;  // 95%
  Method method = Method::MonteCarlo;
  long long samples = 0;

  /// estimate - 3 standard errors clears the analytic bound.
  bool clears_bound() const { return estimate - 3.0 * standard_error > analytic_lower_bound; }
};

struct TailBoundParams {
  std::vector<double> lambdas;
  double sigma = 0.0;  // sqrt(sum lambda^2)
  double delta = 0.0;  // max{max lambda, 0}
  double alpha = 0.0;
  Field field = Field::Real;

  static TailBoundParams make(std::vector<double> lambdas, double alpha, Field field);
  /// Throws when sigma/delta disagree with the lambdas beyond 1e-12.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Moment-based asymmetry bounds
// ---------------------------------------------------------------------------

/// 0.25 tau^{-2/(t-2)}; for t = 4 the sharper (2 sqrt 3 - 3)/tau.
double asym_bound_moment(double t, double tau);
/// E(sum tau_i (eta_i^2 - 1))^4 for standard normals.
double chi2_moment4(const std::vector<double>& taus);
/// E(sum tau_i (eta_i - 1))^4 for unit exponentials.
double exp_moment4(const std::vector<double>& taus);
/// E(sum_{i<j} w_ij xi_i xi_j)^4 for Rademacher xi, from the strict upper
/// triangle of w.
double bernoulli_moment4(const Matrix& w);

struct BernoulliEnumeration {
  double prob_nonpositive = 0.0;  // Prob{Psi <= 0}
  double moment2 = 0.0;
  double moment4 = 0.0;
};
/// Exact distribution summary of Psi by enumerating all 2^n sign vectors
/// (xi_1 fixed to +1 by symmetry). n <= 20.
BernoulliEnumeration bernoulli_enumerate(const Matrix& w, Execution execution = Execution::Parallel);

/// Strict upper triangle of w in row-major order, and back.
Vector pack_upper(const Matrix& w);
Matrix unpack_upper(const Vector& packed);

// ---------------------------------------------------------------------------
// Probability estimators
// ---------------------------------------------------------------------------

struct EstimatorOptions {
  long long samples = 1'000'000;
  std::uint64_t seed = 0;
  Execution execution = Execution::Parallel;
};

/// ChiSq: Prob{sum tau_i (eta_i^2 - 1) >= 0};  Exp: Prob{sum tau_i (eta_i - 1) >= 0};
/// Bernoulli (weights = packed upper triangle): Prob{sum w_ij xi_i xi_j <= 0}.
/// Exhaustive applies to Bernoulli with n <= 20, ClosedForm to Exp with
/// distinct positive weights; otherwise Monte Carlo.
AsymmetryResult asym_prob(AsymKind kind, const std::vector<double>& weights, Method method,
                          const EstimatorOptions& opt = {});

/// Prob{xi* A xi >= gamma E(xi* A xi)} for xi ~ N(0, Z) (real) or N_c(0, Z)
/// (complex) by Monte Carlo; requires Tr(AZ) >= 0 and gamma in [0, 1].
AsymmetryResult matrix_asym_prob(const HermMatrix& A, const HermMatrix& Z, double gamma, Field field,
                                 const EstimatorOptions& opt = {});

/// Prob{sum tau_i (eta_i - 1) >= 0} for unit exponentials and distinct
/// positive tau, after normalizing sum tau = 1.
double exp_closed_form(const std::vector<double>& taus);

struct ConjectureScan {
  double min_found = 0.0;
  std::vector<double> argmin;
  double max_found = 0.0;
  long long evaluated = 0;
  // Mixed-sign weights, estimated by Monte Carlo.
  double mixed_min_estimate = 0.0;
  double mixed_standard_error = 0.0;
  std::vector<double> mixed_argmin;
};

/// Scans normalized positive tau on a simplex grid of the given resolution
/// through the closed form, then probes mixed-sign directions by Monte Carlo.
ConjectureScan conjecture_3_3_scan(int n, double grid_resolution, int mixed_directions = 32,
                                   const EstimatorOptions& opt = {200'000, 0, Execution::Parallel});

// ---------------------------------------------------------------------------
// Tail bounds
// ---------------------------------------------------------------------------

/// exp(-min{alpha, sigma/delta} alpha/8) (real) or .../4 (complex), bounding
/// Prob{sum lambda_i |eta_i|^2 - sum lambda_i >= alpha sigma}.
double chernoff_tail(const TailBoundParams& p);
/// 2 sum lambda^2 / (alpha - 1)^2.
double chebyshev_tail(const std::vector<double>& lambdas, double alpha);
/// Checks 1/(1-t) <= exp(t + t^2).
bool exp_ineq_5_3(double t);
/// Prob{|eta|^2 <= a} for eta ~ N_c(0,1), i.e. 1 - e^{-a}.
double complex_modulus_cdf(double a);

/// Monte Carlo frequency of the event bounded by chernoff_tail.
AsymmetryResult chernoff_event_frequency(const TailBoundParams& p, const EstimatorOptions& opt = {});
/// Monte Carlo frequency of |sum lambda_i |eta_i|^2 - sum lambda_i| >= alpha - 1.
AsymmetryResult chebyshev_event_frequency(const std::vector<double>& lambdas, double alpha, Field field,
                                          const EstimatorOptions& opt = {});

constexpr long long kMonteCarloBlock = 1 << 16;

/// Shards `samples` Bernoulli trials into fixed-size blocks, block b drawing
/// from derive_seed(seed, b); returns the success count. Result does not
/// depend on execution mode or thread count.
template <typename Trial>
long long monte_carlo_count(long long samples, std::uint64_t seed, Execution execution, const Trial& trial) {
  const long long blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  long long total = 0;
  auto run_block = [&](long long b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const long long begin = b * kMonteCarloBlock;
    const long long end = std::min(samples, begin + kMonteCarloBlock);
    long long hits = 0;
    for (long long i = begin; i < end; ++i)
      if (trial(rng)) ++hits;
    return hits;
  };
  if (execution == Execution::Serial) {
    for (long long b = 0; b < blocks; ++b) total += run_block(b);
  } else {
#pragma omp parallel for schedule(dynamic) reduction(+ : total) num_threads(thread_count())
    for (long long b = 0; b < blocks; ++b) total += run_block(b);
  }
  return total;
}

}  // namespace hqsdp
