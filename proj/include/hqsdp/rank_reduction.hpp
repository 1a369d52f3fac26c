#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hqsdp/instance.hpp"
#include "hqsdp/matrix.hpp"
#include "hqsdp/sdp.hpp"

namespace hqsdp {

class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Low-rank optimal solution X = U U^T of a relaxation.
///
/// For complex instances `complex_factor` is the n x r factor V of the
/// Hermitian solution Z = V V*, and `U` is its real embedding (2n x 2r), so
/// quadratic forms in the embedded space match the complex ones.
struct LowRankSolution {
  Field field = Field::Real;
  Matrix U;
  CMatrix complex_factor;
  int rank = 0;                        // r, in the instance's own field
  double objective_value = 0.0;        // instance normalization
  std::vector<double> constraint_values;
  SymMatrix X;                         // embedded reduced solution, = U U^T
  bool bound_met = false;              // r(r+1)/2 <= #constraints (real), r^2 <= #constraints (complex)
  int steps = 0;

  int embedded_rank() const { return static_cast<int>(U.cols()); }
};

/// Largest rank permitted by the Pataki-type bound for `num_constraints`.
int pataki_rank_bound(int num_constraints, Field field);

/// Columns sqrt(lambda_i) q_i for eigenvalues above tol * lambda_max.
/// Throws NotPsdError when some eigenvalue is below -tol * max(1, lambda_max).
Matrix factorize(const SymMatrix& X, double tol = 1e-9);
CMatrix factorize(const HermMatrix& Z, double tol = 1e-9);

struct RankReductionSettings {
  double rank_tol = 1e-9;
  double noise_tol = 1e-7;  // directions below noise_tol * lambda_max may be dropped when stepping stalls
  int max_steps = 0;  // 0 selects 10 n + 10
};

/// Moves along null-space directions of the constraint maps inside range(X)
/// until the rank bound holds. Objective and constraint values are preserved. The seed selects the
/// direction within a multi-dimensional null space.
LowRankSolution reduce_rank(const SdpSolution& sol, const QcqpInstance& inst, std::uint64_t seed = 0,
                            const RankReductionSettings& settings = {});

/// Wraps an SDP solution as a factorized solution without reducing it.
LowRankSolution factor_solution(const SdpSolution& sol, const QcqpInstance& inst, double tol = 1e-9);

}  // namespace hqsdp
