#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hqsdp/instance.hpp"
#include "hqsdp/sdp.hpp"

namespace hqsdp {

// ---------------------------------------------------------------------------
// Random families
// ---------------------------------------------------------------------------

enum class GeneratorCase {
  A_OneIndef_RestPD,
  B_TenPctIndef_RestPD,
  C_OneIndef_RestRank1,
  D_TenPctIndef_RestRank1,
};
enum class ObjectiveKind { Identity, Indefinite };

std::string to_string(GeneratorCase c);  // "a".."d"
GeneratorCase case_from_string(const std::string& s);

/// m counts constraints beyond the first: the instance has m + 1 of them.
struct GeneratorSpec {
  int n = 10;
  int m = 5;
  GeneratorCase gen_case = GeneratorCase::A_OneIndef_RestPD;
  Sense sense = Sense::Minimize;
  ObjectiveKind objective_kind = ObjectiveKind::Identity;
  Field field = Field::Real;
  std::uint64_t seed = 0;

  /// Identity objective for minimization, indefinite for maximization.
  static GeneratorSpec standard(GeneratorCase c, int n, int m, Sense sense, std::uint64_t seed,
                                Field field = Field::Real);
  int num_indefinite() const;
};

struct GeneratedInstance {
  QcqpInstance instance;
  int retries = 0;  // minimization draws rejected as infeasible
};

/// Each matrix is rand * Q^* D Q with Q orthogonal (unitary) from a QR
/// factorization of a Gaussian matrix and D = diag(|randn|) (full-rank PSD),
/// diag(|randn|, 0, ..., 0) (rank one) or diag(randn) (indefinite). The
/// indefinite constraints come first.
GeneratedInstance generate_detailed(const GeneratorSpec& spec);
QcqpInstance generate(const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Canonical examples
// ---------------------------------------------------------------------------

enum class CanonicalId { MinMExample, Example3_7, Example4_3, Example4_4 };
std::string to_string(CanonicalId id);
CanonicalId canonical_from_string(const std::string& s);

struct CanonicalExample {
  CanonicalId id = CanonicalId::MinMExample;
  std::optional<double> M;
  QcqpInstance instance;
  std::map<std::string, double> known_values;
  std::optional<SolveStatus> expected_status;
  std::optional<Vector> feasible_point;
};

/// Small instances with analytically known relaxation and QP values.
///   MinMExample(M): min x1^2 + x2^2  s.t.  x2^2 >= 1, x1^2 + M x1 x2 >= 1, x1^2 - M x1 x2 >= 1
///   Example3_7:     min x4^2 with two indefinite coupling constraints
///   Example4_3(M):  max x1^2 + x2^2/M  s.t.  +/-M x1 x2 + x2^2 <= 1, M (x1^2 - x2^2) <= 1
///   Example4_4:     max x1 x2 + x1^2  s.t.  x1 x2 <= 1, x1^2 - x2^2 <= 1
CanonicalExample canonical(CanonicalId id, std::optional<double> M = std::nullopt);

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

struct BruteForceResult {
  double value = 0.0;  // +/-inf when unbounded
  bool unbounded = false;
  bool feasible = false;
  Vector x;  // optimal point in the embedded space (empty when unbounded)
  long long evaluations = 0;
};

/// Global search over directions: for a unit vector u the best multiple of u
/// is found in closed form, so the QP reduces to optimizing a function on the
/// sphere. A dense angular grid is followed by pattern-search refinement.
/// Supports embedded dimension <= 4. `grid` is the number of steps per
/// angle (0 picks a dimension-dependent default).
BruteForceResult brute_force_qcqp(const QcqpInstance& inst, int grid = 0);

}  // namespace hqsdp
