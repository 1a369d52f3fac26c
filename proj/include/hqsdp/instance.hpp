#pragma once

#include <string>
#include <vector>

#include "hqsdp/matrix.hpp"

namespace hqsdp {

enum class Sense { Minimize, Maximize };
enum class Field { Real, Complex };
enum class Definiteness { PSD, Indefinite, NSD };

std::string to_string(Sense s);
std::string to_string(Field f);
std::string to_string(Definiteness d);

/// PSD when lambda_min >= -1e-9 ||A||_F, NSD when lambda_max <= 1e-9 ||A||_F,
/// Indefinite otherwise. PSD wins for the zero matrix.
Definiteness classify(const HermMatrix& a);

/// Homogeneous quadratic program
///   min / max  x* C x   s.t.  x* A_k x >= 1 (min) or <= 1 (max),  k = 0..m.
/// Real instances carry zero imaginary parts.
class QcqpInstance {
 public:
  QcqpInstance(Sense sense, Field field, HermMatrix objective, std::vector<HermMatrix> constraints);

  Sense sense() const { return sense_; }
  Field field() const { return field_; }
  int n() const { return objective_.n(); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const HermMatrix& objective() const { return objective_; }
  const std::vector<HermMatrix>& constraints() const { return constraints_; }
  const std::vector<Definiteness>& tags() const { return tags_; }
  int count_tagged(Definiteness d) const;

  /// Dimension of the real matrices the solver sees (n, or 2n for complex).
  int embedded_dim() const { return field_ == Field::Complex ? 2 * n() : n(); }
  /// Right-hand side in the embedded space: 1 for real, 2 for complex.
  double embedded_rhs() const { return field_ == Field::Complex ? 2.0 : 1.0; }
  SymMatrix embedded_objective() const;
  std::vector<SymMatrix> embedded_constraints() const;

  /// Quadratic form values for an embedded real vector (length embedded_dim).
  double objective_value(const Vector& x) const;
  std::vector<double> constraint_values(const Vector& x) const;
  /// Largest violation of x* A_k x >= 1 (or <= 1), zero when feasible.
  double max_violation(const Vector& x) const;

 private:
  Sense sense_;
  Field field_;
  HermMatrix objective_;
  std::vector<HermMatrix> constraints_;
  std::vector<Definiteness> tags_;
  std::vector<SymMatrix> embedded_;
  SymMatrix embedded_objective_;
};

}  // namespace hqsdp
