#include "hqsdp/instance.hpp"

#include <algorithm>
#include <cmath>

namespace hqsdp {

std::string to_string(Sense s) { return s == Sense::Minimize ? "min" : "max"; }
std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PSD: return "psd";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::NSD: return "nsd";
  }
  return "unknown";
}

Definiteness classify(const HermMatrix& a) {
  const double scale = std::sqrt(a.re().squaredNorm() + a.im().squaredNorm());
  const double tol = 1e-9 * scale;
  const Vector eig = a.is_real() ? sym_eig(a.real_part()).eigenvalues : herm_eig(a).eigenvalues;
  if (eig.minCoeff() >= -tol) return Definiteness::PSD;
  if (eig.maxCoeff() <= tol) return Definiteness::NSD;
  return Definiteness::Indefinite;
}

QcqpInstance::QcqpInstance(Sense sense, Field field, HermMatrix objective,
                           std::vector<HermMatrix> constraints)
    : sense_(sense), field_(field), objective_(std::move(objective)), constraints_(std::move(constraints)) {
  if (objective_.empty()) throw std::invalid_argument("QcqpInstance: empty objective");
  if (constraints_.empty()) throw std::invalid_argument("QcqpInstance: at least one constraint is required");
  for (const auto& a : constraints_)
    if (a.n() != objective_.n()) throw DimensionMismatch("QcqpInstance: all matrices must share dimension n");
  if (field_ == Field::Real) {
    if (!objective_.is_real()) throw std::invalid_argument("QcqpInstance: real instance with complex objective");
    for (const auto& a : constraints_)
      if (!a.is_real()) throw std::invalid_argument("QcqpInstance: real instance with complex constraint");
  }
  tags_.reserve(constraints_.size());
  embedded_.reserve(constraints_.size());
  for (const auto& a : constraints_) {
    tags_.push_back(classify(a));
    embedded_.push_back(field_ == Field::Complex ? herm_embed(a) : a.real_part());
  }
  embedded_objective_ = field_ == Field::Complex ? herm_embed(objective_) : objective_.real_part();
}

int QcqpInstance::count_tagged(Definiteness d) const {
  return static_cast<int>(std::count(tags_.begin(), tags_.end(), d));
}

SymMatrix QcqpInstance::embedded_objective() const { return embedded_objective_; }
std::vector<SymMatrix> QcqpInstance::embedded_constraints() const { return embedded_; }

double QcqpInstance::objective_value(const Vector& x) const {
  return x.dot(embedded_objective_.dense() * x);
}

std::vector<double> QcqpInstance::constraint_values(const Vector& x) const {
  std::vector<double> v;
  v.reserve(embedded_.size());
  for (const auto& a : embedded_) v.push_back(x.dot(a.dense() * x));
  return v;
}

double QcqpInstance::max_violation(const Vector& x) const {
  double worst = 0.0;
  for (double v : constraint_values(x))
    worst = std::max(worst, sense_ == Sense::Minimize ? 1.0 - v : v - 1.0);
  return worst;
}

}  // namespace hqsdp
