#include "hqsdp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

namespace hqsdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_min(double best, double v_sdp) {
  if (v_sdp > 1e-12) return best / v_sdp;
  return best > 1e-12 ? kInf : 1.0;
}

double ratio_max(double best, double v_sdp) {
  if (best > 1e-12) return v_sdp / best;
  return v_sdp > 1e-12 ? kInf : 1.0;
}

SampleOutcome evaluate_one(const SampleKernel& k, std::uint64_t seed, int index) {
  const Vector g = k.draw_sample(seed, index);
  SampleOutcome out;
  const double c = g.dot(k.C * g);
  const bool min_bind = k.bind == SampleKernel::Bind::Min;
  double binding = min_bind ? kInf : -kInf;
  bool event = true;
  for (const auto& a : k.A) {
    const double q = g.dot(a * g);
    binding = min_bind ? std::min(binding, q) : std::max(binding, q);
    event = event && (min_bind ? q >= k.level : q <= k.level);
  }
  if (k.check_objective) event = event && (min_bind ? c <= k.objective_level : c >= k.objective_level);
  out.binding = binding;
  out.feasible = binding > 0.0 && std::isfinite(binding);
  out.objective = out.feasible ? c / binding : 0.0;
  out.joint_event = event;
  return out;
}

struct Compressed {
  Matrix basis;  // U, or U Q for sign rounding
  SampleKernel kernel;
};

Compressed compress(const QcqpInstance& inst, const Matrix& basis) {
  Compressed out;
  out.basis = basis;
  for (const auto& a : inst.embedded_constraints()) out.kernel.A.push_back(basis.transpose() * a.dense() * basis);
  out.kernel.C = basis.transpose() * inst.embedded_objective().dense() * basis;
  return out;
}

void reduce_outcomes(const std::vector<SampleOutcome>& outs, bool maximize, RoundingReport& rep) {
  for (int i = 0; i < static_cast<int>(outs.size()); ++i) {
    const auto& o = outs[i];
    if (o.joint_event) ++rep.joint_event_count;
    if (!o.feasible) {
      ++rep.samples_discarded;
      continue;
    }
    ++rep.samples_feasible;
    const bool better = rep.best_index < 0 || (maximize ? o.objective > rep.best_objective : o.objective < rep.best_objective);
    if (better) {
      rep.best_index = i;
      rep.best_objective = o.objective;
    }
  }
}

RoundingReport run(const QcqpInstance& inst, const Compressed& comp, const RoundingParams& p, RoundingReport rep) {
  rep.scheme = p.scheme;
  rep.seed = p.seed;
  rep.num_samples = p.num_samples;
  const bool maximize = comp.kernel.bind == SampleKernel::Bind::Max;
  if (comp.basis.cols() == 0) {
    rep.failure = "solution has rank zero";
    return rep;
  }
  const auto outs = evaluate_samples(comp.kernel, p.num_samples, p.seed, p.execution);
  reduce_outcomes(outs, maximize, rep);
  if (rep.best_index < 0) {
    rep.failure = "no feasible sample";
    rep.empirical_ratio = kInf;
    return rep;
  }
  const Vector g = comp.kernel.draw_sample(p.seed, rep.best_index);
  rep.best_x = comp.basis * g / std::sqrt(outs[rep.best_index].binding);
  rep.best_objective = inst.objective_value(rep.best_x);
  rep.success = true;
  rep.empirical_ratio = maximize ? ratio_max(rep.best_objective, rep.v_sdp) : ratio_min(rep.best_objective, rep.v_sdp);
  rep.certificate_satisfied = rep.bound_claimed && rep.empirical_ratio <= rep.theoretical_bound * (1.0 + 1e-12);
  return rep;
}

int product_rank(const SymMatrix& a, const Matrix& u) {
  if (u.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a.dense() * u);
  const Vector sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * std::max(sv(0), 1e-300)) ++r;
  return r;
}

void require_sense(const QcqpInstance& inst, Sense s, const char* who) {
  if (inst.sense() != s) throw std::invalid_argument(std::string(who) + ": wrong problem sense");
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::GaussianMin: return "gaussian-min";
    case Scheme::SignMax: return "sign-max";
    case Scheme::GaussianMax: return "gaussian-max";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "gaussian-min") return Scheme::GaussianMin;
  if (s == "sign-max") return Scheme::SignMax;
  if (s == "gaussian-max") return Scheme::GaussianMax;
  throw std::invalid_argument("unknown rounding scheme: " + s);
}

void RoundingParams::validate() const {
  if (num_samples < 1) throw std::invalid_argument("RoundingParams: num_samples must be >= 1");
  if (gamma && !(*gamma > 0.0 && *gamma <= 1.0)) throw std::invalid_argument("RoundingParams: gamma must lie in (0, 1]");
  if (mu && !(*mu > 1.0)) throw std::invalid_argument("RoundingParams: mu must exceed 1");
  if (alpha && !(*alpha > 1.0)) throw std::invalid_argument("RoundingParams: alpha must exceed 1");
}

double bound_certificate_min(int m, Field field) {
  if (m < 1) throw std::invalid_argument("bound_certificate_min: m must be >= 1");
  if (field == Field::Real) return 1e6 * m * m / std::numbers::pi;
  return m <= 3 ? 1.0 : 2400.0 * m;
}

MaxBoundCertificate bound_certificate_max(const QcqpInstance& inst, const SymMatrix& X) {
  if (X.n() != inst.embedded_dim()) throw DimensionMismatch("bound_certificate_max: X size does not match instance");
  MaxBoundCertificate cert;
  const bool complex = inst.field() == Field::Complex;
  const HermMatrix Z = complex ? herm_extract(X) : HermMatrix(X);
  double max_norm = 0.0, sum_sq = 0.0;
  for (int k = 0; k < inst.num_constraints(); ++k) {
    const double f = frobenius_norm_product(inst.constraints()[k], Z);
    const bool indef = inst.tags()[k] != Definiteness::PSD;
    cert.frobenius.push_back(f);
    cert.indefinite.push_back(indef);
    if (indef) {
      ++cert.num_indefinite;
      max_norm = std::max(max_norm, f);
      sum_sq += f * f;
    } else {
      ++cert.num_psd;
    }
  }
  const double base = complex ? 15.0 : 20.0;
  const double slope = complex ? 4.0 : 8.0;
  const double var_factor = complex ? 40.0 : 200.0;
  double inner = -kInf;
  if (cert.num_psd > 0) inner = base + slope * std::log(static_cast<double>(cert.num_psd));
  if (cert.num_indefinite > 0) {
    const double a = (base + slope * std::log(static_cast<double>(cert.num_indefinite))) * max_norm;
    const double b = std::sqrt(var_factor * sum_sq);
    inner = std::max(inner, std::min(a, b));
  }
  cert.bound = 1.0 + inner;
  cert.alpha = cert.bound;
  return cert;
}

double bound_sign_max(int m, int mu_eff) {
  if (m < 1 || mu_eff < 1) throw std::invalid_argument("bound_sign_max: m and mu must be >= 1");
  return 2.0 * std::log(174.0 * m * mu_eff);
}

double quoted_tail_bounds(double gamma, int r, Field field) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("quoted_tail_bounds: gamma must lie in (0, 1]");
  if (r < 1) throw std::invalid_argument("quoted_tail_bounds: r must be >= 1");
  if (field == Field::Real) return std::max(std::sqrt(gamma), 2.0 * (r - 1) * gamma / (std::numbers::pi - 2.0));
  return std::max(4.0 * gamma / 3.0, 16.0 * (r - 1) * (r - 1) * gamma * gamma);
}

double sign_tail_bound(int m, int mu, double alpha) { return 2.0 * m * mu * std::exp(-alpha / 2.0); }

double min_event_probability_bound(int m, int r, Field field, double gamma, double mu) {
  const double p0 = field == Field::Real ? 3.0 / 100.0 : 1.0 / 20.0;
  return p0 - m * quoted_tail_bounds(gamma, r, field) - 1.0 / mu;
}

double default_gamma(int m, Field field) {
  if (m < 1) throw std::invalid_argument("default_gamma: m must be >= 1");
  return field == Field::Real ? std::numbers::pi / (1e4 * m * m) : 1.0 / (40.0 * m);
}

double default_mu(Field field) { return field == Field::Real ? 100.0 : 60.0; }

// ---------------------------------------------------------------------------

Vector SampleKernel::draw_sample(std::uint64_t seed, int index) const {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
  Vector g(dim());
  if (draw == Draw::Gaussian) {
    for (int j = 0; j < g.size(); ++j) g(j) = noise_scale * rng.normal();
  } else {
    for (int j = 0; j < g.size(); ++j) g(j) = rng.sign();
  }
  return g;
}

std::vector<SampleOutcome> evaluate_samples(const SampleKernel& kernel, int count, std::uint64_t seed,
                                            Execution execution) {
  std::vector<SampleOutcome> out(std::max(count, 0));
  if (execution == Execution::Serial) {
    for (int i = 0; i < count; ++i) out[i] = evaluate_one(kernel, seed, i);
  } else {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < count; ++i) out[i] = evaluate_one(kernel, seed, i);
  }
  return out;
}

// ---------------------------------------------------------------------------

RoundingReport gaussian_round_min(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p) {
  require_sense(inst, Sense::Minimize, "gaussian_round_min");
  p.validate();
  const int m = inst.num_constraints();
  const Field field = inst.field();

  RoundingReport rep;
  rep.v_sdp = lowrank.objective_value;
  rep.rank = lowrank.rank;
  const bool structure_ok = inst.count_tagged(Definiteness::Indefinite) <= 1 &&
                            inst.count_tagged(Definiteness::NSD) == 0 &&
                            classify(inst.objective()) == Definiteness::PSD;
  if (structure_ok) {
    rep.bound_claimed = true;
    rep.theoretical_bound = bound_certificate_min(m, field);
  } else {
    rep.theoretical_bound = kInf;
    rep.warning = "more than one non-PSD constraint or non-PSD objective; no ratio bound is claimed";
  }

  Compressed comp = compress(inst, lowrank.U);
  comp.kernel.draw = SampleKernel::Draw::Gaussian;
  comp.kernel.bind = SampleKernel::Bind::Min;
  comp.kernel.noise_scale = field == Field::Complex ? std::sqrt(0.5) : 1.0;
  rep.event_gamma = p.gamma.value_or(default_gamma(m, field));
  rep.event_mu = p.mu.value_or(default_mu(field));
  comp.kernel.level = rep.event_gamma;
  comp.kernel.check_objective = true;
  comp.kernel.objective_level = rep.event_mu * rep.v_sdp;
  return run(inst, comp, p, rep);
}

RoundingReport sign_round_max(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p) {
  require_sense(inst, Sense::Maximize, "sign_round_max");
  p.validate();
  const int m = inst.num_constraints();

  RoundingReport rep;
  rep.v_sdp = lowrank.objective_value;
  rep.rank = lowrank.rank;

  // Rotate the factor so that U'CU becomes diagonal.
  Matrix basis = lowrank.U;
  if (basis.cols() > 0) {
    const Matrix cu = basis.transpose() * inst.embedded_objective().dense() * basis;
    basis = basis * sym_eig(SymMatrix(cu)).eigenvectors;
  }

  int mu_eff = 1;
  for (const auto& a : inst.embedded_constraints()) mu_eff = std::max(mu_eff, product_rank(a, basis));
  if (inst.field() == Field::Complex) mu_eff = (mu_eff + 1) / 2;
  mu_eff = std::min(m, mu_eff);
  const bool structure_ok = inst.count_tagged(Definiteness::Indefinite) + inst.count_tagged(Definiteness::NSD) <= 1;
  if (structure_ok) {
    rep.bound_claimed = true;
    rep.theoretical_bound = bound_sign_max(m, mu_eff);
  } else {
    rep.theoretical_bound = kInf;
    rep.warning = "more than one non-PSD constraint; no ratio bound is claimed";
  }

  Compressed comp = compress(inst, basis);
  comp.kernel.draw = SampleKernel::Draw::Sign;
  comp.kernel.bind = SampleKernel::Bind::Max;
  rep.event_alpha = p.alpha.value_or(bound_sign_max(m, mu_eff));
  comp.kernel.level = rep.event_alpha;
  return run(inst, comp, p, rep);
}

RoundingReport gaussian_round_max(const QcqpInstance& inst, const LowRankSolution& factored, const RoundingParams& p) {
  require_sense(inst, Sense::Maximize, "gaussian_round_max");
  p.validate();

  RoundingReport rep;
  rep.v_sdp = factored.objective_value;
  rep.rank = factored.rank;
  const MaxBoundCertificate cert = bound_certificate_max(inst, factored.X);
  rep.bound_claimed = true;
  rep.theoretical_bound = cert.bound;

  Compressed comp = compress(inst, factored.U);
  comp.kernel.draw = SampleKernel::Draw::Gaussian;
  comp.kernel.bind = SampleKernel::Bind::Max;
  comp.kernel.noise_scale = inst.field() == Field::Complex ? std::sqrt(0.5) : 1.0;
  rep.event_alpha = p.alpha.value_or(cert.alpha);
  comp.kernel.level = rep.event_alpha;
  comp.kernel.check_objective = true;
  comp.kernel.objective_level = rep.v_sdp;
  return run(inst, comp, p, rep);
}

RoundingReport gaussian_round_max(const QcqpInstance& inst, const SdpSolution& sol, const RoundingParams& p) {
  return gaussian_round_max(inst, factor_solution(sol, inst, 1e-9), p);
}

RoundingReport round(const QcqpInstance& inst, const LowRankSolution& lowrank, const RoundingParams& p) {
  switch (p.scheme) {
    case Scheme::GaussianMin: return gaussian_round_min(inst, lowrank, p);
    case Scheme::SignMax: return sign_round_max(inst, lowrank, p);
    case Scheme::GaussianMax: return gaussian_round_max(inst, lowrank, p);
  }
  throw std::invalid_argument("round: unknown scheme");
}

}  // namespace hqsdp
