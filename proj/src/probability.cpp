#include "hqsdp/probability.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hqsdp {

namespace {

double sum_pow(const std::vector<double>& v, int p) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return s;
}

void fill_monte_carlo(AsymmetryResult& r, long long hits, long long n, bool wilson) {
  const double z = 1.96;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  r.method = Method::MonteCarlo;
  r.samples = n;
  r.estimate = p;
  r.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  if (wilson) {
    const double nn = static_cast<double>(n);
    r.confidence_radius = z / (1.0 + z * z / nn) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
  } else {
    r.confidence_radius = z * r.standard_error;
  }
}

int triangle_side(long long len) {
  int n = 1;
  while (static_cast<long long>(n) * (n - 1) / 2 < len) ++n;
  if (static_cast<long long>(n) * (n - 1) / 2 != len)
    throw std::invalid_argument("packed upper triangle has invalid length");
  return n;
}

double psi(const Matrix& w, const std::vector<double>& xi) {
  double s = 0.0;
  const int n = static_cast<int>(w.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += w(i, j) * xi[i] * xi[j];
  return s;
}

void require_nonzero(const std::vector<double>& w, const char* who) {
  for (double x : w)
    if (x != 0.0) return;
  throw std::invalid_argument(std::string(who) + ": all weights are zero");
}

}  // namespace

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::L2_1: return "L2_1";
    case LemmaId::L2_2: return "L2_2";
    case LemmaId::L3_1: return "L3_1";
    case LemmaId::L3_2: return "L3_2";
    case LemmaId::L3_4: return "L3_4";
    case LemmaId::L3_5: return "L3_5";
    case LemmaId::L4_1: return "L4_1";
    case LemmaId::L5_1: return "L5_1";
  }
  return "unknown";
}

LemmaId lemma_from_string(const std::string& s) {
  for (LemmaId id : {LemmaId::L2_1, LemmaId::L2_2, LemmaId::L3_1, LemmaId::L3_2, LemmaId::L3_4, LemmaId::L3_5,
                     LemmaId::L4_1, LemmaId::L5_1})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown lemma id: " + s);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Exhaustive: return "exhaustive";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::ClosedForm: return "closed_form";
  }
  return "unknown";
}

TailBoundParams TailBoundParams::make(std::vector<double> lambdas, double alpha, Field field) {
  TailBoundParams p;
  p.sigma = std::sqrt(sum_pow(lambdas, 2));
  p.delta = 0.0;
  for (double l : lambdas) p.delta = std::max(p.delta, l);
  p.lambdas = std::move(lambdas);
  p.alpha = alpha;
  p.field = field;
  return p;
}

void TailBoundParams::validate() const {
  const TailBoundParams ref = make(lambdas, alpha, field);
  if (std::abs(ref.sigma - sigma) > 1e-12 || std::abs(ref.delta - delta) > 1e-12)
    throw std::invalid_argument("TailBoundParams: sigma/delta inconsistent with lambdas");
  if (!(alpha > 0.0)) throw std::invalid_argument("TailBoundParams: alpha must be positive");
}

// ---------------------------------------------------------------------------

double asym_bound_moment(double t, double tau) {
  if (!(t > 2.0)) throw std::domain_error("asym_bound_moment: t must exceed 2");
  if (!(tau >= 1.0)) throw std::invalid_argument("asym_bound_moment: tau must be at least 1");
  if (t == 4.0) return (2.0 * std::sqrt(3.0) - 3.0) / tau;
  return 0.25 * std::pow(tau, -2.0 / (t - 2.0));
}

double chi2_moment4(const std::vector<double>& taus) {
  const double s2 = sum_pow(taus, 2);
  return 48.0 * sum_pow(taus, 4) + 12.0 * s2 * s2;
}

double exp_moment4(const std::vector<double>& taus) {
  const double s2 = sum_pow(taus, 2);
  return 6.0 * sum_pow(taus, 4) + 3.0 * s2 * s2;
}

double bernoulli_moment4(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  if (n < 2 || w.cols() != n) throw std::invalid_argument("bernoulli_moment4: need a square matrix with n >= 2");
  double s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = w(i, j) * w(i, j);
      s2 += v;
      s4 += v * v;
    }
  // sum over unordered pairs of distinct edges of w^2 w^2 = (s2^2 - s4) / 2
  const double pairs = 0.5 * (s2 * s2 - s4);
  double cycles = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          cycles += w(i, j) * w(i, k) * w(j, l) * w(k, l) + w(i, j) * w(i, l) * w(j, k) * w(k, l) +
                    w(i, k) * w(i, l) * w(j, k) * w(j, l);
  return s4 + 6.0 * pairs + 24.0 * cycles;
}

BernoulliEnumeration bernoulli_enumerate(const Matrix& w, Execution execution) {
  const int n = static_cast<int>(w.rows());
  if (n < 2 || n > 20 || w.cols() != n) throw std::invalid_argument("bernoulli_enumerate: need 2 <= n <= 20");
  const long long count = 1LL << (n - 1);
  long long nonpos = 0;
  double m2 = 0.0, m4 = 0.0;
  auto body = [&](long long mask, long long& np, double& a2, double& a4) {
    std::vector<double> xi(n);
    xi[0] = 1.0;
    for (int b = 1; b < n; ++b) xi[b] = (mask >> (b - 1)) & 1 ? -1.0 : 1.0;
    const double v = psi(w, xi);
    if (v <= 0.0) ++np;
    a2 += v * v;
    a4 += v * v * v * v;
  };
  if (execution == Execution::Serial) {
    for (long long mask = 0; mask < count; ++mask) body(mask, nonpos, m2, m4);
  } else {
    // Fixed chunking keeps the floating-point summation order independent of
    // the thread count.
    const long long chunk = 4096;
    const long long chunks = (count + chunk - 1) / chunk;
    std::vector<long long> np(chunks, 0);
    std::vector<double> a2(chunks, 0.0), a4(chunks, 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long long c = 0; c < chunks; ++c)
      for (long long mask = c * chunk; mask < std::min(count, (c + 1) * chunk); ++mask) body(mask, np[c], a2[c], a4[c]);
    for (long long c = 0; c < chunks; ++c) {
      nonpos += np[c];
      m2 += a2[c];
      m4 += a4[c];
    }
  }
  BernoulliEnumeration out;
  out.prob_nonpositive = static_cast<double>(nonpos) / static_cast<double>(count);
  out.moment2 = m2 / static_cast<double>(count);
  out.moment4 = m4 / static_cast<double>(count);
  return out;
}

Vector pack_upper(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  Vector out(n * (n - 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out(k++) = w(i, j);
  return out;
}

Matrix unpack_upper(const Vector& packed) {
  const int n = triangle_side(packed.size());
  Matrix w = Matrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = packed(k++);
  return w;
}

// ---------------------------------------------------------------------------

AsymmetryResult asym_prob(AsymKind kind, const std::vector<double>& weights, Method method,
                          const EstimatorOptions& opt) {
  if (weights.empty()) throw std::invalid_argument("asym_prob: empty weights");
  require_nonzero(weights, "asym_prob");
  AsymmetryResult r;
  const int n = static_cast<int>(weights.size());
  switch (kind) {
    case AsymKind::ChiSq: {
      r.lemma_id = LemmaId::L3_1;
      r.analytic_lower_bound = 3.0 / 100.0;
      if (method == Method::ClosedForm) {
        if (n != 1) throw std::invalid_argument("asym_prob: chi-square closed form needs a single weight");
        const double upper = std::erfc(1.0 / std::numbers::sqrt2);  // Prob{eta^2 >= 1}
        r.method = Method::ClosedForm;
        r.estimate = weights[0] > 0.0 ? upper : 1.0 - upper;
        return r;
      }
      if (method == Method::Exhaustive) throw std::invalid_argument("asym_prob: no exhaustive method for chi-square");
      const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution, [&](Rng& rng) {
        double s = 0.0;
        for (double t : weights) {
          const double e = rng.normal();
          s += t * (e * e - 1.0);
        }
        return s >= 0.0;
      });
      fill_monte_carlo(r, hits, opt.samples, false);
      return r;
    }
    case AsymKind::Exp: {
      r.lemma_id = LemmaId::L3_4;
      r.analytic_lower_bound = 1.0 / 20.0;
      if (method == Method::ClosedForm) {
        r.method = Method::ClosedForm;
        r.estimate = exp_closed_form(weights);
        return r;
      }
      if (method == Method::Exhaustive) throw std::invalid_argument("asym_prob: no exhaustive method for exponentials");
      const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution, [&](Rng& rng) {
        double s = 0.0;
        for (double t : weights) s += t * (rng.exponential() - 1.0);
        return s >= 0.0;
      });
      fill_monte_carlo(r, hits, opt.samples, false);
      return r;
    }
    case AsymKind::Bernoulli: {
      r.lemma_id = LemmaId::L4_1;
      r.analytic_lower_bound = 1.0 / 87.0;
      const Matrix w = unpack_upper(Eigen::Map<const Vector>(weights.data(), n));
      const int dim = static_cast<int>(w.rows());
      if (method == Method::ClosedForm) throw std::invalid_argument("asym_prob: no closed form for sign sums");
      if (method == Method::Exhaustive && dim <= 20) {
        const auto e = bernoulli_enumerate(w, opt.execution);
        r.method = Method::Exhaustive;
        r.estimate = e.prob_nonpositive;
        r.samples = 1LL << (dim - 1);
        return r;
      }
      const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution, [&](Rng& rng) {
        std::vector<double> xi(dim);
        for (auto& x : xi) x = rng.sign();
        return psi(w, xi) <= 0.0;
      });
      fill_monte_carlo(r, hits, opt.samples, true);
      return r;
    }
  }
  throw std::invalid_argument("asym_prob: unknown kind");
}

AsymmetryResult matrix_asym_prob(const HermMatrix& A, const HermMatrix& Z, double gamma, Field field,
                                 const EstimatorOptions& opt) {
  if (A.n() != Z.n()) throw DimensionMismatch("matrix_asym_prob: A and Z differ in size");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("matrix_asym_prob: gamma must lie in [0, 1]");
  if (field == Field::Real && (!A.is_real() || !Z.is_real()))
    throw std::invalid_argument("matrix_asym_prob: real field with complex data");

  // xi' A xi = sum lambda_i s_i with lambda the spectrum of Z^{1/2} A Z^{1/2}.
  std::vector<double> lambdas;
  if (field == Field::Real) {
    const Spectrum zs = sym_eig(Z.real_part());
    const Vector root = zs.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    const Matrix half = zs.eigenvectors * root.asDiagonal() * zs.eigenvectors.transpose();
    const Vector l = sym_eig(SymMatrix(half * A.re() * half)).eigenvalues;
    lambdas.assign(l.data(), l.data() + l.size());
  } else {
    const HermSpectrum zs = herm_eig(Z);
    const Vector root = zs.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    const CMatrix half = zs.eigenvectors * root.asDiagonal() * zs.eigenvectors.adjoint();
    const Vector l = herm_eig(HermMatrix(CMatrix(half * A.complex() * half))).eigenvalues;
    lambdas.assign(l.data(), l.data() + l.size());
  }
  double mean = 0.0;
  for (double l : lambdas) mean += l;
  if (mean < -1e-12) throw std::invalid_argument("matrix_asym_prob: Tr(AZ) must be nonnegative");

  AsymmetryResult r;
  r.lemma_id = field == Field::Real ? LemmaId::L3_2 : LemmaId::L3_5;
  r.analytic_lower_bound = field == Field::Real ? 3.0 / 100.0 : 1.0 / 20.0;
  const double level = gamma * mean;
  const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution, [&](Rng& rng) {
    double s = 0.0;
    for (double l : lambdas) {
      if (field == Field::Real) {
        const double e = rng.normal();
        s += l * e * e;
      } else {
        s += l * rng.exponential();
      }
    }
    return s >= level;
  });
  fill_monte_carlo(r, hits, opt.samples, false);
  return r;
}

double exp_closed_form(const std::vector<double>& taus) {
  if (taus.empty()) throw std::invalid_argument("exp_closed_form: empty input");
  double total = 0.0;
  for (double t : taus) {
    if (!(t > 0.0)) throw std::invalid_argument("exp_closed_form: weights must be positive");
    total += t;
  }
  std::vector<double> t(taus);
  for (auto& v : t) v /= total;
  const int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(t[i] - t[j]) < 1e-6)
        throw IllConditionedError("exp_closed_form: nearly equal weights; use the Monte Carlo estimator");
  double p = 0.0;
  for (int i = 0; i < n; ++i) {
    double denom = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) denom *= 1.0 - t[j] / t[i];
    p += std::exp(-1.0 / t[i]) / denom;
  }
  return p;
}

ConjectureScan conjecture_3_3_scan(int n, double grid_resolution, int mixed_directions, const EstimatorOptions& opt) {
  if (n != 2 && n != 3) throw std::invalid_argument("conjecture_3_3_scan: n must be 2 or 3");
  if (!(grid_resolution > 0.0 && grid_resolution < 0.5))
    throw std::invalid_argument("conjecture_3_3_scan: resolution must lie in (0, 0.5)");
  ConjectureScan scan;
  scan.min_found = std::numeric_limits<double>::infinity();
  scan.max_found = -std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::lround(1.0 / grid_resolution));

  auto consider = [&](const std::vector<double>& tau) {
    double v;
    try {
      v = exp_closed_form(tau);
    } catch (const IllConditionedError&) {
      return;
    }
    ++scan.evaluated;
    if (v < scan.min_found) {
      scan.min_found = v;
      scan.argmin = tau;
    }
    scan.max_found = std::max(scan.max_found, v);
  };
  if (n == 2) {
    for (int i = 1; i < steps; ++i) {
      const double a = i * grid_resolution;
      consider({a, 1.0 - a});
    }
  } else {
    for (int i = 1; i < steps; ++i)
      for (int j = 1; i + j < steps; ++j) {
        const double a = i * grid_resolution, b = j * grid_resolution;
        consider({a, b, 1.0 - a - b});
      }
  }

  // Mixed signs: deterministic directions with at least one weight of each sign.
  scan.mixed_min_estimate = std::numeric_limits<double>::infinity();
  Rng dir_rng(derive_seed(opt.seed, 0x3c3c));
  for (int d = 0; d < mixed_directions; ++d) {
    std::vector<double> tau(n);
    if (n == 2) {
      const double theta = -0.5 * std::numbers::pi * (d + 0.5) / mixed_directions;
      tau = {std::cos(theta), std::sin(theta)};
    } else {
      bool pos = false, neg = false;
      while (!(pos && neg)) {
        pos = neg = false;
        for (auto& v : tau) {
          v = dir_rng.normal();
          pos = pos || v > 0.0;
          neg = neg || v < 0.0;
        }
      }
    }
    const EstimatorOptions o{opt.samples, derive_seed(opt.seed, static_cast<std::uint64_t>(d)), opt.execution};
    const AsymmetryResult r = asym_prob(AsymKind::Exp, tau, Method::MonteCarlo, o);
    if (r.estimate < scan.mixed_min_estimate) {
      scan.mixed_min_estimate = r.estimate;
      scan.mixed_standard_error = r.standard_error;
      scan.mixed_argmin = tau;
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------

double chernoff_tail(const TailBoundParams& p) {
  p.validate();
  if (!(p.sigma > 0.0)) throw std::invalid_argument("chernoff_tail: sigma must be positive");
  const double ratio = p.delta > 0.0 ? p.sigma / p.delta : std::numeric_limits<double>::infinity();
  const double divisor = p.field == Field::Real ? 8.0 : 4.0;
  return std::exp(-std::min(p.alpha, ratio) * p.alpha / divisor);
}

double chebyshev_tail(const std::vector<double>& lambdas, double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("chebyshev_tail: alpha must exceed 1");
  return 2.0 * sum_pow(lambdas, 2) / ((alpha - 1.0) * (alpha - 1.0));
}

bool exp_ineq_5_3(double t) {
  if (t > 0.5 || t == 1.0) throw std::domain_error("exp_ineq_5_3: requires t <= 1/2");
  return 1.0 / (1.0 - t) <= std::exp(t + t * t);
}

double complex_modulus_cdf(double a) { return a <= 0.0 ? 0.0 : 1.0 - std::exp(-a); }

namespace {

double quadratic_sample(const std::vector<double>& lambdas, Field field, Rng& rng) {
  double s = 0.0;
  for (double l : lambdas) {
    if (field == Field::Real) {
      const double e = rng.normal();
      s += l * e * e;
    } else {
      s += l * rng.exponential();
    }
  }
  return s;
}

}  // namespace

AsymmetryResult chernoff_event_frequency(const TailBoundParams& p, const EstimatorOptions& opt) {
  p.validate();
  double mean = 0.0;
  for (double l : p.lambdas) mean += l;
  const double level = mean + p.alpha * p.sigma;
  AsymmetryResult r;
  r.lemma_id = LemmaId::L5_1;
  const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution,
                                           [&](Rng& rng) { return quadratic_sample(p.lambdas, p.field, rng) >= level; });
  fill_monte_carlo(r, hits, opt.samples, false);
  return r;
}

AsymmetryResult chebyshev_event_frequency(const std::vector<double>& lambdas, double alpha, Field field,
                                          const EstimatorOptions& opt) {
  if (!(alpha > 1.0)) throw std::domain_error("chebyshev_event_frequency: alpha must exceed 1");
  double mean = 0.0;
  for (double l : lambdas) mean += l;
  AsymmetryResult r;
  r.lemma_id = LemmaId::L5_1;
  const long long hits = monte_carlo_count(opt.samples, opt.seed, opt.execution, [&](Rng& rng) {
    return std::abs(quadratic_sample(lambdas, field, rng) - mean) >= alpha - 1.0;
  });
  fill_monte_carlo(r, hits, opt.samples, false);
  return r;
}

}  // namespace hqsdp
