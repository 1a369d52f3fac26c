#include "hqsdp/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace hqsdp {

void LemmaCheck::expect(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    passed = false;
    failures.push_back(what);
  }
}

std::vector<LemmaId> all_lemmas() {
  return {LemmaId::L2_1, LemmaId::L2_2, LemmaId::L3_1, LemmaId::L3_2,
          LemmaId::L3_4, LemmaId::L3_5, LemmaId::L4_1, LemmaId::L5_1};
}

namespace {

const double kSharp = 2.0 * std::sqrt(3.0) - 3.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string describe(const std::vector<double>& w) {
  std::ostringstream os;
  os.precision(4);
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
  os << ")";
  return os.str();
}

// Weight profiles covering the shapes where the bounds are tightest: a single
// dominant coordinate, equal weights, tiny perturbations of one spike, and
// mixed signs.
std::vector<double> random_weights(Rng& rng, int profile) {
  const int n = 1 + static_cast<int>(rng.uniform() * 8.0);
  std::vector<double> w(n);
  switch (profile % 6) {
    case 0:
      for (auto& v : w) v = rng.normal();
      break;
    case 1:
      for (auto& v : w) v = 1e-3 * rng.normal();
      w[0] = 1.0;
      break;
    case 2:
      for (auto& v : w) v = 1.0;
      break;
    case 3:
      for (auto& v : w) v = rng.normal();
      w[0] = 10.0 * rng.sign();
      break;
    case 4:
      for (auto& v : w) v = rng.uniform_positive();
      break;
    default:
      for (auto& v : w) v = std::abs(rng.normal());
      w[n - 1] = -3.0 * std::abs(rng.normal()) - 0.1;
      break;
  }
  if (profile % 12 >= 6)
    for (auto& v : w) v = -v;
  return w;
}

Matrix random_upper(Rng& rng, int n, int profile) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      switch (profile % 4) {
        case 0: w(i, j) = rng.normal(); break;
        case 1: w(i, j) = 1.0; break;
        case 2: w(i, j) = rng.sign(); break;
        default: w(i, j) = 1e-3 * rng.normal(); break;
      }
    }
  if (profile % 4 == 3) w(0, 1) = 1.0;
  return w;
}

struct SignSumLaw {
  double p_ge = 0.0, p_le = 0.0;
  double abs3 = 0.0, m4 = 0.0, m6 = 0.0;  // of Phi = Psi / sqrt(sum w^2)
};

// Exact law of Phi by enumeration, independent of bernoulli_enumerate.
SignSumLaw sign_sum_law(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  double s2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s2 += w(i, j) * w(i, j);
  const double scale = 1.0 / std::sqrt(s2);
  SignSumLaw law;
  const long long count = 1LL << n;
  for (long long mask = 0; mask < count; ++mask) {
    double psi = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool flip = ((mask >> i) ^ (mask >> j)) & 1;
        psi += flip ? -w(i, j) : w(i, j);
      }
    const double phi = psi * scale;
    const double a = std::abs(phi);
    if (phi >= -1e-12) law.p_ge += 1.0;
    if (phi <= 1e-12) law.p_le += 1.0;
    law.abs3 += a * a * a;
    law.m4 += a * a * a * a;
    law.m6 += a * a * a * a * a * a;
  }
  const double inv = 1.0 / static_cast<double>(count);
  law.p_ge *= inv;
  law.p_le *= inv;
  law.abs3 *= inv;
  law.m4 *= inv;
  law.m6 *= inv;
  return law;
}

EstimatorOptions estimator(const VerifyOptions& opt, std::uint64_t stream) {
  return {opt.samples, derive_seed(opt.seed, stream), opt.execution};
}

double sum_sq(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

LemmaCheck check_l2_1(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L2_1;
  Rng rng(derive_seed(opt.seed, 0x21));
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform() * 8.0);
    const SignSumLaw law = sign_sum_law(random_upper(rng, n, t));
    const double p = std::min(law.p_ge, law.p_le);
    for (auto [order, moment] : {std::pair{3.0, law.abs3}, std::pair{4.0, law.m4}, std::pair{6.0, law.m6}}) {
      const double bound = 0.25 * std::pow(moment, -2.0 / (order - 2.0));
      c.expect(p > bound, "sign sum n=" + std::to_string(n) + " t=" + fmt(order) + ": " + fmt(p) +
                              " <= " + fmt(bound));
    }
    AsymmetryResult r;
    r.lemma_id = LemmaId::L2_1;
    r.analytic_lower_bound = 0.25 / law.m4;
    r.estimate = p;
    r.method = Method::Exhaustive;
    r.samples = 1LL << n;
    c.results.push_back(r);
  }
  return c;
}

LemmaCheck check_l2_2(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L2_2;
  for (int i = 0; i <= 1000; ++i) {
    const double tau = std::pow(10.0, 4.0 * i / 1000.0);
    const double sharp = asym_bound_moment(4.0, tau);
    c.expect(std::abs(sharp - kSharp / tau) <= 1e-15 * sharp, "t = 4 bound at tau=" + fmt(tau));
    c.expect(sharp > 0.25 / tau, "sharpening fails at tau=" + fmt(tau));
    c.expect(sharp > 9.0 / (20.0 * tau), "(2 sqrt 3 - 3)/tau <= 9/(20 tau) at tau=" + fmt(tau));
  }
  Rng rng(derive_seed(opt.seed, 0x22));
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform() * 8.0);
    const SignSumLaw law = sign_sum_law(random_upper(rng, n, t));
    const double bound = kSharp / law.m4;
    c.expect(law.p_ge >= bound && law.p_le >= bound,
             "sign sum n=" + std::to_string(n) + ": " + fmt(std::min(law.p_ge, law.p_le)) + " < " + fmt(bound));
  }
  // Centered chi-square with one degree of freedom: E Phi^4 = 15.
  const AsymmetryResult r = asym_prob(AsymKind::ChiSq, {1.0}, Method::MonteCarlo, estimator(opt, 0x220));
  AsymmetryResult rr = r;
  rr.lemma_id = LemmaId::L2_2;
  rr.analytic_lower_bound = kSharp / 15.0;
  c.results.push_back(rr);
  c.expect(rr.clears_bound(), "single chi-square: " + fmt(r.estimate));
  return c;
}

LemmaCheck check_l3_1(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L3_1;
  Rng rng(derive_seed(opt.seed, 0x31));
  for (int t = 0; t < 200; ++t) {
    const auto w = random_weights(rng, t);
    const AsymmetryResult r =
        asym_prob(AsymKind::ChiSq, w, Method::MonteCarlo, estimator(opt, 0x3100 + static_cast<std::uint64_t>(t)));
    c.results.push_back(r);
    c.expect(r.clears_bound(), "tau=" + describe(w) + ": " + fmt(r.estimate) + " +/- " + fmt(r.standard_error));
    const double s2 = sum_sq(w);
    c.expect(chi2_moment4(w) <= 60.0 * s2 * s2 * (1 + 1e-12), "fourth moment above 60 (sum tau^2)^2");
  }
  c.expect(chi2_moment4({1.0}) == 60.0, "E(eta^2 - 1)^4 = 60");
  return c;
}

HermMatrix random_hermitian(Rng& rng, int n, Field field) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = std::complex<double>(rng.normal(), field == Field::Complex ? rng.normal() : 0.0);
  return HermMatrix(CMatrix(0.5 * (g + g.adjoint())));
}

HermMatrix random_psd(Rng& rng, int n, int rank, Field field) {
  CMatrix g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j)
      g(i, j) = std::complex<double>(rng.normal(), field == Field::Complex ? rng.normal() : 0.0);
  return HermMatrix(CMatrix(g * g.adjoint()));
}

void check_matrix_forms(LemmaCheck& c, Field field, const VerifyOptions& opt, std::uint64_t stream) {
  Rng rng(derive_seed(opt.seed, stream));
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng.uniform() * 6.0);
    const int rank = 1 + static_cast<int>(rng.uniform() * n);
    const HermMatrix z = random_psd(rng, n, rank, field);
    HermMatrix a = random_hermitian(rng, n, field);
    const double trace = (a.complex() * z.complex()).trace().real();
    if (trace < 0.0) a = HermMatrix(CMatrix(-a.complex()));
    const double gamma = t % 5 == 0 ? 1.0 : (t % 5 == 1 ? 0.0 : rng.uniform());
    const AsymmetryResult r =
        matrix_asym_prob(a, z, gamma, field, estimator(opt, (stream << 8) + static_cast<std::uint64_t>(t)));
    c.results.push_back(r);
    c.expect(r.clears_bound(), "n=" + std::to_string(n) + " rank=" + std::to_string(rank) + " gamma=" + fmt(gamma) +
                                   ": " + fmt(r.estimate) + " +/- " + fmt(r.standard_error));
  }
}

LemmaCheck check_l3_2(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L3_2;
  check_matrix_forms(c, Field::Real, opt, 0x32);
  return c;
}

LemmaCheck check_l3_4(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L3_4;
  Rng rng(derive_seed(opt.seed, 0x34));
  for (int t = 0; t < 200; ++t) {
    const auto w = random_weights(rng, t);
    const AsymmetryResult r =
        asym_prob(AsymKind::Exp, w, Method::MonteCarlo, estimator(opt, 0x3400 + static_cast<std::uint64_t>(t)));
    c.results.push_back(r);
    c.expect(r.clears_bound(), "tau=" + describe(w) + ": " + fmt(r.estimate) + " +/- " + fmt(r.standard_error));
    const double s2 = sum_sq(w);
    c.expect(exp_moment4(w) <= 9.0 * s2 * s2 * (1 + 1e-12), "fourth moment above 9 (sum tau^2)^2");
  }
  c.expect(exp_moment4({1.0}) == 9.0, "E(eta - 1)^4 = 9");

  // Closed form against simulation on distinct positive weights.
  Rng crng(derive_seed(opt.seed, 0x340c));
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(crng.uniform() * 6.0);
    std::vector<double> w(n);
    for (auto& v : w) v = 0.05 + crng.uniform();
    double cf;
    try {
      cf = exp_closed_form(w);
    } catch (const IllConditionedError&) {
      --t;
      continue;
    }
    const AsymmetryResult mc =
        asym_prob(AsymKind::Exp, w, Method::MonteCarlo, estimator(opt, 0x34c0 + static_cast<std::uint64_t>(t)));
    AsymmetryResult r;
    r.lemma_id = LemmaId::L3_4;
    r.analytic_lower_bound = 1.0 / 20.0;
    r.estimate = cf;
    r.method = Method::ClosedForm;
    c.results.push_back(r);
    c.expect(std::abs(cf - mc.estimate) <= 4.0 * mc.standard_error,
             "closed form " + fmt(cf) + " vs simulation " + fmt(mc.estimate) + " for tau=" + describe(w));
    c.expect(cf > 1.0 / 20.0 && cf < 19.0 / 20.0, "closed form outside (1/20, 19/20) for tau=" + describe(w));
  }

  const EstimatorOptions scan_opt{std::max<long long>(opt.samples / 5, 10'000), derive_seed(opt.seed, 0x33),
                                  opt.execution};
  for (auto [n, res] : {std::pair{2, 1e-3}, std::pair{3, 1e-2}}) {
    const ConjectureScan s = conjecture_3_3_scan(n, res, 32, scan_opt);
    c.expect(s.min_found > std::exp(-1.0), "closed-form scan n=" + std::to_string(n) + " reaches " + fmt(s.min_found));
    c.expect(s.max_found < 1.0 - std::exp(-1.0), "closed-form scan n=" + std::to_string(n) + " exceeds (e-1)/e");
    c.expect(s.mixed_min_estimate - 3.0 * s.mixed_standard_error > 1.0 / 20.0,
             "mixed-sign estimate " + fmt(s.mixed_min_estimate));
  }
  return c;
}

LemmaCheck check_l3_5(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L3_5;
  check_matrix_forms(c, Field::Complex, opt, 0x35);
  // |eta|^2 for eta ~ N_c(0, 1) is unit exponential.
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const EstimatorOptions o = estimator(opt, 0x35a0 + static_cast<std::uint64_t>(a * 10));
    const long long hits = monte_carlo_count(o.samples, o.seed, o.execution, [&](Rng& rng) {
      const double re = rng.normal() * std::numbers::sqrt2 / 2.0, im = rng.normal() * std::numbers::sqrt2 / 2.0;
      return re * re + im * im <= a;
    });
    const double f = static_cast<double>(hits) / static_cast<double>(o.samples);
    const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(o.samples));
    c.expect(std::abs(f - complex_modulus_cdf(a)) <= 4.0 * se + 1e-12,
             "squared modulus CDF at " + fmt(a) + ": " + fmt(f) + " vs " + fmt(complex_modulus_cdf(a)));
  }
  return c;
}

LemmaCheck check_l4_1(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L4_1;
  Rng rng(derive_seed(opt.seed, 0x41));
  for (int t = 0; t < 500; ++t) {
    const int n = 3 + t % 10;
    const Matrix w = random_upper(rng, n, t / 10);
    const BernoulliEnumeration e = bernoulli_enumerate(w, opt.execution);
    AsymmetryResult r;
    r.lemma_id = LemmaId::L4_1;
    r.analytic_lower_bound = 1.0 / 87.0;
    r.estimate = e.prob_nonpositive;
    r.method = Method::Exhaustive;
    r.samples = 1LL << (n - 1);
    c.results.push_back(r);
    c.expect(e.prob_nonpositive > 1.0 / 87.0, "n=" + std::to_string(n) + ": " + fmt(e.prob_nonpositive));
    const double m4 = bernoulli_moment4(w);
    c.expect(std::abs(m4 - e.moment4) <= 1e-10 * std::max(1e-300, std::abs(e.moment4)),
             "fourth moment " + fmt(m4) + " vs enumeration " + fmt(e.moment4));
    const double s2 = e.moment2;
    c.expect(m4 <= 39.0 * s2 * s2 * (1 + 1e-12), "fourth moment above 39 (sum w^2)^2");
  }
  return c;
}

LemmaCheck check_l5_1(const VerifyOptions& opt) {
  LemmaCheck c;
  c.lemma_id = LemmaId::L5_1;
  Rng rng(derive_seed(opt.seed, 0x51));
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng.uniform() * 8.0);
    std::vector<double> lambdas(n);
    for (auto& l : lambdas) l = t % 3 == 0 ? std::abs(rng.normal()) : rng.normal();
    if (t % 7 == 0)
      for (auto& l : lambdas) l = -std::abs(l);
    const double alpha = 0.2 + 4.0 * rng.uniform();
    for (Field field : {Field::Real, Field::Complex}) {
      const std::uint64_t stream = 0x5100 + 2 * static_cast<std::uint64_t>(t) + (field == Field::Complex);
      const TailBoundParams p = TailBoundParams::make(lambdas, alpha, field);
      AsymmetryResult r = chernoff_event_frequency(p, estimator(opt, stream));
      const double bound = chernoff_tail(p);
      r.analytic_lower_bound = bound;
      c.results.push_back(r);
      c.expect(r.estimate - 3.0 * r.standard_error <= bound,
               "exponential tail " + fmt(bound) + " below frequency " + fmt(r.estimate) + " (" + to_string(field) + ")");

      const double beta = 1.0 + 0.1 + 9.0 * rng.uniform();
      AsymmetryResult v = chebyshev_event_frequency(lambdas, beta, field, estimator(opt, stream << 4));
      const double vb = chebyshev_tail(lambdas, beta);
      v.analytic_lower_bound = vb;
      c.results.push_back(v);
      c.expect(v.estimate - 3.0 * v.standard_error <= vb,
               "variance tail " + fmt(vb) + " below frequency " + fmt(v.estimate) + " (" + to_string(field) + ")");
    }
  }
  for (int i = 0; i <= 1000; ++i) {
    const double t = -10.0 + 10.5 * i / 1000.0;
    c.expect(exp_ineq_5_3(t), "1/(1-t) <= exp(t + t^2) fails at t=" + fmt(t));
  }
  return c;
}

}  // namespace

LemmaCheck verify_lemma(LemmaId id, const VerifyOptions& opt) {
  switch (id) {
    case LemmaId::L2_1: return check_l2_1(opt);
    case LemmaId::L2_2: return check_l2_2(opt);
    case LemmaId::L3_1: return check_l3_1(opt);
    case LemmaId::L3_2: return check_l3_2(opt);
    case LemmaId::L3_4: return check_l3_4(opt);
    case LemmaId::L3_5: return check_l3_5(opt);
    case LemmaId::L4_1: return check_l4_1(opt);
    case LemmaId::L5_1: return check_l5_1(opt);
  }
  throw std::invalid_argument("verify_lemma: unknown lemma");
}

std::vector<LemmaCheck> verify_all(const VerifyOptions& opt) {
  std::vector<LemmaCheck> out;
  for (LemmaId id : all_lemmas()) out.push_back(verify_lemma(id, opt));
  return out;
}

Json verification_report(const std::vector<LemmaCheck>& checks, const VerifyOptions& opt) {
  Json j;
  j["seed"] = opt.seed;
  j["samples"] = opt.samples;
  bool all = true;
  Json lemmas = Json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    Json l;
    l["lemma_id"] = to_string(c.lemma_id);
    l["passed"] = c.passed;
    l["checks"] = c.checks;
    l["failures"] = c.failures;
    Json rs = Json::array();
    for (const auto& r : c.results) rs.push_back(asymmetry_to_json(r));
    l["results"] = rs;
    lemmas.push_back(l);
  }
  j["lemmas"] = lemmas;
  j["passed"] = all;
  return j;
}

}  // namespace hqsdp
