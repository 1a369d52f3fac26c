#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hqsdp/probability.hpp"
#include "test_util.hpp"

using namespace hqsdp;
using namespace hqsdp::testing;

namespace {

// Direct 2^n enumeration without the xi_1 = +1 symmetry used by the library.
BernoulliEnumeration brute_enumerate(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  BernoulliEnumeration e;
  const long long total = 1LL << n;
  for (long long mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double xi = (mask >> i) & 1 ? 1.0 : -1.0;
        const double xj = (mask >> j) & 1 ? 1.0 : -1.0;
        s += w(i, j) * xi * xj;
      }
    if (s <= 0.0) e.prob_nonpositive += 1.0;
    e.moment2 += s * s;
    e.moment4 += s * s * s * s;
  }
  e.prob_nonpositive /= total;
  e.moment2 /= total;
  e.moment4 /= total;
  return e;
}

Matrix random_upper(Rng& rng, int n) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = rng.normal();
  return w;
}

double sum_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

TEST(AsymBoundMoment, QuotedConstants) {
  EXPECT_NEAR(asym_bound_moment(4, 15), (2 * std::sqrt(3.0) - 3) / 15, 1e-15);
  EXPECT_GT(asym_bound_moment(4, 15), 3.0 / 100.0);
  EXPECT_NEAR(asym_bound_moment(4, 15), 0.03094, 1e-5);
  EXPECT_GT(asym_bound_moment(4, 9), 1.0 / 20.0);
  EXPECT_NEAR(asym_bound_moment(4, 9), 0.05157, 1e-5);
  EXPECT_GT(asym_bound_moment(4, 39), 1.0 / 87.0);
  EXPECT_NEAR(asym_bound_moment(4, 39), 0.0119, 1e-4);
}

TEST(AsymBoundMoment, GenericFormula) {
  EXPECT_NEAR(asym_bound_moment(3, 2), 0.25 * std::pow(2.0, -2.0), 1e-15);
  EXPECT_NEAR(asym_bound_moment(6, 16), 0.25 / 4.0, 1e-15);
  EXPECT_THROW(asym_bound_moment(2, 3), std::domain_error);
  EXPECT_THROW(asym_bound_moment(4, 0.5), std::invalid_argument);
}

TEST(AsymBoundMoment, SharpenedBeatsGeneric) {
  for (double tau = 1.0; tau <= 1000.0; tau *= 1.07) EXPECT_GT(asym_bound_moment(4, tau), 0.25 / tau);
}

TEST(Moments, Chi2) {
  EXPECT_DOUBLE_EQ(chi2_moment4({1}), 60.0);
  EXPECT_DOUBLE_EQ(chi2_moment4({1, 1}), 144.0);
  EXPECT_DOUBLE_EQ(chi2_moment4({0, 0}), 0.0);
}

TEST(Moments, Exp) {
  EXPECT_DOUBLE_EQ(exp_moment4({1}), 9.0);
  EXPECT_DOUBLE_EQ(exp_moment4({1, 1}), 24.0);
  EXPECT_DOUBLE_EQ(exp_moment4({0}), 0.0);
}

TEST(Moments, KnownInequalities) {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + t % 12;
    std::vector<double> taus(n);
    for (auto& x : taus) x = rng.normal() * (t % 3 == 0 ? 10.0 : 1.0);
    const double s2 = sum_sq(taus);
    EXPECT_LE(chi2_moment4(taus), 60.0 * s2 * s2 * (1 + 1e-12));
    EXPECT_LE(exp_moment4(taus), 9.0 * s2 * s2 * (1 + 1e-12));
  }
}

TEST(Moments, MonteCarloCrossCheck) {
  const std::vector<double> taus{1.0, -0.5, 2.0};
  const long long n = 2'000'000;
  Rng rng(2);
  double chi = 0.0, ex = 0.0;
  for (long long i = 0; i < n; ++i) {
    double a = 0.0, b = 0.0;
    for (double t : taus) {
      const double g = rng.normal();
      a += t * (g * g - 1.0);
      b += t * (rng.exponential() - 1.0);
    }
    chi += a * a * a * a;
    ex += b * b * b * b;
  }
  EXPECT_NEAR(chi / n, chi2_moment4(taus), 0.05 * chi2_moment4(taus));
  EXPECT_NEAR(ex / n, exp_moment4(taus), 0.05 * exp_moment4(taus));
}

TEST(Moments, BernoulliSmall) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 1.0;
  EXPECT_DOUBLE_EQ(bernoulli_moment4(w), 1.0);
  Matrix ones = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) ones(i, j) = 1.0;
  EXPECT_NEAR(bernoulli_moment4(ones), brute_enumerate(ones).moment4, 1e-12);
  EXPECT_THROW(bernoulli_moment4(Matrix::Zero(1, 1)), std::invalid_argument);
}

TEST(Moments, BernoulliMatchesEnumeration) {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 11;
    const Matrix w = random_upper(rng, n);
    const double exact = brute_enumerate(w).moment4;
    EXPECT_NEAR(bernoulli_moment4(w), exact, 1e-10 * exact) << n;
    const double s2 = w.squaredNorm();
    EXPECT_LE(bernoulli_moment4(w), 39.0 * s2 * s2);
  }
}

TEST(BernoulliEnumerate, MatchesBruteForce) {
  Rng rng(4);
  for (int n = 2; n <= 12; ++n) {
    const Matrix w = random_upper(rng, n);
    const auto a = bernoulli_enumerate(w, Execution::Serial);
    const auto b = brute_enumerate(w);
    EXPECT_NEAR(a.prob_nonpositive, b.prob_nonpositive, 1e-15);
    EXPECT_NEAR(a.moment2, b.moment2, 1e-10 * b.moment2);
    EXPECT_NEAR(a.moment4, b.moment4, 1e-10 * b.moment4);
    EXPECT_NEAR(a.moment2, w.squaredNorm(), 1e-10 * b.moment2);
    EXPECT_GT(a.prob_nonpositive, 1.0 / 87.0);
  }
}

TEST(BernoulliEnumerate, SerialEqualsParallel) {
  Rng rng(5);
  const Matrix w = random_upper(rng, 16);
  const auto a = bernoulli_enumerate(w, Execution::Serial);
  const auto b = bernoulli_enumerate(w, Execution::Parallel);
  EXPECT_EQ(a.prob_nonpositive, b.prob_nonpositive);
  EXPECT_NEAR(a.moment4, b.moment4, 1e-12 * a.moment4);
}

TEST(BernoulliEnumerate, RejectsLargeN) {
  EXPECT_THROW(bernoulli_enumerate(Matrix::Zero(21, 21)), std::invalid_argument);
}

TEST(PackUpper, RoundTrip) {
  Rng rng(6);
  const Matrix w = random_upper(rng, 5);
  const Vector p = pack_upper(w);
  EXPECT_EQ(p.size(), 10);
  EXPECT_EQ(unpack_upper(p), w);
  EXPECT_THROW(unpack_upper(Vector::Zero(4)), std::invalid_argument);
}

TEST(AsymProb, KnownValues) {
  const auto chi = asym_prob(AsymKind::ChiSq, {1.0}, Method::ClosedForm);
  EXPECT_NEAR(chi.estimate, 0.3173105078629141, 1e-13);
  const auto chi_mc = asym_prob(AsymKind::ChiSq, {1.0}, Method::MonteCarlo, {1'000'000, 7, Execution::Parallel});
  EXPECT_NEAR(chi_mc.estimate, 0.3173105078629141, 4 * chi_mc.standard_error);

  const auto ex = asym_prob(AsymKind::Exp, {1.0}, Method::ClosedForm);
  EXPECT_NEAR(ex.estimate, std::exp(-1.0), 1e-15);
  const auto ex_mc = asym_prob(AsymKind::Exp, {1.0}, Method::MonteCarlo, {1'000'000, 8, Execution::Parallel});
  EXPECT_NEAR(ex_mc.estimate, std::exp(-1.0), 4 * ex_mc.standard_error);

  const auto b = asym_prob(AsymKind::Bernoulli, {1.0}, Method::Exhaustive);
  EXPECT_EQ(b.method, Method::Exhaustive);
  EXPECT_DOUBLE_EQ(b.estimate, 0.5);
}

TEST(AsymProb, ClearsLemmaBounds) {
  const EstimatorOptions opt{200'000, 9, Execution::Parallel};
  const auto spike = asym_prob(AsymKind::ChiSq, {100.0, 0.01, 0.01, -0.01}, Method::MonteCarlo, opt);
  EXPECT_TRUE(spike.clears_bound());
  const auto neg = asym_prob(AsymKind::ChiSq, {-1.0}, Method::MonteCarlo, opt);
  EXPECT_TRUE(neg.clears_bound());
  const auto e = asym_prob(AsymKind::Exp, {-1.0, -1.0, 0.3}, Method::MonteCarlo, opt);
  EXPECT_TRUE(e.clears_bound());
}

TEST(AsymProb, Errors) {
  EXPECT_THROW(asym_prob(AsymKind::ChiSq, {0.0, 0.0}, Method::MonteCarlo), std::invalid_argument);
  EXPECT_THROW(asym_prob(AsymKind::Exp, {}, Method::MonteCarlo), std::invalid_argument);
  EXPECT_THROW(asym_prob(AsymKind::Bernoulli, {1.0}, Method::ClosedForm), std::invalid_argument);
  EXPECT_THROW(asym_prob(AsymKind::ChiSq, {1.0}, Method::Exhaustive), std::invalid_argument);
}

TEST(AsymProb, SerialEqualsParallelAndSeeded) {
  const std::vector<double> w{0.3, -1.2, 2.0};
  const auto a = asym_prob(AsymKind::ChiSq, w, Method::MonteCarlo, {300'000, 10, Execution::Serial});
  const auto b = asym_prob(AsymKind::ChiSq, w, Method::MonteCarlo, {300'000, 10, Execution::Parallel});
  EXPECT_EQ(a.estimate, b.estimate);
  const auto c = asym_prob(AsymKind::ChiSq, w, Method::MonteCarlo, {300'000, 11, Execution::Parallel});
  EXPECT_NE(a.estimate, c.estimate);
}

TEST(MonteCarloCount, IndependentOfExecution) {
  auto trial = [](Rng& rng) { return rng.uniform() < 0.25; };
  const long long s = monte_carlo_count(200'003, 12, Execution::Serial, trial);
  const long long p = monte_carlo_count(200'003, 12, Execution::Parallel, trial);
  EXPECT_EQ(s, p);
  EXPECT_NEAR(s / 200'003.0, 0.25, 0.005);
}

TEST(ExpClosedForm, KnownValues) {
  EXPECT_NEAR(exp_closed_form({1.0}), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(exp_closed_form({2.0}), std::exp(-1.0), 1e-15);
  const double v = exp_closed_form({2.0, 1.0});
  EXPECT_NEAR(v, 2 * std::exp(-1.5) - std::exp(-3.0), 1e-14);
  EXPECT_NEAR(v, 0.396473, 1e-6);
  EXPECT_EQ(exp_closed_form({2.0, 1.0}), exp_closed_form({4.0, 2.0}));
}

TEST(ExpClosedForm, MatchesMonteCarlo) {
  const std::vector<double> taus{2.0, 1.0};
  const auto mc = asym_prob(AsymKind::Exp, taus, Method::MonteCarlo, {2'000'000, 13, Execution::Parallel});
  EXPECT_NEAR(mc.estimate, exp_closed_form(taus), 4 * mc.standard_error);
}

TEST(ExpClosedForm, ApproachesErlangLimit) {
  // Erlang-2 with unit rate: Prob{S >= 2} = 3 e^{-2} = 0.4060.
  const double limit = 3.0 * std::exp(-2.0);
  const double v = exp_closed_form({0.5, 0.5 + 1e-4});
  EXPECT_NEAR(v, limit, 1e-3);
  EXPECT_GT(v, std::exp(-1.0));
}

TEST(ExpClosedForm, SymmetricInPermutation) {
  EXPECT_NEAR(exp_closed_form({0.2, 0.5, 0.3}), exp_closed_form({0.5, 0.3, 0.2}), 1e-14);
}

TEST(ExpClosedForm, Errors) {
  EXPECT_THROW(exp_closed_form({}), std::invalid_argument);
  EXPECT_THROW(exp_closed_form({1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(exp_closed_form({1.0, 1.0 + 1e-9}), IllConditionedError);
}

TEST(ConjectureScan, NTwo) {
  const auto s = conjecture_3_3_scan(2, 1e-3, 8, {50'000, 14, Execution::Parallel});
  EXPECT_GT(s.min_found, std::exp(-1.0));
  EXPECT_LT(s.max_found, 1.0 - std::exp(-1.0));
  EXPECT_GT(s.evaluated, 900);
  EXPECT_EQ(s.argmin.size(), 2u);
  EXPECT_THROW(conjecture_3_3_scan(4, 0.1), std::invalid_argument);
}

TEST(TailBounds, Chernoff) {
  EXPECT_NEAR(chernoff_tail(TailBoundParams::make({1.0}, 2.0, Field::Real)), std::exp(-0.25), 1e-15);
  EXPECT_NEAR(chernoff_tail(TailBoundParams::make({1.0}, 2.0, Field::Complex)), std::exp(-0.5), 1e-15);
  const auto p = TailBoundParams::make({1.0, -1.0}, 3.0, Field::Real);
  EXPECT_NEAR(p.sigma, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(p.delta, 1.0);
  EXPECT_NEAR(chernoff_tail(p), std::exp(-3.0 * std::sqrt(2.0) / 8.0), 1e-15);
  const auto neg = TailBoundParams::make({-1.0, -2.0}, 1.5, Field::Real);
  EXPECT_EQ(neg.delta, 0.0);
  EXPECT_NEAR(chernoff_tail(neg), std::exp(-1.5 * 1.5 / 8.0), 1e-15);
}

TEST(TailBounds, ParamsValidation) {
  auto p = TailBoundParams::make({1.0, 2.0}, 2.0, Field::Real);
  EXPECT_NO_THROW(p.validate());
  p.sigma += 1e-6;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(chernoff_tail(TailBoundParams::make({0.0}, 2.0, Field::Real)), std::invalid_argument);
}

TEST(TailBounds, Chebyshev) {
  EXPECT_DOUBLE_EQ(chebyshev_tail({1.0}, 3.0), 0.5);
  EXPECT_NEAR(chebyshev_tail({1.0}, 1.0 + std::sqrt(200.0)), 0.01, 1e-15);
  EXPECT_NEAR(chebyshev_tail({3.0, -1.5}, 4.0), 9.0 * chebyshev_tail({1.0, -0.5}, 4.0), 1e-14);
  EXPECT_THROW(chebyshev_tail({1.0}, 1.0), std::domain_error);
}

TEST(TailBounds, BoundEmpiricalFrequencies) {
  Rng rng(15);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> l(1 + t % 5);
    for (auto& x : l) x = rng.normal();
    const double alpha = 1.5 + 3.0 * rng.uniform();
    for (Field f : {Field::Real, Field::Complex}) {
      const EstimatorOptions opt{100'000, static_cast<std::uint64_t>(t), Execution::Parallel};
      const auto p = TailBoundParams::make(l, alpha, f);
      const auto ch = chernoff_event_frequency(p, opt);
      EXPECT_LE(ch.estimate - 3 * ch.standard_error, chernoff_tail(p));
      const auto cb = chebyshev_event_frequency(l, alpha, f, opt);
      EXPECT_LE(cb.estimate - 3 * cb.standard_error, chebyshev_tail(l, alpha));
    }
  }
}

TEST(ExpIneq, Examples) {
  EXPECT_TRUE(exp_ineq_5_3(0.0));
  EXPECT_TRUE(exp_ineq_5_3(0.5));
  EXPECT_TRUE(exp_ineq_5_3(-5.0));
  for (double t = -10.0; t <= 0.5; t += 0.01) EXPECT_TRUE(exp_ineq_5_3(t)) << t;
  EXPECT_THROW(exp_ineq_5_3(0.6), std::domain_error);
}

TEST(ComplexModulus, Cdf) {
  EXPECT_NEAR(complex_modulus_cdf(1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(complex_modulus_cdf(0.0), 0.0);
  Rng rng(16);
  long long hits = 0;
  const long long n = 400'000;
  for (long long i = 0; i < n; ++i) {
    const double re = rng.normal(), im = rng.normal();
    if (0.5 * (re * re + im * im) <= 0.7) ++hits;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, complex_modulus_cdf(0.7), 0.004);
}

TEST(MatrixAsymProb, RealAndComplex) {
  Rng rng(17);
  SymMatrix a = random_sym(rng, 4);
  const SymMatrix z = random_psd(rng, 4, 4);
  if (trace_inner(a, z) < 0) a = SymMatrix(-a.dense());
  const EstimatorOptions opt{200'000, 18, Execution::Parallel};
  const auto r = matrix_asym_prob(HermMatrix(a), HermMatrix(z), 0.0, Field::Real, opt);
  EXPECT_TRUE(r.clears_bound());
  HermMatrix ha = random_herm(rng, 3);
  const HermMatrix hb = random_herm(rng, 3);
  const HermMatrix hz(CMatrix(hb.complex() * hb.complex().adjoint()));
  if ((ha.complex() * hz.complex()).trace().real() < 0) ha = HermMatrix(CMatrix(-ha.complex()));
  const auto c = matrix_asym_prob(ha, hz, 0.0, Field::Complex, opt);
  EXPECT_GT(c.estimate, 0.0);
  EXPECT_THROW(matrix_asym_prob(HermMatrix(a), HermMatrix(z), 1.5, Field::Real), std::invalid_argument);
  EXPECT_THROW(matrix_asym_prob(ha, hz, 0.5, Field::Real), std::invalid_argument);
}

TEST(LemmaIds, RoundTrip) {
  for (LemmaId id : {LemmaId::L2_1, LemmaId::L2_2, LemmaId::L3_1, LemmaId::L3_2, LemmaId::L3_4, LemmaId::L3_5,
                     LemmaId::L4_1, LemmaId::L5_1})
    EXPECT_EQ(lemma_from_string(to_string(id)), id);
  EXPECT_THROW(lemma_from_string("L9_9"), std::invalid_argument);
}
