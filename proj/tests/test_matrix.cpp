#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "hqsdp/matrix.hpp"
#include "test_util.hpp"

using namespace hqsdp;
using namespace hqsdp::testing;

TEST(SymMatrix, SymmetrizesInput) {
  Matrix m(2, 2);
  m << 1, 2, 4, 3;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(SymMatrix, StrictModeRejectsAsymmetry) {
  Matrix m(2, 2);
  m << 1, 2, 2.1, 3;
  EXPECT_THROW(SymMatrix(m, true), NotSymmetricError);
  m(1, 0) = 2.0 + 1e-12;
  EXPECT_NO_THROW(SymMatrix(m, true));
}

TEST(HermMatrix, RejectsNonHermitianInStrictMode) {
  Matrix re = Matrix::Identity(2, 2), im(2, 2);
  im << 0, 1, 1, 0;  // symmetric imaginary part is not Hermitian
  EXPECT_THROW(HermMatrix(re, im, true), NotSymmetricError);
}

TEST(SymEig, DiagonalInput) {
  const Spectrum s = sym_eig(SymMatrix::diagonal(Vector::LinSpaced(2, 3, 1)));
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 1.0);
  EXPECT_NEAR(std::abs(s.eigenvectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors(1, 1)), 1.0, 1e-15);
}

TEST(SymEig, TwoByTwoSwap) {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const Spectrum s = sym_eig(SymMatrix(m));
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), -1.0, 1e-14);
}

TEST(SymEig, ReconstructionAndOrthogonalityOnRandomMatrices) {
  Rng rng(11);
  for (int n : {1, 2, 5, 8, 20, 40}) {
    const SymMatrix m = random_sym(rng, n);
    const Spectrum s = sym_eig(m);
    const double norm = m.dense().norm();
    EXPECT_LE((s.reconstruct() - m.dense()).norm(), 1e-10 * (1 + norm)) << n;
    EXPECT_LE((s.eigenvectors.transpose() * s.eigenvectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    for (int i = 1; i < n; ++i) EXPECT_GE(s.eigenvalues(i - 1), s.eigenvalues(i));
    // Independent oracle: Eigen's tridiagonal QR solver.
    Eigen::SelfAdjointEigenSolver<Matrix> ref(m.dense());
    const Vector want = ref.eigenvalues().reverse();
    EXPECT_LE((s.eigenvalues - want).cwiseAbs().maxCoeff(), 1e-10 * (1 + norm));
  }
}

TEST(HermEmbed, RealInputGivesTwoCopies) {
  Matrix re(2, 2);
  re << 2, 1, 1, 3;
  const SymMatrix e = herm_embed(HermMatrix(SymMatrix(re)));
  EXPECT_EQ(e.n(), 4);
  EXPECT_EQ(e.dense().topLeftCorner(2, 2), re);
  EXPECT_EQ(e.dense().bottomRightCorner(2, 2), re);
  EXPECT_EQ(e.dense().topRightCorner(2, 2).norm(), 0.0);
}

TEST(HermEmbed, DoubledSpectrum) {
  CMatrix h(2, 2);
  h << 1, std::complex<double>(0, 1), std::complex<double>(0, -1), 1;
  const Spectrum s = sym_eig(herm_embed(HermMatrix(h)));
  EXPECT_NEAR(s.eigenvalues(0), 2.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), 2.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(2), 0.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(3), 0.0, 1e-14);

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const HermMatrix r = random_herm(rng, 4);
    const Vector emb = sym_eig(herm_embed(r)).eigenvalues;
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(r.complex());
    const Vector want = ref.eigenvalues().reverse();
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(emb(2 * i), want(i), 1e-10);
      EXPECT_NEAR(emb(2 * i + 1), want(i), 1e-10);
    }
    EXPECT_NEAR(herm_embed(r).dense().trace(), 2.0 * r.re().trace(), 1e-12);
  }
}

TEST(HermEmbed, ExtractInvertsEmbedding) {
  Rng rng(6);
  const HermMatrix h = random_herm(rng, 5);
  const HermMatrix back = herm_extract(herm_embed(h));
  EXPECT_LE((back.complex() - h.complex()).norm(), 1e-15);
}

TEST(HermEmbed, PreservesPsdness) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    HermMatrix h = random_herm(rng, 4);
    if (t % 2 == 0) h = HermMatrix(CMatrix(h.complex() * h.complex()));
    const double lam = herm_eig(h).eigenvalues.minCoeff();
    const double emb = min_eigenvalue(herm_embed(h));
    EXPECT_EQ(lam >= -1e-12, emb >= -1e-12);
    EXPECT_NEAR(lam, emb, 1e-10);
  }
}

TEST(TraceInner, Basics) {
  EXPECT_DOUBLE_EQ(trace_inner(SymMatrix::identity(2), SymMatrix::identity(2)), 2.0);
  Vector d(4);
  d << 4, 4, 1, 0;
  Matrix a3 = Matrix::Zero(4, 4);
  a3(0, 0) = 0.5;
  a3(2, 2) = -1.0;
  EXPECT_DOUBLE_EQ(trace_inner(SymMatrix::diagonal(d), SymMatrix(a3)), 1.0);
  EXPECT_THROW(trace_inner(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionMismatch);
}

TEST(TraceInner, MatchesEntrywiseSumAndQuadraticForm) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 7;
    const SymMatrix a = random_sym(rng, n), b = random_sym(rng, n);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += a(i, j) * b(i, j);
    EXPECT_NEAR(trace_inner(a, b), s, 1e-12 * (1 + std::abs(s)));
    const Vector x = random_vector(rng, n);
    const double q = x.dot(a.dense() * x);
    EXPECT_NEAR(trace_inner(a, SymMatrix(x * x.transpose())), q, 1e-12 * (1 + std::abs(q)));
  }
}

TEST(Frobenius, Basics) {
  EXPECT_DOUBLE_EQ(frobenius_norm(SymMatrix::identity(3)), std::sqrt(3.0));
  EXPECT_EQ(frobenius_norm(SymMatrix::zeros(3)), 0.0);
  const double m = 10.0;
  Vector d(2);
  d << m + 1, -m;
  EXPECT_DOUBLE_EQ(frobenius_norm(SymMatrix::diagonal(d)), std::sqrt(221.0));
}

TEST(Frobenius, EqualsSpectralNorm) {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const SymMatrix a = random_sym(rng, 6);
    EXPECT_NEAR(frobenius_norm(a), sym_eig(a).eigenvalues.norm(), 1e-10 * frobenius_norm(a));
  }
}

TEST(Frobenius, ProductNorm) {
  Rng rng(10);
  const SymMatrix a = random_sym(rng, 5), b = random_psd(rng, 5, 2);
  EXPECT_NEAR(frobenius_norm_product(a, b), (a.dense() * b.dense()).norm(), 1e-12);
}
