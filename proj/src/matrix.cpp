#include "hqsdp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hqsdp {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;
constexpr double kStrictSymmetryTol = 1e-8;

inline double conj_scalar(double x) { return x; }
inline std::complex<double> conj_scalar(std::complex<double> x) { return std::conj(x); }
inline double real_part(double x) { return x; }
inline double real_part(std::complex<double> x) { return x.real(); }

template <typename Scalar>
using DenseOf = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
double off_diagonal_norm(const DenseOf<Scalar>& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Diagonalizes the Hermitian (or real symmetric) matrix `a` in place.
// On return `a` is diagonal to tolerance and `v` holds the rotations.
template <typename Scalar>
void jacobi_sweeps(DenseOf<Scalar>& a, DenseOf<Scalar>& v) {
  const Eigen::Index n = a.rows();
  v = DenseOf<Scalar>::Identity(n, n);
  const double scale = a.norm();
  const double tol = kOffDiagonalTol * scale;
  double off = off_diagonal_norm(a);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off <= tol) return;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        const Scalar phase = apq / b;
        const double app = real_part(a(p, p));
        const double aqq = real_part(a(q, q));
        const double zeta = (aqq - app) / (2.0 * b);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Scalar gpp = c;
        const Scalar gpq = s;
        const Scalar gqp = -s * conj_scalar(phase);
        const Scalar gqq = c * conj_scalar(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = conj_scalar(gpp) * apk + conj_scalar(gqp) * aqk;
          a(q, k) = conj_scalar(gpq) * apk + conj_scalar(gqq) * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = real_part(a(p, p));
        a(q, q) = real_part(a(q, q));
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
    off = off_diagonal_norm(a);
  }
  if (off > tol) throw ConvergenceError("Jacobi eigensolver did not converge", off);
}

template <typename Scalar>
void sort_descending(const DenseOf<Scalar>& a, const DenseOf<Scalar>& v, Vector& values,
                     DenseOf<Scalar>& vectors) {
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return real_part(a(i, i)) > real_part(a(j, j));
  });
  values.resize(n);
  vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values(k) = real_part(a(order[k], order[k]));
    vectors.col(k) = v.col(order[k]);
  }
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m, bool strict) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: matrix is not square");
  if (m.rows() < 1) throw DimensionMismatch("SymMatrix: dimension must be at least 1");
  if (!m.allFinite()) throw std::invalid_argument("SymMatrix: non-finite entry");
  if (strict) {
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kStrictSymmetryTol) throw NotSymmetricError("SymMatrix: asymmetry exceeds 1e-8");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zeros(int n) { return SymMatrix(Matrix::Zero(n, n)); }
SymMatrix SymMatrix::identity(int n) { return SymMatrix(Matrix::Identity(n, n)); }
SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

HermMatrix::HermMatrix(const SymMatrix& re) : re_(re.dense()), im_(Matrix::Zero(re.n(), re.n())) {}

HermMatrix::HermMatrix(const Matrix& re, const Matrix& im, bool strict) {
  if (re.rows() != re.cols() || im.rows() != im.cols() || re.rows() != im.rows())
    throw DimensionMismatch("HermMatrix: real and imaginary parts must be square and equal size");
  if (re.rows() < 1) throw DimensionMismatch("HermMatrix: dimension must be at least 1");
  if (!re.allFinite() || !im.allFinite()) throw std::invalid_argument("HermMatrix: non-finite entry");
  if (strict) {
    const double asym = std::max((re - re.transpose()).cwiseAbs().maxCoeff(),
                                 (im + im.transpose()).cwiseAbs().maxCoeff());
    if (asym > kStrictSymmetryTol) throw NotSymmetricError("HermMatrix: not Hermitian within 1e-8");
  }
  re_ = 0.5 * (re + re.transpose());
  im_ = 0.5 * (im - im.transpose());
  im_.diagonal().setZero();
}

HermMatrix::HermMatrix(const CMatrix& h, bool strict) : HermMatrix(h.real(), h.imag(), strict) {}

CMatrix HermMatrix::complex() const {
  CMatrix h(n(), n());
  h.real() = re_;
  h.imag() = im_;
  return h;
}

Matrix Spectrum::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

CMatrix HermSpectrum::reconstruct() const {
  return eigenvectors * eigenvalues.cast<std::complex<double>>().asDiagonal() * eigenvectors.adjoint();
}

Spectrum sym_eig(const SymMatrix& m) {
  Matrix a = m.dense();
  Matrix v;
  jacobi_sweeps<double>(a, v);
  Spectrum out;
  sort_descending<double>(a, v, out.eigenvalues, out.eigenvectors);
  return out;
}

HermSpectrum herm_eig(const HermMatrix& h) {
  CMatrix a = h.complex();
  CMatrix v;
  jacobi_sweeps<std::complex<double>>(a, v);
  HermSpectrum out;
  sort_descending<std::complex<double>>(a, v, out.eigenvalues, out.eigenvectors);
  return out;
}

SymMatrix herm_embed(const HermMatrix& h) {
  const int n = h.n();
  Matrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.re();
  e.topRightCorner(n, n) = -h.im();
  e.bottomLeftCorner(n, n) = h.im();
  e.bottomRightCorner(n, n) = h.re();
  return SymMatrix(e);
}

HermMatrix herm_extract(const SymMatrix& embedded) {
  if (embedded.n() % 2 != 0) throw DimensionMismatch("herm_extract: embedded dimension must be even");
  const int n = embedded.n() / 2;
  const Matrix& e = embedded.dense();
  Matrix re = 0.5 * (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n));
  Matrix im = 0.5 * (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n));
  return HermMatrix(re, im);
}

double trace_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("trace_inner: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

double trace_inner(const HermMatrix& a, const HermMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("trace_inner: dimension mismatch");
  return a.re().cwiseProduct(b.re()).sum() + a.im().cwiseProduct(b.im()).sum();
}

double frobenius_norm(const SymMatrix& m) { return m.dense().norm(); }

double frobenius_norm_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("frobenius_norm_product: dimension mismatch");
  return (a.dense() * b.dense()).norm();
}

double frobenius_norm_product(const HermMatrix& a, const HermMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("frobenius_norm_product: dimension mismatch");
  return (a.complex() * b.complex()).norm();
}

double min_eigenvalue(const SymMatrix& m) { return sym_eig(m).eigenvalues.minCoeff(); }
double max_eigenvalue(const SymMatrix& m) { return sym_eig(m).eigenvalues.maxCoeff(); }

}  // namespace hqsdp
