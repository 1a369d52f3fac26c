#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hqsdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSymmetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative kernel hits its iteration cap. Carries the
/// residual reached so callers can decide whether it is usable anyway.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Dense real symmetric matrix. Input is symmetrized as (M + M^T)/2 unless
/// `strict` is set, in which case asymmetry above 1e-8 is rejected.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m, bool strict = false);

  static SymMatrix zeros(int n);
  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Vector& d);

  int n() const { return static_cast<int>(m_.rows()); }
  bool empty() const { return m_.size() == 0; }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& dense() const { return m_; }

 private:
  Matrix m_;
};

/// Dense Hermitian matrix stored as a symmetric real part and an
/// antisymmetric imaginary part (zero diagonal).
class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(const SymMatrix& re);
  HermMatrix(const Matrix& re, const Matrix& im, bool strict = false);
  explicit HermMatrix(const CMatrix& h, bool strict = false);

  int n() const { return static_cast<int>(re_.rows()); }
  bool empty() const { return re_.size() == 0; }
  bool is_real() const { return im_.cwiseAbs().maxCoeff() == 0.0; }
  const Matrix& re() const { return re_; }
  const Matrix& im() const { return im_; }
  SymMatrix real_part() const { return SymMatrix(re_); }
  CMatrix complex() const;

 private:
  Matrix re_;
  Matrix im_;
};

struct Spectrum {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns

  Matrix reconstruct() const;
};

struct HermSpectrum {
  Vector eigenvalues;    // descending
  CMatrix eigenvectors;  // unitary columns

  CMatrix reconstruct() const;
};

/// Cyclic Jacobi eigendecomposition. At most 100 sweeps; stops when the
/// off-diagonal Frobenius mass drops below 1e-12 * ||M||_F.
Spectrum sym_eig(const SymMatrix& m);

/// Complex cyclic Jacobi: each rotation first removes the phase of the
/// pivot, then applies the real 2x2 rotation.
HermSpectrum herm_eig(const HermMatrix& h);

/// Real embedding [[Re, -Im], [Im, Re]] of size 2n.
SymMatrix herm_embed(const HermMatrix& h);

/// Inverse of herm_embed. Averages the two copies, so it also projects a
/// general 2n symmetric matrix onto the embedded structure.
HermMatrix herm_extract(const SymMatrix& embedded);

double trace_inner(const SymMatrix& a, const SymMatrix& b);
/// Re Tr(AB) for Hermitian A, B.
double trace_inner(const HermMatrix& a, const HermMatrix& b);

double frobenius_norm(const SymMatrix& m);
/// ||AB||_F for the (generally non-symmetric) product of two matrices.
double frobenius_norm_product(const SymMatrix& a, const SymMatrix& b);
double frobenius_norm_product(const HermMatrix& a, const HermMatrix& b);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

}  // namespace hqsdp
