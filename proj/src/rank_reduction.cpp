#include "hqsdp/rank_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/SVD>

#include "hqsdp/random.hpp"

namespace hqsdp {

namespace {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
using Complex = std::complex<double>;

std::pair<Vector, Matrix> eig(const Matrix& m) {
  Spectrum s = sym_eig(SymMatrix(m));
  return {s.eigenvalues, s.eigenvectors};
}

std::pair<Vector, CMatrix> eig(const CMatrix& m) {
  HermSpectrum s = herm_eig(HermMatrix(m));
  return {s.eigenvalues, s.eigenvectors};
}

template <typename S>
Mat<S> hermitize(const Mat<S>& m) {
  return (m + m.adjoint()) * 0.5;
}

template <typename S>
double re_trace(const Mat<S>& a, const Mat<S>& b) {
  return std::real(a.cwiseProduct(b.transpose()).sum());
}

template <typename S>
Mat<S> factor_of(const Mat<S>& z, double tol) {
  auto [vals, vecs] = eig(z);
  const double top = vals.size() > 0 ? vals(0) : 0.0;
  if (vals.size() > 0 && vals(vals.size() - 1) < -tol * std::max(1.0, std::abs(top)))
    throw NotPsdError("factorize: matrix has a significantly negative eigenvalue");
  int r = 0;
  while (r < vals.size() && top > 0.0 && vals(r) > tol * top) ++r;
  Mat<S> f(z.rows(), r);
  for (int j = 0; j < r; ++j) f.col(j) = vecs.col(j) * std::sqrt(vals(j));
  return f;
}

// Real basis of symmetric (real) or Hermitian (complex) r x r matrices.
template <typename S>
std::vector<Mat<S>> hermitian_basis(int r) {
  std::vector<Mat<S>> basis;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      Mat<S> e = Mat<S>::Zero(r, r);
      e(i, j) = e(j, i) = S(1.0);
      basis.push_back(e);
      if constexpr (!std::is_same_v<S, double>) {
        if (i != j) {
          Mat<S> f = Mat<S>::Zero(r, r);
          f(i, j) = Complex(0.0, 1.0);
          f(j, i) = Complex(0.0, -1.0);
          basis.push_back(f);
        }
      }
    }
  return basis;
}

Matrix embed_factor(const CMatrix& v) {
  const int n = static_cast<int>(v.rows());
  const int r = static_cast<int>(v.cols());
  Matrix u(2 * n, 2 * r);
  u.topLeftCorner(n, r) = v.real();
  u.topRightCorner(n, r) = -v.imag();
  u.bottomLeftCorner(n, r) = v.imag();
  u.bottomRightCorner(n, r) = v.real();
  return u;
}

template <typename S>
struct Native {
  Mat<S> C;
  std::vector<Mat<S>> A;
  Mat<S> Z;
};

Native<double> native_real(const SdpSolution& sol, const QcqpInstance& inst) {
  Native<double> nat;
  nat.C = inst.objective().re();
  for (const auto& a : inst.constraints()) nat.A.push_back(a.re());
  nat.Z = sol.X.dense();
  return nat;
}

Native<Complex> native_complex(const SdpSolution& sol, const QcqpInstance& inst) {
  Native<Complex> nat;
  nat.C = inst.objective().complex();
  for (const auto& a : inst.constraints()) nat.A.push_back(a.complex());
  nat.Z = herm_extract(sol.X).complex();
  return nat;
}

template <typename S>
LowRankSolution finish(Mat<S> v, const Native<S>& nat, const QcqpInstance& inst, int steps) {
  LowRankSolution out;
  out.field = inst.field();
  out.rank = static_cast<int>(v.cols());
  out.steps = steps;
  const Mat<S> z = v * v.adjoint();
  out.objective_value = re_trace<S>(nat.C, z);
  for (const auto& a : nat.A) out.constraint_values.push_back(re_trace<S>(a, z));
  if constexpr (std::is_same_v<S, double>) {
    out.U = v;
  } else {
    out.complex_factor = v;
    out.U = embed_factor(v);
  }
  out.X = out.U.cols() > 0 ? SymMatrix(out.U * out.U.transpose()) : SymMatrix::zeros(inst.embedded_dim());
  out.bound_met = out.rank <= pataki_rank_bound(inst.num_constraints(), inst.field());
  return out;
}

template <typename S>
LowRankSolution reduce(const Native<S>& nat, const QcqpInstance& inst, std::uint64_t seed,
                       const RankReductionSettings& settings) {
  const int n = inst.n();
  const int bound = pataki_rank_bound(inst.num_constraints(), inst.field());
  const bool minimize = inst.sense() == Sense::Minimize;
  const int max_steps = settings.max_steps > 0 ? settings.max_steps : 10 * n + 10;

  Mat<S> v = factor_of<S>(hermitize<S>(nat.Z), settings.rank_tol);
  auto drop_noise = [&](Mat<S>& f) {
    auto [gvals, gvecs] = eig(hermitize<S>(Mat<S>(f.adjoint() * f)));
    const int r = static_cast<int>(gvals.size());
    if (r == 0 || gvals(r - 1) > settings.noise_tol * gvals(0)) return false;
    f = Mat<S>(f * gvecs.leftCols(r - 1));
    return true;
  };
  int step = 0;
  for (; step < max_steps; ++step) {
    const int r = static_cast<int>(v.cols());
    if (r <= bound || r == 0) break;

    const Mat<S> z = v * v.adjoint();
    const double obj = re_trace<S>(nat.C, z);
    std::vector<double> vals;
    std::vector<Mat<S>> compressed;
    for (const auto& a : nat.A) {
      vals.push_back(re_trace<S>(a, z));
      compressed.push_back(v.adjoint() * a * v);
    }
    const Mat<S> c_comp = v.adjoint() * nat.C * v;

    // Every constraint row is kept so all trace values are preserved; the
    // objective row is added when the basis is large enough to allow it.
    const auto basis = hermitian_basis<S>(r);
    const int d = static_cast<int>(basis.size());
    const int k = static_cast<int>(nat.A.size());
    const bool with_objective = k + 1 < d;
    const int rows = k + (with_objective ? 1 : 0);
    Matrix L(rows, d);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d; ++j) L(i, j) = re_trace<S>(compressed[i], basis[j]);
    if (with_objective)
      for (int j = 0; j < d; ++j) L(k, j) = re_trace<S>(c_comp, basis[j]);

    // Row-normalize so the rank decision is scale-free.
    for (int i = 0; i < rows; ++i) {
      const double nrm = L.row(i).norm();
      if (nrm > 0.0) L.row(i) /= nrm;
    }
    Eigen::JacobiSVD<Matrix> svd(L, Eigen::ComputeFullV);
    const Vector sv = svd.singularValues();
    int lrank = 0;
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-10 * std::max(1.0, smax)) ++lrank;
    if (lrank >= d) {
      if (drop_noise(v)) continue;
      break;
    }

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(step)));
    Vector coeff = Vector::Zero(d);
    for (int j = lrank; j < d; ++j) coeff += rng.normal() * svd.matrixV().col(j);
    Mat<S> dir = Mat<S>::Zero(r, r);
    for (int j = 0; j < d; ++j) dir += coeff(j) * basis[j];
    dir = hermitize<S>(dir);

    auto [dvals, dvecs] = eig(dir);
    (void)dvecs;
    std::vector<double> dcon(k);
    for (int i = 0; i < k; ++i) dcon[i] = re_trace<S>(compressed[i], dir);
    const double dobj = re_trace<S>(c_comp, dir);

    // Candidate step lengths for +dir and -dir, limited by any constraint
    // that would otherwise become violated.
    struct Candidate {
      double sign, t;
      bool drops;
    };
    std::vector<Candidate> cands;
    for (double sign : {1.0, -1.0}) {
      const double lmin = sign > 0 ? dvals(dvals.size() - 1) : -dvals(0);
      if (lmin >= 0.0) continue;
      double t = -1.0 / lmin;
      bool drops = true;
      for (int i = 0; i < k; ++i) {
        const double rate = sign * dcon[i];
        const double slack = minimize ? vals[i] - 1.0 : 1.0 - vals[i];
        const double toward = minimize ? -rate : rate;
        if (toward > 0.0 && std::max(slack, 0.0) / toward < t) {
          t = std::max(slack, 0.0) / toward;
          drops = false;
        }
      }
      const double change = sign * t * dobj;
      const bool worsens = minimize ? change > 1e-9 * (1.0 + std::abs(obj)) : change < -1e-9 * (1.0 + std::abs(obj));
      if (!worsens && t > 0.0) cands.push_back({sign, t, drops});
    }
    if (cands.empty()) {
      if (drop_noise(v)) continue;
      break;
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.drops != b.drops) return a.drops;
      return a.t > b.t;
    });
    const Candidate& best = cands.front();

    const Mat<S> inner = hermitize<S>(Mat<S>::Identity(r, r) + best.sign * best.t * dir);
    auto [ivals, ivecs] = eig(inner);
    const double top = ivals(0);
    int keep = 0;
    while (keep < ivals.size() && ivals(keep) > settings.rank_tol * top) ++keep;
    if (best.drops) keep = std::min(keep, r - 1);
    Mat<S> next(n, keep);
    for (int j = 0; j < keep; ++j) next.col(j) = v * ivecs.col(j) * std::sqrt(ivals(j));
    v = next;
  }
  return finish<S>(v, nat, inst, step);
}

}  // namespace

int pataki_rank_bound(int num_constraints, Field field) {
  int r = 0;
  if (field == Field::Real) {
    while ((r + 1) * (r + 2) / 2 <= num_constraints) ++r;
  } else {
    while ((r + 1) * (r + 1) <= num_constraints) ++r;
  }
  return std::max(r, 1);
}

Matrix factorize(const SymMatrix& X, double tol) { return factor_of<double>(X.dense(), tol); }

CMatrix factorize(const HermMatrix& Z, double tol) { return factor_of<Complex>(Z.complex(), tol); }

LowRankSolution reduce_rank(const SdpSolution& sol, const QcqpInstance& inst, std::uint64_t seed,
                            const RankReductionSettings& settings) {
  if (sol.status != SolveStatus::Optimal) throw std::invalid_argument("reduce_rank: solution is not optimal");
  if (sol.X.n() != inst.embedded_dim()) throw DimensionMismatch("reduce_rank: solution size does not match instance");
  if (inst.field() == Field::Real) return reduce<double>(native_real(sol, inst), inst, seed, settings);
  return reduce<Complex>(native_complex(sol, inst), inst, seed, settings);
}

LowRankSolution factor_solution(const SdpSolution& sol, const QcqpInstance& inst, double tol) {
  if (sol.X.n() != inst.embedded_dim()) throw DimensionMismatch("factor_solution: solution size does not match instance");
  if (inst.field() == Field::Real) {
    const auto nat = native_real(sol, inst);
    return finish<double>(factor_of<double>(nat.Z, tol), nat, inst, 0);
  }
  const auto nat = native_complex(sol, inst);
  return finish<Complex>(factor_of<Complex>(hermitize<Complex>(nat.Z), tol), nat, inst, 0);
}

}  // namespace hqsdp
