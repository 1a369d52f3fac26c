#include "hqsdp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace hqsdp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// Point in K = S^n_+ x R^p_+ (or its dual), kept together so the linear
// algebra below reads like the vector case.
struct ConeVec {
  Matrix s;
  Vector l;

  ConeVec& operator+=(const ConeVec& o) {
    s += o.s;
    l += o.l;
    return *this;
  }
  double dot(const ConeVec& o) const { return inner(s, o.s) + l.dot(o.l); }
  double norm() const { return std::sqrt(s.squaredNorm() + l.squaredNorm()); }
};

ConeVec operator*(double a, const ConeVec& v) { return {a * v.s, a * v.l}; }
ConeVec operator+(const ConeVec& a, const ConeVec& b) { return {a.s + b.s, a.l + b.l}; }
ConeVec operator-(const ConeVec& a, const ConeVec& b) { return {a.s - b.s, a.l - b.l}; }

class Operator {
 public:
  explicit Operator(const ConicProblem& p) : p_(p) {}

  Vector apply(const ConeVec& x) const {
    Vector out(p_.rows());
    for (int i = 0; i < p_.rows(); ++i) {
      out(i) = inner(p_.a_psd[i], x.s);
      if (p_.num_linear > 0) out(i) += p_.a_lin.row(i).dot(x.l);
    }
    return out;
  }

  ConeVec adjoint(const Vector& y) const {
    ConeVec out{Matrix::Zero(p_.psd_dim, p_.psd_dim), Vector::Zero(p_.num_linear)};
    for (int i = 0; i < p_.rows(); ++i)
      if (y(i) != 0.0) out.s += y(i) * p_.a_psd[i];
    if (p_.num_linear > 0) out.l = p_.a_lin.transpose() * y;
    return out;
  }

 private:
  const ConicProblem& p_;
};

// Nesterov-Todd scaling: W Z W = X with W = R R^T and
// R^{-1} X R^{-T} = R^T Z R = diag(lambda).
struct Scaling {
  Matrix R, Rinv, W;
  Vector lambda;
  Vector w_lin;       // x / z
  Vector lambda_lin;  // sqrt(x z)
};

bool compute_scaling(const ConeVec& x, const ConeVec& z, Scaling& sc) {
  const int n = static_cast<int>(x.s.rows());
  if (n > 0) {
    Eigen::LLT<Matrix> cx(x.s), cz(z.s);
    if (cx.info() != Eigen::Success || cz.info() != Eigen::Success) return false;
    const Matrix lx = cx.matrixL();
    const Matrix lz = cz.matrixL();
    Eigen::JacobiSVD<Matrix> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sc.lambda = svd.singularValues();
    if (sc.lambda.minCoeff() <= 0.0 || !sc.lambda.allFinite()) return false;
    const Vector inv_sqrt = sc.lambda.cwiseSqrt().cwiseInverse();
    sc.R = lx * svd.matrixV() * inv_sqrt.asDiagonal();
    const Matrix lx_inv = lx.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    sc.Rinv = sc.lambda.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * lx_inv;
    sc.W = sym(sc.R * sc.R.transpose());
  }
  if ((x.l.array() <= 0.0).any() || (z.l.array() <= 0.0).any()) return false;
  sc.w_lin = x.l.cwiseQuotient(z.l);
  sc.lambda_lin = x.l.cwiseProduct(z.l).cwiseSqrt();
  return true;
}

ConeVec apply_w(const Scaling& sc, const ConeVec& v) {
  return {sym(sc.W * v.s * sc.W), sc.w_lin.cwiseProduct(v.l)};
}

// Largest alpha in [0, inf) keeping lambda + alpha * d in the cone, with d
// already in scaled coordinates.
double max_step(const Vector& lambda, const Matrix& d, const Vector& lambda_lin, const Vector& d_lin) {
  double alpha = kInf;
  if (lambda.size() > 0) {
    const Vector s = lambda.cwiseSqrt().cwiseInverse();
    const Matrix m = s.asDiagonal() * sym(d) * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = -1.0 / lmin;
  }
  for (int i = 0; i < d_lin.size(); ++i)
    if (d_lin(i) < 0.0) alpha = std::min(alpha, -lambda_lin(i) / d_lin(i));
  return alpha;
}

double ratio_step(double v, double dv) { return dv < 0.0 ? -v / dv : kInf; }

struct Direction {
  ConeVec dx, dz;
  Vector dy;
  double dtau = 0.0, dkappa = 0.0;
};

struct ScaledProblem {
  ConicProblem p;
  Vector row_scale;
  double obj_scale = 1.0;
};

ScaledProblem scale_problem(const ConicProblem& in) {
  ScaledProblem out{in, Vector::Ones(in.rows()), 1.0};
  for (int i = 0; i < in.rows(); ++i) {
    double nrm = in.a_psd[i].squaredNorm();
    if (in.num_linear > 0) nrm += in.a_lin.row(i).squaredNorm();
    nrm = std::sqrt(nrm);
    const double d = nrm > 0.0 ? 1.0 / nrm : 1.0;
    out.row_scale(i) = d;
    out.p.a_psd[i] *= d;
    if (in.num_linear > 0) out.p.a_lin.row(i) *= d;
    out.p.b(i) *= d;
  }
  const double cn = std::sqrt(in.c_psd.squaredNorm() + in.c_lin.squaredNorm());
  out.obj_scale = std::max(1.0, cn);
  out.p.c_psd /= out.obj_scale;
  out.p.c_lin /= out.obj_scale;
  return out;
}

void validate(const ConicProblem& p) {
  const int m = p.rows();
  if (static_cast<int>(p.a_psd.size()) != m) throw DimensionMismatch("solve_conic: a_psd size != rows");
  for (const auto& a : p.a_psd)
    if (a.rows() != p.psd_dim || a.cols() != p.psd_dim) throw DimensionMismatch("solve_conic: a_psd block size");
  if (p.c_psd.rows() != p.psd_dim || p.c_psd.cols() != p.psd_dim) throw DimensionMismatch("solve_conic: c_psd size");
  if (p.c_lin.size() != p.num_linear) throw DimensionMismatch("solve_conic: c_lin size");
  if (p.num_linear > 0 && (p.a_lin.rows() != m || p.a_lin.cols() != p.num_linear))
    throw DimensionMismatch("solve_conic: a_lin size");
}

}  // namespace

ConicResult solve_conic(const ConicProblem& problem, const SolverSettings& settings) {
  validate(problem);
  const ScaledProblem scaled = scale_problem(problem);
  const ConicProblem& p = scaled.p;
  const Operator A(p);
  const int m = p.rows();
  const int n = p.psd_dim;
  const int nl = p.num_linear;
  const double nu = n + nl + 1;

  const ConeVec c{p.c_psd, p.c_lin};
  const Vector& b = p.b;
  const double b_norm = b.norm();
  const double c_norm = c.norm();

  ConeVec x{Matrix::Identity(n, n), Vector::Ones(nl)};
  ConeVec z{Matrix::Identity(n, n), Vector::Ones(nl)};
  Vector y = Vector::Zero(m);
  double tau = 1.0, kappa = 1.0;

  ConicResult res;
  SolveStatus status = SolveStatus::NumericalFailure;
  double pres = kInf, dres = kInf, rel_gap = kInf;
  double obj_err = kInf;  // first-order objective error from the residuals

  auto evaluate = [&]() {
    const Vector rp_abs = A.apply(x) - tau * b;
    const ConeVec rd_abs = tau * c - A.adjoint(y) - z;
    const double pobj = c.dot(x) / tau;
    const double dobj = b.dot(y) / tau;
    pres = rp_abs.norm() / tau / (1.0 + b_norm);
    dres = rd_abs.norm() / tau / (1.0 + c_norm);
    rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    obj_err = (std::abs(rd_abs.dot(x)) + std::abs(rp_abs.dot(y))) / (tau * tau) /
              (1.0 + std::abs(pobj) + std::abs(dobj));
  };

  // A ray only needs its linear part to cancel A_psd(x.s) with x.l >= 0; when
  // the linear block is square that part is recomputed instead of trusted.
  Eigen::PartialPivLU<Matrix> lin_lu;
  const bool lin_square = nl == m && nl > 0;
  if (lin_square) lin_lu.compute(p.a_lin);
  auto polished = [&](const ConeVec& v, double t) {
    ConeVec r = v;
    if (!lin_square) return r;
    const Vector psd_part = A.apply(ConeVec{v.s, Vector::Zero(nl)});
    r.l = Vector(lin_lu.solve(t * b - psd_part)).cwiseMax(0.0);
    return r;
  };
  auto polished_ray = [&](const ConeVec& v) { return polished(v, 0.0); };

  // Residual ratios of the infeasibility (Farkas) and unboundedness (ray)
  // certificates carried by the current iterate; +inf when the sign is wrong.
  auto certificate_ratios = [&]() -> std::pair<double, double> {
    double r_inf = kInf, r_unb = kInf;
    const double by = b.dot(y);
    if (by > 0.0) r_inf = (A.adjoint(y) + z).norm() / by;
    const ConeVec ray = polished_ray(x);
    const double cx = c.dot(ray);
    if (cx < 0.0) r_unb = A.apply(ray).norm() / (-cx);
    return {r_inf, r_unb};
  };
  auto check_certificates = [&](double tol) -> bool {
    const auto [r_inf, r_unb] = certificate_ratios();
    if (r_inf <= tol) {
      status = SolveStatus::Infeasible;
      return true;
    }
    if (r_unb <= tol) {
      status = SolveStatus::Unbounded;
      return true;
    }
    return false;
  };

  struct Iterate {
    ConeVec x, z;
    Vector y;
    double tau = 0.0, kappa = 0.0;
    double score = kInf;
  } best, best_cert;
  int cert_stall = 0;

  int it = 0;
  for (; it < settings.max_iterations; ++it) {
    evaluate();
    if (pres <= settings.feas_tol && dres <= settings.feas_tol && rel_gap <= settings.gap_tol) {
      status = SolveStatus::Optimal;
      break;
    }
    const double score = std::max({pres, dres, rel_gap});
    if (score < best.score) best = {x, z, y, tau, kappa, score};
    if (check_certificates(settings.cert_tol)) break;
    const auto [r_inf, r_unb] = certificate_ratios();
    const double cert = std::min(r_inf, r_unb);
    if (cert < best_cert.score) {
      best_cert = {x, z, y, tau, kappa, cert};
      cert_stall = 0;
    } else if (best_cert.score <= settings.infeas_tol && ++cert_stall >= 3) {
      break;
    }

    Scaling sc;
    if (!compute_scaling(x, z, sc)) break;

    const Vector rp = A.apply(x) - tau * b;
    const ConeVec rd = tau * c - A.adjoint(y) - z;
    const double rg = b.dot(y) - c.dot(x) - kappa;
    const double mu = (x.dot(z) + tau * kappa) / nu;

    // Schur complement M = A W A^T.
    std::vector<Matrix> wa(m);
    for (int j = 0; j < m; ++j) wa[j] = sc.W * p.a_psd[j] * sc.W;
    Matrix M(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double v = inner(p.a_psd[i], wa[j]);
        if (nl > 0) v += p.a_lin.row(i).dot(sc.w_lin.cwiseProduct(p.a_lin.row(j).transpose()));
        M(i, j) = M(j, i) = v;
      }
    Eigen::LLT<Matrix> chol(M);
    Eigen::LDLT<Matrix> ldlt;
    const bool use_llt = chol.info() == Eigen::Success;
    if (!use_llt) {
      ldlt.compute(M);
      if (ldlt.info() != Eigen::Success) break;
    }
    auto m_solve = [&](const Vector& rhs) -> Vector { return use_llt ? Vector(chol.solve(rhs)) : Vector(ldlt.solve(rhs)); };

    const ConeVec g = apply_w(sc, c);
    const Vector ag = A.apply(g);
    const Vector v = m_solve(ag + b);
    const double cg = c.dot(g);

    // Solves the linearized system for complementarity targets given in
    // scaled coordinates (r_s for the PSD block, r_l for the linear block).
    auto direction = [&](double eta, const Matrix& r_s, const Vector& r_l, double r_tk) {
      Matrix s_mat(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s_mat(i, j) = 2.0 * r_s(i, j) / (sc.lambda(i) + sc.lambda(j));
      const ConeVec rc{sym(sc.R * s_mat * sc.R.transpose()), r_l.cwiseQuotient(z.l)};
      const ConeVec t1 = rc - eta * apply_w(sc, rd);
      const Vector h = -eta * rp - A.apply(t1);
      const Vector u = m_solve(h);
      const double num = -eta * rg - b.dot(u) + c.dot(t1) + ag.dot(u) + r_tk / tau;
      const double den = b.dot(v) - ag.dot(v) + cg + kappa / tau;
      Direction d;
      d.dtau = num / den;
      d.dy = u + d.dtau * v;
      const ConeVec aty = A.adjoint(d.dy);
      d.dz = eta * rd - aty + d.dtau * c;
      d.dx = t1 + apply_w(sc, aty) - d.dtau * g;
      d.dkappa = (r_tk - kappa * d.dtau) / tau;
      return d;
    };

    auto scaled_x = [&](const Direction& d) { return Matrix(sym(sc.Rinv * d.dx.s * sc.Rinv.transpose())); };
    auto scaled_z = [&](const Direction& d) { return Matrix(sym(sc.R.transpose() * d.dz.s * sc.R)); };
    auto step_to_boundary = [&](const Direction& d, const Matrix& dxs, const Matrix& dzs) {
      const Vector sx = d.dx.l.cwiseQuotient(sc.w_lin.cwiseSqrt());
      const Vector sz = d.dz.l.cwiseProduct(sc.w_lin.cwiseSqrt());
      double a = std::min(max_step(sc.lambda, dxs, sc.lambda_lin, sx), max_step(sc.lambda, dzs, sc.lambda_lin, sz));
      a = std::min(a, ratio_step(tau, d.dtau));
      a = std::min(a, ratio_step(kappa, d.dkappa));
      return a;
    };

    // Predictor.
    const Matrix lam2 = sc.lambda.cwiseProduct(sc.lambda).asDiagonal();
    const Vector lam2_lin = sc.lambda_lin.cwiseProduct(sc.lambda_lin);
    const Direction aff = direction(1.0, -lam2, -lam2_lin, -tau * kappa);
    const Matrix dxs_a = scaled_x(aff), dzs_a = scaled_z(aff);
    const double alpha_aff = std::min(1.0, step_to_boundary(aff, dxs_a, dzs_a));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector.
    const Matrix cross = sym(dxs_a * dzs_a);
    const Vector cross_lin = aff.dx.l.cwiseProduct(aff.dz.l);
    const Matrix target = sigma * mu * Matrix::Identity(n, n) - lam2 - cross;
    const Vector target_lin = Vector::Constant(nl, sigma * mu) - lam2_lin - cross_lin;
    const Direction d = direction(1.0 - sigma, target, target_lin, sigma * mu - tau * kappa - aff.dtau * aff.dkappa);
    const double alpha_max = step_to_boundary(d, scaled_x(d), scaled_z(d));
    const double alpha = std::min(1.0, settings.step_fraction * alpha_max);
    if (!std::isfinite(alpha) || alpha < 1e-12) break;

    x += alpha * d.dx;
    z += alpha * d.dz;
    x.s = sym(x.s);
    z.s = sym(z.s);
    y += alpha * d.dy;
    tau += alpha * d.dtau;
    kappa += alpha * d.dkappa;
    if (!(tau > 0.0) || !(kappa > 0.0) || !x.s.allFinite() || !z.s.allFinite()) break;
  }
  res.iterations = it;

  if (status == SolveStatus::NumericalFailure) {
    // Late iterations can drift once the Schur complement loses accuracy, so
    // the last and the most accurate iterate are both considered. Recomputing
    // the linear part from the PSD part removes slack drift from the primal
    // residual.
    auto settle = [&](const Iterate& it_) {
      x = it_.x, z = it_.z, y = it_.y, tau = it_.tau, kappa = it_.kappa;
      evaluate();
      if (lin_square && std::isfinite(pres) && tau > 0.0) {
        const ConeVec raw = x;
        const double raw_pres = pres;
        x = polished(x, tau);
        evaluate();
        if (!(pres < raw_pres)) {
          x = raw;
          evaluate();
        }
      }
      return std::max({pres, dres, rel_gap, obj_err});
    };
    const Iterate last{x, z, y, tau, kappa, 0.0};
    const double tol = settings.fallback_tol;
    if (!(settle(last) <= tol) && std::isfinite(best.score) && !(settle(best) <= tol)) settle(last);
    if (std::isfinite(pres) && pres <= tol && dres <= tol && rel_gap <= tol && obj_err <= tol) {
      status = SolveStatus::Optimal;
    } else if (best_cert.score <= settings.infeas_tol) {
      x = best_cert.x, z = best_cert.z, y = best_cert.y, tau = best_cert.tau, kappa = best_cert.kappa;
      check_certificates(settings.infeas_tol);
    }
  }
  res.status = status;

  // Map back to the caller's scaling.
  const Vector& d = scaled.row_scale;
  const double cs = scaled.obj_scale;
  if (status == SolveStatus::Infeasible) {
    res.y = d.cwiseProduct(y);
    const ConeVec zz = -1.0 * A.adjoint(y);
    res.z_psd = zz.s;
    res.z_lin = zz.l;
    const double by = problem.b.dot(res.y);
    if (by > 0.0) res.y /= by, res.z_psd /= by, res.z_lin /= by;
    res.x_psd = Matrix::Zero(n, n);
    res.x_lin = Vector::Zero(nl);
  } else if (status == SolveStatus::Unbounded) {
    x = polished_ray(x);
    const double cx = problem.c_psd.cwiseProduct(x.s).sum() + problem.c_lin.dot(x.l);
    const double s = cx < 0.0 ? -1.0 / cx : 1.0;
    res.x_psd = s * x.s;
    res.x_lin = s * x.l;
    res.y = Vector::Zero(m);
    res.z_psd = Matrix::Zero(n, n);
    res.z_lin = Vector::Zero(nl);
  } else {
    res.x_psd = x.s / tau;
    res.x_lin = x.l / tau;
    res.y = cs * d.cwiseProduct(y) / tau;
    res.z_psd = cs * z.s / tau;
    res.z_lin = cs * z.l / tau;
  }

  // Diagnostics on the original data.
  const Operator A0(problem);
  const ConeVec xs{res.x_psd, res.x_lin};
  const ConeVec c0{problem.c_psd, problem.c_lin};
  res.primal_objective = c0.dot(xs);
  res.dual_objective = problem.b.dot(res.y);
  if (status == SolveStatus::Optimal || status == SolveStatus::NumericalFailure) {
    res.primal_residual = (A0.apply(xs) - problem.b).norm() / (1.0 + problem.b.norm());
    const ConeVec rd0 = c0 - A0.adjoint(res.y) - ConeVec{res.z_psd, res.z_lin};
    res.dual_residual = rd0.norm() / (1.0 + c0.norm());
    res.gap = std::abs(res.primal_objective - res.dual_objective) /
              (1.0 + std::abs(res.primal_objective) + std::abs(res.dual_objective));
  } else if (status == SolveStatus::Infeasible) {
    const ConeVec r = A0.adjoint(res.y) + ConeVec{res.z_psd, res.z_lin};
    res.dual_residual = r.norm();
  } else {
    res.primal_residual = A0.apply(xs).norm();
  }
  return res;
}

// ---------------------------------------------------------------------------

ConicProblem Relaxation::standard_form() const {
  const int n = dim();
  const int m = num_constraints();
  const double slack_sign = sense == Sense::Minimize ? -1.0 : 1.0;
  ConicProblem p;
  p.psd_dim = n;
  p.num_linear = m;
  p.a_psd.reserve(m);
  for (const auto& a : constraints) p.a_psd.push_back(a.dense());
  p.a_lin = slack_sign * Matrix::Identity(m, m);
  p.b = Vector::Constant(m, rhs);
  p.c_psd = sense == Sense::Minimize ? objective.dense() : Matrix(-objective.dense());
  p.c_lin = Vector::Zero(m);
  return p;
}

Relaxation build_relaxation(const QcqpInstance& inst) {
  Relaxation r;
  r.sense = inst.sense();
  r.field = inst.field();
  r.objective = inst.embedded_objective();
  r.constraints = inst.embedded_constraints();
  r.rhs = inst.embedded_rhs();
  return r;
}

int SdpSolution::rank(double tol) const {
  if (X.empty()) return 0;
  const Vector ev = sym_eig(X).eigenvalues;
  const double top = ev(0);
  if (top <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > tol * top) ++r;
  return field == Field::Complex ? (r + 1) / 2 : r;
}

HermMatrix SdpSolution::complex_X() const { return herm_extract(X); }

SdpSolution solve(const Relaxation& relaxation, const SolverSettings& settings) {
  const ConicResult cr = solve_conic(relaxation.standard_form(), settings);
  const bool maximize = relaxation.sense == Sense::Maximize;
  const double norm = relaxation.field == Field::Complex ? 0.5 : 1.0;
  const int m = relaxation.num_constraints();

  SdpSolution sol;
  sol.status = cr.status;
  sol.sense = relaxation.sense;
  sol.field = relaxation.field;
  sol.iterations = cr.iterations;
  sol.primal_residual = cr.primal_residual;
  sol.dual_residual = cr.dual_residual;
  sol.gap = cr.gap;

  switch (cr.status) {
    case SolveStatus::Optimal:
    case SolveStatus::NumericalFailure: {
      sol.X = SymMatrix(cr.x_psd);
      const double sign = maximize ? -1.0 : 1.0;
      sol.objective_value = sign * cr.primal_objective * norm;
      sol.dual_objective = sign * cr.dual_objective * norm;
      sol.dual_multipliers.resize(m);
      for (int k = 0; k < m; ++k) sol.dual_multipliers[k] = std::max(0.0, sign * cr.y(k));
      sol.dual_slack = SymMatrix(cr.z_psd);
      break;
    }
    case SolveStatus::Infeasible: {
      sol.X = SymMatrix::zeros(relaxation.dim());
      sol.objective_value = maximize ? -std::numeric_limits<double>::infinity()
                                     : std::numeric_limits<double>::infinity();
      double total = 0.0;
      for (int k = 0; k < m; ++k) total += std::max(0.0, cr.y(k));
      sol.farkas.resize(m);
      for (int k = 0; k < m; ++k) sol.farkas[k] = total > 0.0 ? std::max(0.0, cr.y(k)) / total : 0.0;
      break;
    }
    case SolveStatus::Unbounded: {
      sol.X = SymMatrix::zeros(relaxation.dim());
      sol.objective_value = maximize ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
      const double tr = cr.x_psd.trace();
      sol.ray = SymMatrix(tr > 0.0 ? Matrix(cr.x_psd / tr) : cr.x_psd);
      break;
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------

SlaterProbe slater_probe(const std::vector<SymMatrix>& constraints, double sign, const SolverSettings& settings) {
  if (constraints.empty()) throw std::invalid_argument("slater_probe: no constraints");
  const int n = constraints.front().n();
  const int m = static_cast<int>(constraints.size());
  double shift = 1.0;
  for (const auto& a : constraints) shift = std::max(shift, frobenius_norm(a) + 1.0);

  // Variables: S >= 0 (n x n), then mu_0..mu_{m-1} >= 0 and t' = t + shift >= 0.
  // Rows: S - sign * sum mu_k A_k + t' I = shift * I (upper triangle), sum mu = 1.
  ConicProblem p;
  p.psd_dim = n;
  p.num_linear = m + 1;
  const int rows = n * (n + 1) / 2 + 1;
  p.a_psd.reserve(rows);
  p.a_lin = Matrix::Zero(rows, m + 1);
  p.b = Vector::Zero(rows);
  int r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++r) {
      Matrix e = Matrix::Zero(n, n);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = e(j, i) = 0.5;
      }
      p.a_psd.push_back(std::move(e));
      for (int k = 0; k < m; ++k) p.a_lin(r, k) = -sign * constraints[k](i, j);
      if (i == j) {
        p.a_lin(r, m) = 1.0;
        p.b(r) = shift;
      }
    }
  p.a_psd.push_back(Matrix::Zero(n, n));
  for (int k = 0; k < m; ++k) p.a_lin(r, k) = 1.0;
  p.b(r) = 1.0;
  p.c_psd = Matrix::Zero(n, n);
  p.c_lin = Vector::Zero(m + 1);
  p.c_lin(m) = -1.0;

  SlaterProbe probe;
  const ConicResult cr = solve_conic(p, settings);
  if (cr.status != SolveStatus::Optimal) return probe;
  probe.determinate = true;
  probe.margin = cr.x_lin(m) - shift;

  std::vector<double> mu(m);
  double total = 0.0;
  for (int k = 0; k < m; ++k) total += (mu[k] = std::max(0.0, cr.x_lin(k)));
  if (total <= 0.0) return probe;
  Matrix combo = Matrix::Zero(n, n);
  for (int k = 0; k < m; ++k) combo += (sign * mu[k] / total) * constraints[k].dense();
  for (auto& v : mu) v /= total;
  probe.multipliers = mu;
  probe.holds = probe.margin > 1e-9 && min_eigenvalue(SymMatrix(combo)) > 1e-9;
  return probe;
}

SlaterReport slater_check(const QcqpInstance& inst, const SolverSettings& settings) {
  const auto cons = inst.embedded_constraints();
  SlaterReport rep;
  rep.positive = slater_probe(cons, 1.0, settings);
  rep.negative = slater_probe(cons, -1.0, settings);
  rep.dual_slater = inst.sense() == Sense::Maximize ? rep.positive.holds : rep.negative.holds;
  return rep;
}

bool min_form_strictly_feasible(const QcqpInstance& inst, const SolverSettings& settings) {
  const SlaterProbe probe = slater_probe(inst.embedded_constraints(), -1.0, settings);
  return probe.determinate && probe.margin < -1e-9;
}

}  // namespace hqsdp
