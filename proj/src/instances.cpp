#include "hqsdp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/QR>

#include "hqsdp/random.hpp"

namespace hqsdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Shape { FullPsd, RankOne, Indefinite };

Matrix random_orthogonal(Rng& rng, int n) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

CMatrix random_unitary(Rng& rng, int n) {
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = std::complex<double>(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

Vector spectrum_for(Shape s, Rng& rng, int n) {
  Vector d = Vector::Zero(n);
  switch (s) {
    case Shape::FullPsd:
      for (int i = 0; i < n; ++i) d(i) = std::abs(rng.normal());
      break;
    case Shape::RankOne:
      d(0) = std::abs(rng.normal());
      break;
    case Shape::Indefinite:
      for (int i = 0; i < n; ++i) d(i) = rng.normal();
      break;
  }
  return d;
}

HermMatrix draw_matrix(Shape s, Field field, Rng& rng, int n) {
  const double scale = rng.uniform_positive();
  const Vector d = spectrum_for(s, rng, n);
  if (field == Field::Real) {
    const Matrix q = random_orthogonal(rng, n);
    return HermMatrix(SymMatrix(scale * q.transpose() * d.asDiagonal() * q));
  }
  const CMatrix q = random_unitary(rng, n);
  return HermMatrix(CMatrix(scale * q.adjoint() * d.cast<std::complex<double>>().asDiagonal() * q));
}

HermMatrix draw_with_shape(Shape s, Field field, std::uint64_t seed, int n) {
  // Indefinite draws that come out semidefinite are redrawn from the next stream.
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    HermMatrix a = draw_matrix(s, field, rng, n);
    if (s != Shape::Indefinite || classify(a) == Definiteness::Indefinite) return a;
  }
}

// Cheap sufficient test for strict feasibility of the minimization form:
// some direction makes every constraint positive.
bool obviously_feasible(const QcqpInstance& inst, std::uint64_t seed) {
  const auto cons = inst.embedded_constraints();
  auto positive = [&](const Vector& x) {
    for (const auto& a : cons)
      if (x.dot(a.dense() * x) <= 0.0) return false;
    return true;
  };
  for (const auto& a : cons)
    if (positive(sym_eig(a).eigenvectors.col(0))) return true;
  Rng rng(seed);
  const int d = inst.embedded_dim();
  for (int t = 0; t < 256; ++t) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.normal();
    if (positive(x)) return true;
  }
  return false;
}

}  // namespace

std::string to_string(GeneratorCase c) {
  switch (c) {
    case GeneratorCase::A_OneIndef_RestPD: return "a";
    case GeneratorCase::B_TenPctIndef_RestPD: return "b";
    case GeneratorCase::C_OneIndef_RestRank1: return "c";
    case GeneratorCase::D_TenPctIndef_RestRank1: return "d";
  }
  return "unknown";
}

GeneratorCase case_from_string(const std::string& s) {
  if (s == "a" || s == "A") return GeneratorCase::A_OneIndef_RestPD;
  if (s == "b" || s == "B") return GeneratorCase::B_TenPctIndef_RestPD;
  if (s == "c" || s == "C") return GeneratorCase::C_OneIndef_RestRank1;
  if (s == "d" || s == "D") return GeneratorCase::D_TenPctIndef_RestRank1;
  throw std::invalid_argument("unknown generator case: " + s);
}

GeneratorSpec GeneratorSpec::standard(GeneratorCase c, int n, int m, Sense sense, std::uint64_t seed, Field field) {
  GeneratorSpec s;
  s.n = n;
  s.m = m;
  s.gen_case = c;
  s.sense = sense;
  s.objective_kind = sense == Sense::Minimize ? ObjectiveKind::Identity : ObjectiveKind::Indefinite;
  s.field = field;
  s.seed = seed;
  return s;
}

int GeneratorSpec::num_indefinite() const {
  if (gen_case == GeneratorCase::A_OneIndef_RestPD || gen_case == GeneratorCase::C_OneIndef_RestRank1) return 1;
  return static_cast<int>(std::ceil(0.1 * (m + 1) - 1e-12));
}

GeneratedInstance generate_detailed(const GeneratorSpec& spec) {
  if (spec.n < 1 || spec.m < 0) throw std::invalid_argument("generate: need n >= 1 and m >= 0");
  const bool rank_one = spec.gen_case == GeneratorCase::C_OneIndef_RestRank1 ||
                        spec.gen_case == GeneratorCase::D_TenPctIndef_RestRank1;
  const int indef = spec.num_indefinite();
  const int total = spec.m + 1;

  for (int attempt = 0;; ++attempt) {
    const std::uint64_t base = derive_seed(spec.seed, static_cast<std::uint64_t>(attempt));
    std::vector<HermMatrix> cons;
    cons.reserve(total);
    for (int k = 0; k < total; ++k) {
      const Shape s = k < indef ? Shape::Indefinite : (rank_one ? Shape::RankOne : Shape::FullPsd);
      cons.push_back(draw_with_shape(s, spec.field, derive_seed(base, static_cast<std::uint64_t>(k) + 1), spec.n));
    }
    HermMatrix obj;
    if (spec.objective_kind == ObjectiveKind::Identity) {
      obj = HermMatrix(SymMatrix::identity(spec.n));
    } else {
      obj = draw_with_shape(Shape::Indefinite, spec.field, derive_seed(base, 0), spec.n);
    }
    QcqpInstance inst(spec.sense, spec.field, obj, std::move(cons));
    if (spec.sense == Sense::Maximize) return {std::move(inst), attempt};
    if (obviously_feasible(inst, derive_seed(base, 0xfea5)) || min_form_strictly_feasible(inst))
      return {std::move(inst), attempt};
    if (attempt > 1000) throw std::runtime_error("generate: could not draw a feasible minimization instance");
  }
}

QcqpInstance generate(const GeneratorSpec& spec) { return generate_detailed(spec).instance; }

// ---------------------------------------------------------------------------

std::string to_string(CanonicalId id) {
  switch (id) {
    case CanonicalId::MinMExample: return "m-example";
    case CanonicalId::Example3_7: return "example-3.7";
    case CanonicalId::Example4_3: return "example-4.3";
    case CanonicalId::Example4_4: return "example-4.4";
  }
  return "unknown";
}

CanonicalId canonical_from_string(const std::string& s) {
  for (CanonicalId id : {CanonicalId::MinMExample, CanonicalId::Example3_7, CanonicalId::Example4_3,
                         CanonicalId::Example4_4})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown canonical example: " + s);
}

namespace {

HermMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix m(n, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return HermMatrix(SymMatrix(m, true));
}

}  // namespace

CanonicalExample canonical(CanonicalId id, std::optional<double> M) {
  const bool needs_m = id == CanonicalId::MinMExample || id == CanonicalId::Example4_3;
  if (needs_m) {
    if (!M) M = 10.0;
    if (!(*M > 0.0)) throw std::invalid_argument("canonical: M must be positive");
  } else {
    M.reset();
  }
  const double golden_sq = (3.0 + std::sqrt(5.0)) / 2.0;  // 2.618...

  switch (id) {
    case CanonicalId::MinMExample: {
      const double m = *M;
      QcqpInstance inst(Sense::Minimize, Field::Real, real_matrix({{1, 0}, {0, 1}}),
                        {real_matrix({{0, 0}, {0, 1}}), real_matrix({{1, m / 2}, {m / 2, 0}}),
                         real_matrix({{1, -m / 2}, {-m / 2, 0}})});
      CanonicalExample ex{id, M, std::move(inst), {}, SolveStatus::Optimal, std::nullopt};
      const double root = (m + std::sqrt(m * m + 4.0)) / 2.0;
      ex.known_values["v_sdp"] = 2.0;
      ex.known_values["v_qp_lower"] = 1.0 + root * root;
      ex.feasible_point = Vector(2);
      (*ex.feasible_point) << root, 1.0;
      return ex;
    }
    case CanonicalId::Example3_7: {
      Matrix c = Matrix::Zero(4, 4);
      c(3, 3) = 1.0;
      Matrix a0 = Matrix::Zero(4, 4), a1 = Matrix::Zero(4, 4), a2 = Matrix::Zero(4, 4), a3 = Matrix::Zero(4, 4);
      a0(0, 1) = a0(1, 0) = 0.5;
      a0(2, 2) = a0(3, 3) = 1.0;
      a1(0, 1) = a1(1, 0) = -0.5;
      a1(2, 2) = a1(3, 3) = 1.0;
      a2(0, 0) = 0.5;
      a2(2, 2) = -1.0;
      a3(1, 1) = 0.5;
      a3(2, 2) = -1.0;
      auto h = [](const Matrix& x) { return HermMatrix(SymMatrix(x, true)); };
      QcqpInstance inst(Sense::Minimize, Field::Real, h(c), {h(a0), h(a1), h(a2), h(a3)});
      CanonicalExample ex{id, M, std::move(inst), {}, SolveStatus::Optimal, std::nullopt};
      ex.known_values["v_sdp"] = 0.0;
      ex.known_values["v_qp_lower"] = 3.0;
      ex.feasible_point = Vector(4);
      (*ex.feasible_point) << std::sqrt(2.0), std::sqrt(2.0), 0.0, std::sqrt(3.0);
      return ex;
    }
    case CanonicalId::Example4_3: {
      const double m = *M;
      QcqpInstance inst(Sense::Maximize, Field::Real, real_matrix({{1, 0}, {0, 1 / m}}),
                        {real_matrix({{0, m / 2}, {m / 2, 1}}), real_matrix({{0, -m / 2}, {-m / 2, 1}}),
                         real_matrix({{m, 0}, {0, -m}})});
      CanonicalExample ex{id, M, std::move(inst), {}, SolveStatus::Optimal, std::nullopt};
      ex.known_values["v_qp_upper"] = golden_sq / m;
      ex.known_values["v_sdp_lower"] = 1.0 + 1.0 / m;
      ex.known_values["v_sdp_upper"] = 1.0 + 2.0 / m;
      ex.known_values["v_sdp"] = 1.0 + 2.0 / m;
      ex.known_values["ratio_lower"] = m / golden_sq;
      return ex;
    }
    case CanonicalId::Example4_4: {
      QcqpInstance inst(Sense::Maximize, Field::Real, real_matrix({{1, 0.5}, {0.5, 0}}),
                        {real_matrix({{0, 0.5}, {0.5, 0}}), real_matrix({{1, 0}, {0, -1}})});
      CanonicalExample ex{id, M, std::move(inst), {}, SolveStatus::Unbounded, std::nullopt};
      ex.known_values["v_qp"] = golden_sq;
      return ex;
    }
  }
  throw std::invalid_argument("canonical: unknown id");
}

// ---------------------------------------------------------------------------

namespace {

struct RadialProblem {
  std::vector<Matrix> A;
  Matrix C;
  bool minimize;

  // Best objective along the ray through u (u need not be normalized), as a
  // quantity to minimize: the objective itself for minimization, its
  // negation for maximization.  +inf marks an infeasible ray, -inf an
  // unbounded one.
  double score(const Vector& u, double* binding) const {
    const double c = u.dot(C * u);
    if (minimize) {
      double qmin = kInf;
      for (const auto& a : A) qmin = std::min(qmin, u.dot(a * u));
      if (!(qmin > 0.0)) return kInf;
      *binding = qmin;
      if (c < 0.0) return -kInf;
      return c / qmin;
    }
    double qmax = -kInf;
    for (const auto& a : A) qmax = std::max(qmax, u.dot(a * u));
    if (!(qmax > 0.0)) {
      *binding = 0.0;
      return c > 0.0 ? -kInf : 0.0;
    }
    *binding = qmax;
    return c > 0.0 ? -c / qmax : 0.0;
  }
};

Vector from_angles(const std::vector<double>& th, int d) {
  Vector u(d);
  double s = 1.0;
  for (int i = 0; i < d - 1; ++i) {
    u(i) = s * std::cos(th[i]);
    s *= std::sin(th[i]);
  }
  u(d - 1) = s;
  return u;
}

}  // namespace

BruteForceResult brute_force_qcqp(const QcqpInstance& inst, int grid) {
  const int d = inst.embedded_dim();
  if (d > 4) throw std::invalid_argument("brute_force_qcqp: embedded dimension must be <= 4");
  RadialProblem rp;
  for (const auto& a : inst.embedded_constraints()) rp.A.push_back(a.dense());
  rp.C = inst.embedded_objective().dense();
  rp.minimize = inst.sense() == Sense::Minimize;

  BruteForceResult res;
  double best = kInf, best_binding = 0.0;
  Vector best_u;
  auto consider = [&](const Vector& u) {
    double binding = 0.0;
    const double s = rp.score(u, &binding);
    ++res.evaluations;
    if (s < best) {
      best = s;
      best_u = u;
      best_binding = binding;
    }
    return s;
  };

  if (d == 1) {
    consider(Vector::Ones(1));
  } else {
    if (grid <= 0) grid = d == 2 ? 20000 : (d == 3 ? 600 : 120);
    const int na = d - 1;
    std::vector<int> steps(na, grid);
    steps[na - 1] = 2 * grid;
    std::vector<double> h(na, std::numbers::pi / grid);

    // Keep the best few grid cells as refinement seeds.
    struct Seed {
      double score;
      std::vector<double> th;
    };
    std::vector<Seed> seeds;
    const std::size_t keep = 16;
    std::vector<int> idx(na, 0);
    for (;;) {
      std::vector<double> th(na);
      for (int i = 0; i < na; ++i) th[i] = (idx[i] + 0.5) * h[i];
      const double s = consider(from_angles(th, d));
      if (std::isfinite(s) && (seeds.size() < keep || s < seeds.back().score)) {
        seeds.push_back({s, th});
        std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.score < b.score; });
        if (seeds.size() > keep) seeds.pop_back();
      }
      int k = 0;
      while (k < na && ++idx[k] == steps[k]) idx[k++] = 0;
      if (k == na) break;
    }

    if (best != -kInf) {
      // The score is a minimum (maximum) of ratios and so has kinks where
      // constraints tie; random directions alongside the coordinate ones keep
      // the search from stalling on them.
      Rng rng(0x5eed);
      for (const auto& sd : seeds) {
        Vector u = from_angles(sd.th, d);
        double cur = sd.score;
        for (int restart = 0; restart < 20; ++restart) {
          const double start = cur;
          double step = h[0];
          while (step > 1e-13) {
            bool improved = false;
            for (int t = 0; t < 2 * d + 32; ++t) {
              Vector dir = Vector::Zero(d);
              if (t < 2 * d) {
                dir(t / 2) = t % 2 == 0 ? 1.0 : -1.0;
              } else {
                for (int i = 0; i < d; ++i) dir(i) = rng.normal();
                dir.normalize();
              }
              Vector v = (u + step * dir).normalized();
              const double s = consider(v);
              if (s < cur) {
                cur = s;
                u = v;
                improved = true;
              }
            }
            if (!improved) step *= 0.5;
          }
          if (!(cur < start - 1e-15 * std::abs(start))) break;
        }
      }
    }
  }

  if (best == -kInf) {
    res.unbounded = true;
    res.feasible = true;
    res.value = rp.minimize ? -kInf : kInf;
    return res;
  }
  if (best == kInf) {
    res.value = rp.minimize ? kInf : 0.0;
    return res;
  }
  res.feasible = true;
  res.value = rp.minimize ? best : -best;
  if (best_binding > 0.0)
    res.x = best_u / std::sqrt(best_binding);
  else
    res.x = Vector::Zero(d);
  return res;
}

}  // namespace hqsdp
