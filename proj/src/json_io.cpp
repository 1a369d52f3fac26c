#include "hqsdp/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hqsdp {

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number, got " + j.dump());
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

Json row_major(const Matrix& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Matrix read_square(const Json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError(std::string("matrix: missing array '") + key + "'");
  const Json& a = j[key];
  if (static_cast<long long>(a.size()) != static_cast<long long>(n) * n)
    throw InputError(std::string("matrix: '") + key + "' must hold n*n entries");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m(i, k) = number_from_json(a[static_cast<std::size_t>(i) * n + k]);
  if (!m.allFinite()) throw InputError("matrix: entries must be finite");
  return m;
}

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j[key];
}

}  // namespace

Json matrix_to_json(const HermMatrix& m) {
  Json j;
  j["n"] = m.n();
  j["re"] = row_major(m.re());
  if (!m.is_real()) j["im"] = row_major(m.im());
  return j;
}

Json matrix_to_json(const SymMatrix& m) {
  Json j;
  j["n"] = m.n();
  j["re"] = row_major(m.dense());
  return j;
}

HermMatrix matrix_from_json(const Json& j) {
  const Json& nj = field_of(j, "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) throw InputError("matrix: 'n' must be a positive integer");
  const int n = nj.get<int>();
  const Matrix re = read_square(j, "re", n);
  const Matrix im = j.contains("im") ? read_square(j, "im", n) : Matrix::Zero(n, n);
  try {
    return HermMatrix(re, im, true);
  } catch (const std::exception& e) {
    throw InputError(std::string("matrix: ") + e.what());
  }
}

Json instance_to_json(const QcqpInstance& inst) {
  Json j;
  j["sense"] = to_string(inst.sense());
  j["field"] = to_string(inst.field());
  j["C"] = matrix_to_json(inst.objective());
  j["A"] = Json::array();
  for (const auto& a : inst.constraints()) j["A"].push_back(matrix_to_json(a));
  return j;
}

QcqpInstance instance_from_json(const Json& j) {
  const Json& sj = field_of(j, "sense");
  const Json& fj = field_of(j, "field");
  if (!sj.is_string() || !fj.is_string()) throw InputError("instance: 'sense' and 'field' must be strings");
  Sense sense;
  if (sj == "min")
    sense = Sense::Minimize;
  else if (sj == "max")
    sense = Sense::Maximize;
  else
    throw InputError("instance: sense must be \"min\" or \"max\"");
  Field field;
  if (fj == "real")
    field = Field::Real;
  else if (fj == "complex")
    field = Field::Complex;
  else
    throw InputError("instance: field must be \"real\" or \"complex\"");

  HermMatrix c = matrix_from_json(field_of(j, "C"));
  const Json& aj = field_of(j, "A");
  if (!aj.is_array() || aj.empty()) throw InputError("instance: 'A' must be a nonempty array");
  std::vector<HermMatrix> cons;
  for (const auto& a : aj) cons.push_back(matrix_from_json(a));
  if (field == Field::Real) {
    auto nonreal = [](const HermMatrix& m) { return !m.is_real(); };
    if (nonreal(c) || std::any_of(cons.begin(), cons.end(), nonreal))
      throw InputError("instance: real instance with imaginary parts");
  }
  try {
    return QcqpInstance(sense, field, std::move(c), std::move(cons));
  } catch (const std::exception& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
}

Json solution_to_json(const SdpSolution& sol) {
  Json j;
  j["status"] = to_string(sol.status);
  j["sense"] = to_string(sol.sense);
  j["field"] = to_string(sol.field);
  j["objective_value"] = number_to_json(sol.objective_value);
  j["dual_objective"] = number_to_json(sol.dual_objective);
  j["dual_multipliers"] = numbers(sol.dual_multipliers);
  j["primal_residual"] = number_to_json(sol.primal_residual);
  j["dual_residual"] = number_to_json(sol.dual_residual);
  j["gap"] = number_to_json(sol.gap);
  j["iterations"] = sol.iterations;
  if (!sol.X.empty()) {
    j["X"] = sol.field == Field::Complex ? matrix_to_json(sol.complex_X()) : matrix_to_json(sol.X);
    j["rank"] = sol.rank();
  }
  if (!sol.dual_slack.empty()) j["dual_slack"] = matrix_to_json(sol.dual_slack);
  if (sol.ray) j["ray"] = matrix_to_json(*sol.ray);
  if (!sol.farkas.empty()) j["farkas"] = numbers(sol.farkas);
  return j;
}

Json low_rank_to_json(const LowRankSolution& lr) {
  Json j;
  j["field"] = to_string(lr.field);
  j["rank"] = lr.rank;
  j["objective_value"] = number_to_json(lr.objective_value);
  j["constraint_values"] = numbers(lr.constraint_values);
  j["bound_met"] = lr.bound_met;
  j["steps"] = lr.steps;
  j["U"] = {{"n", lr.U.rows()}, {"r", lr.U.cols()}, {"entries", row_major(lr.U)}};
  return j;
}

Json report_to_json(const RoundingReport& r) {
  Json j;
  j["scheme"] = to_string(r.scheme);
  j["seed"] = r.seed;
  j["num_samples"] = r.num_samples;
  j["success"] = r.success;
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (!r.warning.empty()) j["warning"] = r.warning;
  if (r.best_x.size() > 0) j["best_x"] = vector_json(r.best_x);
  j["best_index"] = r.best_index;
  j["best_objective"] = number_to_json(r.best_objective);
  j["v_sdp"] = number_to_json(r.v_sdp);
  j["empirical_ratio"] = number_to_json(r.empirical_ratio);
  j["theoretical_bound"] = number_to_json(r.theoretical_bound);
  j["bound_claimed"] = r.bound_claimed;
  j["certificate_satisfied"] = r.certificate_satisfied;
  j["rank"] = r.rank;
  j["samples"] = {{"feasible", r.samples_feasible},
                  {"discarded", r.samples_discarded},
                  {"joint_event", r.joint_event_count},
                  {"event_gamma", number_to_json(r.event_gamma)},
                  {"event_mu", number_to_json(r.event_mu)},
                  {"event_alpha", number_to_json(r.event_alpha)}};
  return j;
}

Json spec_to_json(const GeneratorSpec& s) {
  return {{"n", s.n},
          {"m", s.m},
          {"case", to_string(s.gen_case)},
          {"sense", to_string(s.sense)},
          {"objective", s.objective_kind == ObjectiveKind::Identity ? "identity" : "indefinite"},
          {"field", to_string(s.field)},
          {"seed", s.seed}};
}

Json canonical_to_json(const CanonicalExample& ex) {
  Json j;
  j["id"] = to_string(ex.id);
  if (ex.M) j["M"] = *ex.M;
  j["instance"] = instance_to_json(ex.instance);
  Json kv = Json::object();
  for (const auto& [k, v] : ex.known_values) kv[k] = number_to_json(v);
  j["known_values"] = kv;
  if (ex.expected_status) j["expected_status"] = to_string(*ex.expected_status);
  if (ex.feasible_point) j["feasible_point"] = vector_json(*ex.feasible_point);
  return j;
}

Json asymmetry_to_json(const AsymmetryResult& r) {
  return {{"lemma_id", to_string(r.lemma_id)},
          {"analytic_lower_bound", number_to_json(r.analytic_lower_bound)},
          {"estimate", number_to_json(r.estimate)},
          {"standard_error", number_to_json(r.standard_error)},
          {"confidence_radius", number_to_json(r.confidence_radius)},
          {"method", to_string(r.method)},
          {"samples", r.samples}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace hqsdp
