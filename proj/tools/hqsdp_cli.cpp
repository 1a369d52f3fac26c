#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hqsdp/experiment.hpp"
#include "hqsdp/instances.hpp"
#include "hqsdp/json_io.hpp"
#include "hqsdp/rank_reduction.hpp"
#include "hqsdp/rounding.hpp"
#include "hqsdp/sdp.hpp"
#include "hqsdp/verify.hpp"

using namespace hqsdp;

namespace {

enum Exit { kOk = 0, kInput = 2, kNoSolution = 3, kRounding = 4, kVerify = 5, kNumerical = 6 };

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded: return kNoSolution;
    case SolveStatus::NumericalFailure: return kNumerical;
  }
  return kNumerical;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_solve(const std::string& file) {
  const QcqpInstance inst = instance_from_json(read_json_file(file));
  const SdpSolution sol = solve(inst);
  print(solution_to_json(sol));
  return status_exit(sol.status);
}

struct RoundArgs {
  std::string file;
  std::string scheme;
  int samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> gamma, mu, alpha;
};

int cmd_round(const RoundArgs& a) {
  const QcqpInstance inst = instance_from_json(read_json_file(a.file));
  RoundingParams p;
  if (a.scheme.empty())
    p.scheme = inst.sense() == Sense::Minimize ? Scheme::GaussianMin : Scheme::GaussianMax;
  else
    p.scheme = scheme_from_string(a.scheme);
  const bool wants_min = p.scheme == Scheme::GaussianMin;
  if (wants_min != (inst.sense() == Sense::Minimize))
    throw InputError("scheme " + to_string(p.scheme) + " does not apply to a " + to_string(inst.sense()) + " instance");
  p.num_samples = a.samples;
  p.seed = a.seed;
  p.gamma = a.gamma;
  p.mu = a.mu;
  p.alpha = a.alpha;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  const SdpSolution sol = solve(inst);
  if (sol.status != SolveStatus::Optimal) {
    Json j;
    j["solution"] = solution_to_json(sol);
    print(j);
    return status_exit(sol.status);
  }
  const LowRankSolution lr =
      p.scheme == Scheme::GaussianMax ? factor_solution(sol, inst) : reduce_rank(sol, inst, derive_seed(a.seed, 1));
  const RoundingReport rep = round(inst, lr, p);
  Json j = report_to_json(rep);
  j["sdp"] = {{"status", to_string(sol.status)},
              {"objective_value", number_to_json(sol.objective_value)},
              {"rank", sol.rank()},
              {"reduced_rank", lr.rank}};
  print(j);
  return rep.success ? kOk : kRounding;
}

struct ExperimentArgs {
  std::string cases = "a";
  std::vector<int> m_list;
  int instances = 100;
  int samples = 100;
  std::uint64_t seed = 0;
  int n = 10;
  std::string sense = "min";
  std::string field = "real";
  std::string scheme;
  std::string out;
  bool paper_scale = false;
};

std::string summary_path(const std::string& out) {
  const std::filesystem::path p(out);
  const std::filesystem::path stem = p.parent_path() / p.stem();
  return stem.string() + "_summary" + (p.has_extension() ? p.extension().string() : std::string(".csv"));
}

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg = a.paper_scale ? ExperimentConfig::paper_scale() : ExperimentConfig{};
  if (!a.paper_scale) {
    cfg.cases.clear();
    std::stringstream ss(a.cases);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.cases.push_back(case_from_string(item));
    if (!a.m_list.empty()) cfg.m_list = a.m_list;
    cfg.instances_per_m = a.instances;
  }
  if (a.instances < 0) throw InputError("--instances-per-m must be nonnegative");
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.n = a.n;
  if (a.sense != "min" && a.sense != "max") throw InputError("--sense must be min or max");
  cfg.sense = a.sense == "min" ? Sense::Minimize : Sense::Maximize;
  if (a.field != "real" && a.field != "complex") throw InputError("--field must be real or complex");
  cfg.field = a.field == "real" ? Field::Real : Field::Complex;
  if (!a.scheme.empty()) cfg.scheme = scheme_from_string(a.scheme);
  if ((cfg.effective_scheme() == Scheme::GaussianMin) != (cfg.sense == Sense::Minimize))
    throw InputError("--scheme does not match --sense");

  const auto rows = run_experiment(cfg);
  const std::string csv = records_csv(rows, cfg.seed);
  const std::string summary = summary_csv(summarize(rows), cfg.seed);
  if (a.out.empty()) {
    std::cout << csv;
    return kOk;
  }
  std::ofstream(a.out, std::ios::binary) << csv;
  std::ofstream(summary_path(a.out), std::ios::binary) << summary;
  std::cerr << "wrote " << rows.size() << " rows to " << a.out << " (root seed " << cfg.seed << ")\n";
  return kOk;
}

int cmd_verify(const std::string& lemma, long long samples, std::uint64_t seed) {
  VerifyOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  std::vector<LemmaCheck> checks;
  if (lemma == "all") {
    checks = verify_all(opt);
  } else {
    LemmaId id;
    try {
      id = lemma_from_string(lemma);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    checks.push_back(verify_lemma(id, opt));
  }
  const Json report = verification_report(checks, opt);
  print(report);
  return report["passed"].get<bool>() ? kOk : kVerify;
}

int cmd_example(const std::string& id, std::optional<double> M, bool full) {
  CanonicalId cid;
  try {
    cid = canonical_from_string(id);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const CanonicalExample ex = canonical(cid, M);
  print(full ? canonical_to_json(ex) : instance_to_json(ex.instance));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous quadratic optimization through SDP relaxation and randomized rounding"};
  app.require_subcommand(1);

  std::string solve_file;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the SDP relaxation of an instance file");
  solve_cmd->add_option("instance", solve_file, "Instance JSON file")->required();

  RoundArgs ra;
  auto* round_cmd = app.add_subcommand("round", "Solve, reduce rank and round an instance file");
  round_cmd->add_option("instance", ra.file, "Instance JSON file")->required();
  round_cmd->add_option("--scheme", ra.scheme, "gaussian-min, sign-max or gaussian-max");
  round_cmd->add_option("--samples", ra.samples, "Number of random samples")->check(CLI::PositiveNumber);
  round_cmd->add_option("--seed", ra.seed, "Root seed");
  round_cmd->add_option("--gamma", ra.gamma, "Constraint level of the tracked joint event (min)");
  round_cmd->add_option("--mu", ra.mu, "Objective factor of the tracked joint event (min)");
  round_cmd->add_option("--alpha", ra.alpha, "Constraint level of the tracked joint event (max)");

  ExperimentArgs ea;
  auto* exp_cmd = app.add_subcommand("experiment", "Random-instance sweep written as CSV");
  exp_cmd->add_option("--cases", ea.cases, "Comma-separated generator cases a-d");
  exp_cmd->add_option("--m-list", ea.m_list, "Constraint counts beyond the first")->delimiter(',');
  exp_cmd->add_option("--instances-per-m", ea.instances, "Instances per (case, m)");
  exp_cmd->add_option("--samples", ea.samples, "Rounding samples per instance")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", ea.seed, "Root seed");
  exp_cmd->add_option("--n", ea.n, "Dimension")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--sense", ea.sense, "min or max");
  exp_cmd->add_option("--field", ea.field, "real or complex");
  exp_cmd->add_option("--scheme", ea.scheme, "Rounding scheme (default by sense)");
  exp_cmd->add_option("--out", ea.out, "CSV path; a <stem>_summary.csv is written next to it");
  exp_cmd->add_flag("--paper-scale", ea.paper_scale, "Cases a-d, m = 5..100, 1000 instances");

  std::string lemma = "all";
  long long vsamples = 1'000'000;
  std::uint64_t vseed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the probability checks");
  verify_cmd->add_option("--lemma", lemma, "all or one of L2_1, L2_2, L3_1, L3_2, L3_4, L3_5, L4_1, L5_1");
  verify_cmd->add_option("--samples", vsamples, "Monte Carlo samples per estimate")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vseed, "Root seed");

  std::string example_id;
  std::optional<double> example_m;
  bool example_full = false;
  auto* example_cmd = app.add_subcommand("example", "Print a canonical instance as JSON");
  example_cmd->add_option("id", example_id, "m-example, example-3.7, example-4.3 or example-4.4")->required();
  example_cmd->add_option("--M", example_m, "Parameter for m-example and example-4.3");
  example_cmd->add_flag("--full", example_full, "Include known values and reference points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_file);
    if (*round_cmd) return cmd_round(ra);
    if (*exp_cmd) return cmd_experiment(ea);
    if (*verify_cmd) return cmd_verify(lemma, vsamples, vseed);
    if (*example_cmd) return cmd_example(example_id, example_m, example_full);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kInput;
}
