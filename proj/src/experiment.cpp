#include "hqsdp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "hqsdp/rank_reduction.hpp"
#include "hqsdp/sdp.hpp"

namespace hqsdp {

ExperimentConfig ExperimentConfig::paper_scale() {
  ExperimentConfig c;
  c.cases = {GeneratorCase::A_OneIndef_RestPD, GeneratorCase::B_TenPctIndef_RestPD, GeneratorCase::C_OneIndef_RestRank1,
             GeneratorCase::D_TenPctIndef_RestRank1};
  c.m_list.clear();
  for (int m = 5; m <= 100; m += 5) c.m_list.push_back(m);
  c.instances_per_m = 1000;
  return c;
}

Scheme ExperimentConfig::effective_scheme() const {
  if (scheme) return *scheme;
  return sense == Sense::Minimize ? Scheme::GaussianMin : Scheme::GaussianMax;
}

std::uint64_t instance_seed(std::uint64_t root, GeneratorCase c, int m, int index) {
  const std::uint64_t by_case = derive_seed(root, static_cast<std::uint64_t>(c));
  return derive_seed(derive_seed(by_case, static_cast<std::uint64_t>(m)), static_cast<std::uint64_t>(index));
}

ExperimentRecord run_instance(const ExperimentConfig& cfg, GeneratorCase c, int m, int index) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  ExperimentRecord rec;
  rec.gen_case = c;
  rec.m = m;
  rec.instance_seed = instance_seed(cfg.seed, c, m, index);
  rec.ratio = kInf;
  rec.bound = kInf;
  rec.v_hat_qp = cfg.sense == Sense::Minimize ? kInf : 0.0;
  try {
    GeneratorSpec spec = GeneratorSpec::standard(c, cfg.n, m, cfg.sense, rec.instance_seed, cfg.field);
    const QcqpInstance inst = generate(spec);
    const SdpSolution sol = solve(inst);
    rec.status = to_string(sol.status);
    rec.v_sdp = sol.objective_value;
    if (sol.status != SolveStatus::Optimal) return rec;

    RoundingParams p;
    p.scheme = cfg.effective_scheme();
    p.num_samples = cfg.samples;
    p.seed = derive_seed(rec.instance_seed, 2);
    p.execution = Execution::Serial;
    const LowRankSolution lr = p.scheme == Scheme::GaussianMax
                                   ? factor_solution(sol, inst)
                                   : reduce_rank(sol, inst, derive_seed(rec.instance_seed, 1));
    const RoundingReport rep = round(inst, lr, p);
    rec.bound = rep.theoretical_bound;
    if (!rep.success) {
      rec.status = "rounding_failed";
      return rec;
    }
    rec.v_hat_qp = rep.best_objective;
    rec.ratio = rep.empirical_ratio;
  } catch (const std::exception&) {
    rec.status = "error";
  }
  return rec;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  struct Job {
    GeneratorCase c;
    int m;
    int index;
  };
  std::vector<Job> jobs;
  for (GeneratorCase c : cfg.cases)
    for (int m : cfg.m_list)
      for (int i = 0; i < cfg.instances_per_m; ++i) jobs.push_back({c, m, i});

  std::vector<ExperimentRecord> rows(jobs.size());
  const long long count = static_cast<long long>(jobs.size());
  if (cfg.execution == Execution::Serial) {
    for (long long i = 0; i < count; ++i) rows[i] = run_instance(cfg, jobs[i].c, jobs[i].m, jobs[i].index);
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long long i = 0; i < count; ++i) rows[i] = run_instance(cfg, jobs[i].c, jobs[i].m, jobs[i].index);
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::pair<int, int>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_pair(static_cast<int>(r.gen_case), r.m);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      SummaryRow s;
      s.gen_case = r.gen_case;
      s.m = r.m;
      s.min_ratio = std::numeric_limits<double>::infinity();
      s.max_ratio = -std::numeric_limits<double>::infinity();
      out.push_back(s);
    }
    SummaryRow& s = out[it->second];
    if (!std::isfinite(r.ratio)) {
      ++s.failures;
      continue;
    }
    ++s.count;
    s.mean_ratio += r.ratio;
    s.min_ratio = std::min(s.min_ratio, r.ratio);
    s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  for (auto& s : out) {
    if (s.count > 0) {
      s.mean_ratio /= s.count;
    } else {
      s.mean_ratio = s.min_ratio = s.max_ratio = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string records_csv(const std::vector<ExperimentRecord>& rows, std::uint64_t root_seed) {
  std::ostringstream os;
  os << "# root_seed=" << root_seed << "\n";
  os << "case,m,instance_seed,status,v_sdp,v_hat_qp,ratio,bound\n";
  for (const auto& r : rows)
    os << to_string(r.gen_case) << ',' << r.m << ',' << r.instance_seed << ',' << r.status << ','
       << format_number(r.v_sdp) << ',' << format_number(r.v_hat_qp) << ',' << format_number(r.ratio) << ','
       << format_number(r.bound) << '\n';
  return os.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows, std::uint64_t root_seed) {
  std::ostringstream os;
  os << "# root_seed=" << root_seed << "\n";
  os << "case,m,count,failures,min_ratio,mean_ratio,max_ratio\n";
  for (const auto& s : rows)
    os << to_string(s.gen_case) << ',' << s.m << ',' << s.count << ',' << s.failures << ','
       << format_number(s.min_ratio) << ',' << format_number(s.mean_ratio) << ',' << format_number(s.max_ratio)
       << '\n';
  return os.str();
}

}  // namespace hqsdp
