#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hqsdp/instances.hpp"
#include "hqsdp/rounding.hpp"

namespace hqsdp {

struct ExperimentConfig {
  std::vector<GeneratorCase> cases{GeneratorCase::A_OneIndef_RestPD};
  std::vector<int> m_list{5, 10, 15, 20, 25, 30};
  int instances_per_m = 100;
  int samples = 100;
  std::uint64_t seed = 0;
  int n = 10;
  Sense sense = Sense::Minimize;
  Field field = Field::Real;
  std::optional<Scheme> scheme;  // default: gaussian-min / gaussian-max by sense
  Execution execution = Execution::Parallel;

  /// Cases a-d, m = 5, 10, ..., 100, 1000 instances each.
  static ExperimentConfig paper_scale();
  Scheme effective_scheme() const;
};

/// One (case, m, instance) row. `m` is the number of constraints beyond
/// the first, as in GeneratorSpec.
struct ExperimentRecord {
  GeneratorCase gen_case = GeneratorCase::A_OneIndef_RestPD;
  int m = 0;
  std::uint64_t instance_seed = 0;
  std::string status;  // solver status, "rounding_failed" or "error"
  double v_sdp = 0.0;
  double v_hat_qp = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // +inf when no bound applies
};

struct SummaryRow {
  GeneratorCase gen_case = GeneratorCase::A_OneIndef_RestPD;
  int m = 0;
  int count = 0;        // rows with a finite ratio
  int failures = 0;     // rows without one
  double min_ratio = 0.0, mean_ratio = 0.0, max_ratio = 0.0;
};

/// instance_seed = derive_seed(derive_seed(derive_seed(root, case), m), i);
/// the rank reduction and rounding draw from derive_seed(instance_seed, 1)
/// and derive_seed(instance_seed, 2).
std::uint64_t instance_seed(std::uint64_t root, GeneratorCase c, int m, int index);

ExperimentRecord run_instance(const ExperimentConfig& cfg, GeneratorCase c, int m, int index);
/// Rows ordered by case, then m, then instance index, independent of
/// scheduling.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& rows);

/// "%.17g" numbers, "inf" for infinities.
std::string format_number(double v);
std::string records_csv(const std::vector<ExperimentRecord>& rows, std::uint64_t root_seed);
std::string summary_csv(const std::vector<SummaryRow>& rows, std::uint64_t root_seed);

}  // namespace hqsdp
