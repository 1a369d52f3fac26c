#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqsdp/json_io.hpp"
#include "hqsdp/probability.hpp"

namespace hqsdp {

struct VerifyOptions {
  long long samples = 1'000'000;  // per Monte Carlo estimate
  std::uint64_t seed = 0;
  Execution execution = Execution::Parallel;
};

struct LemmaCheck {
  LemmaId lemma_id = LemmaId::L2_1;
  bool passed = true;
  int checks = 0;
  std::vector<std::string> failures;
  std::vector<AsymmetryResult> results;

  void expect(bool ok, const std::string& what);
};

std::vector<LemmaId> all_lemmas();

/// Runs the randomized property checks registered for one lemma:
///   L2_1  exact sign sums: Prob{Phi >= 0}, Prob{Phi <= 0} > 0.25 tau^{-2/(t-2)} for t = 3, 4, 6
///   L2_2  (2 sqrt 3 - 3)/tau beats 0.25/tau on a grid, and holds on exact sign sums
///   L3_1  chi-square combinations over 200 weight profiles, > 3/100; moment identity and bound
///   L3_2  Gaussian quadratic forms xi'A xi >= gamma E(xi'A xi), > 3/100
///   L3_4  exponential combinations over 200 profiles, > 1/20; closed form vs Monte Carlo;
///         scan of the closed form for n = 2, 3 against 1/e
///   L3_5  complex Gaussian quadratic forms, > 1/20; squared-modulus CDF
///   L4_1  500 exhaustive sign sums with n in 3..12, > 1/87; fourth moment vs enumeration
///   L5_1  both tail bounds dominate observed tail frequencies, real and complex
LemmaCheck verify_lemma(LemmaId id, const VerifyOptions& opt);
std::vector<LemmaCheck> verify_all(const VerifyOptions& opt);

Json verification_report(const std::vector<LemmaCheck>& checks, const VerifyOptions& opt);

}  // namespace hqsdp
