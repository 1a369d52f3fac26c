#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hqsdp/instance.hpp"
#include "hqsdp/instances.hpp"
#include "hqsdp/probability.hpp"
#include "hqsdp/rank_reduction.hpp"
#include "hqsdp/rounding.hpp"
#include "hqsdp/sdp.hpp"

namespace hqsdp {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite doubles are written as JSON numbers (shortest representation that
/// parses back to the same bits); non-finite values as "inf", "-inf", "nan".
Json number_to_json(double v);
double number_from_json(const Json& j);

/// {"n": n, "re": [row-major], "im": [row-major]}; "im" omitted when real.
Json matrix_to_json(const HermMatrix& m);
Json matrix_to_json(const SymMatrix& m);
HermMatrix matrix_from_json(const Json& j);

/// {"sense": "min"|"max", "field": "real"|"complex", "C": matrix, "A": [matrix, ...]}
Json instance_to_json(const QcqpInstance& inst);
QcqpInstance instance_from_json(const Json& j);

Json solution_to_json(const SdpSolution& sol);
Json low_rank_to_json(const LowRankSolution& lr);
Json report_to_json(const RoundingReport& r);
Json spec_to_json(const GeneratorSpec& s);
Json canonical_to_json(const CanonicalExample& ex);
Json asymmetry_to_json(const AsymmetryResult& r);

/// Parses a file; throws InputError when it is missing or not valid JSON.
Json read_json_file(const std::string& path);

}  // namespace hqsdp
