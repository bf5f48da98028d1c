#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "freeclark/commutative.hpp"
#include "freeclark/realization.hpp"

namespace freeclark {

using json = nlohmann::json;

/// Row-major nested arrays of [re, im] pairs.
json matrix_to_json(const Mat& A);
Mat matrix_from_json(const json& j);

json series_to_json(const FreeSeries& F);
FreeSeries free_series_from_json(const json& j);
json series_to_json(const CommSeries& f);
CommSeries comm_series_from_json(const json& j);

json moments_to_json(const MomentFunctional& phi);
MomentFunctional moments_from_json(const json& j);
json moments_to_json(const CommMomentFunctional& mu);
CommMomentFunctional comm_moments_from_json(const json& j);

/// Keys "a|b" over word pairs.
json kernel_to_json(const CoeffKernel& K);

json point_to_json(const NCPoint& p);
NCPoint point_from_json(const json& j);

json colligation_to_json(const Colligation& c);
json extension_to_json(const RowContractionExt& D);

/// Stored problem instance: a free or commutative Schur series plus metadata.
struct Instance {
  std::string kind;  // "free" or "comm"
  std::optional<FreeSeries> free;
  std::optional<CommSeries> comm;
  std::optional<CommSeries> lift_of;  // commutative b when the free series is claimed to lift it
  json metadata = json::object();
};

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

/// Serialization with every float printed to 17 significant digits.
std::string dump17(const json& j, int indent = 2);

/// Reads and parses a JSON file; throws ConfigError on failure.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace freeclark
