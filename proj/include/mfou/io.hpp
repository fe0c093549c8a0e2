#pragma once

#include "mfou/asymp.hpp"
#include "mfou/estim.hpp"
#include "mfou/mc.hpp"
#include "mfou/model.hpp"
#include "mfou/sim.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mfou {

using json = nlohmann::ordered_json;

// "%.17g"
std::string format_double(double x);

ModelParams params_from_json(const json& j);
json params_to_json(const ModelParams& p);

DeltaRule delta_rule_from_json(const json& j);
json delta_rule_to_json(const DeltaRule& d);
ExperimentConfig experiment_from_json(const json& j);
json experiment_to_json(const ExperimentConfig& c);
// FNV-1a of the canonical experiment JSON, 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

std::string trajectory_csv(const Trajectory& t);
json trajectory_meta(const Trajectory& t, const ModelParams& p);

struct CsvSeries {
    std::vector<double> time;
    std::vector<std::vector<double>> columns;  // one per component
};
CsvSeries read_trajectory_csv(const std::string& path);

json estimate_to_json(const EstimateResult& r);
json rate_to_json(const RatePrediction& r);
json series_to_json(const SeriesLimit& s);
json density_to_json(const DensityDiagnostics& d);

std::string report_errors_csv(const McReport& r);
// Deterministic for a fixed config: no timing fields.
json report_summary(const McReport& r);

std::string read_file(const std::string& path);
// Writes to a sibling temporary and renames over the target.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mfou
