#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/revol.hpp"
#include "flexfor/sampling.hpp"
#include "flexfor/tuning.hpp"

// JSON and CSV encodings of the toolkit's data. Readers throw
// std::invalid_argument with the offending field on malformed input;
// missing optional fields take their defaults.
namespace flexfor::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Write atomically enough for our purposes: creates parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

FeederSpec feeder_spec_from_json(std::string_view text);
std::string to_json(const FeederSpec& spec);

RevolConfig revol_config_from_json(std::string_view text);
std::string to_json(const RevolConfig& cfg);

SearchSpace search_space_from_json(std::string_view text);
std::string to_json(const SearchSpace& space);

/// {"vertices": [[p_kw, q_kvar], ...], "area_kw_kvar": A}; a bare vertex
/// array is accepted on input.
ForPolygon polygon_from_json(std::string_view text);
std::string to_json(const ForPolygon& poly);

/// {"p_n": [...], "q_n": [...]}
SetpointVector setpoints_from_json(std::string_view text);
std::string to_json(const SetpointVector& sp);

std::string to_json(const InterchangeResult& result, const ConstraintReport* report = nullptr);

/// Columns p_kw,q_kvar,label.
std::string cloud_to_csv(const LabelledCloud& cloud);
LabelledCloud cloud_from_csv(std::string_view text);

/// Columns: every hyperparameter, mean_jaccard, std_jaccard, pf_calls.
std::string trials_to_csv(const std::vector<TrialRecord>& records);

/// Columns epoch,best_fitness,v_violation,i_violation.
std::string convergence_to_csv(const DirectionResult& result);

}  // namespace flexfor::io
