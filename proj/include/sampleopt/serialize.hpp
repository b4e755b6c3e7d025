#pragma once

#include "sampleopt/gmm_data.hpp"
#include "sampleopt/objectives.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

// Documented JSON layouts; field names match the domain types, vectors are
// arrays of numbers, matrices arrays of per-point arrays.
namespace sampleopt {

nlohmann::json to_json(const PackedWellObjective& obj);
PackedWellObjective packed_well_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GmmPosterior& post);
GmmPosterior gmm_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Dataset& ds);
Dataset dataset_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace sampleopt
