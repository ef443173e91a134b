#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "tplreach/model.hpp"

namespace tplreach {

/// Parses the canonical code-model JSON. Unknown fields are rejected.
/// Throws SchemaError (with a JSON pointer), ReferenceError or CycleError.
ProjectModel parse_model_json(std::string_view bytes);
ProjectModel model_from_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const ProjectModel& model);
std::string dump_model_json(const ProjectModel& model);

/// Reads a model from disk; `.json` files go through parse_model_json, anything
/// else through the fixture DSL parser.
ProjectModel load_model_file(const std::string& path);

}  // namespace tplreach
