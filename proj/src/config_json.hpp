// Internal: JSON (de)serialization shared by the scenario and report code.
#ifndef GNE_SRC_CONFIG_JSON_HPP
#define GNE_SRC_CONFIG_JSON_HPP

#include <json.hpp>

#include "gne/scenario.hpp"

namespace gne::detail {

nlohmann::json config_echo(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);

}  // namespace gne::detail

#endif  // GNE_SRC_CONFIG_JSON_HPP
