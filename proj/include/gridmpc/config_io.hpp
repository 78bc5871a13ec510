#pragma once

#include <string>

#include "gridmpc/scenario.hpp"

namespace gridmpc {

/// Parse the key-value config format (see configs/example.cfg, the schema's
/// normative document). Throws ConfigInvalid with a line-precise message.
SimulationConfig parse_config_text(const std::string& text);

/// Load and parse a config file.
SimulationConfig load_config(const std::string& path);

/// Serialize a config back to the same format (written next to results for
/// reproducibility).
std::string format_config(const SimulationConfig& config);

}  // namespace gridmpc
