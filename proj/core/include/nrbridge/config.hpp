#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrbridge/bridge.hpp"
#include "nrbridge/sweep.hpp"

namespace nrbridge {

/// Flat `key = value` text with `[section]` headers. `#` and `;` start
/// comments. Keys outside a section and repeated keys are errors.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<ConfigEntry> parse_config_entries(std::string_view text);

/// Sections [model], [sweep], [solver]. Unknown keys or sections throw
/// ConfigError; omitted keys keep their defaults.
SweepConfig parse_sweep_config(std::string_view text);
std::string serialize_sweep_config(const SweepConfig& cfg);

/// A single bridge instance in a [bridge] section.
BridgeInstance parse_bridge_config(std::string_view text);
std::string serialize_bridge_config(const BridgeInstance& inst);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace nrbridge
