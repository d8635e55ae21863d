#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gcf/flow.hpp"

namespace gcf {

inline constexpr const char* kVersion = "0.1.0";

/// Builds a FlowConfig from a JSON document:
///   {"n": 1, "speed": {"a": -1, "beta": -0.5} | {"kind": "exponential"},
///    "grid": {"N": 256},
///    "initial": {"type": "circle|sphere|fourier|self_similar", "R0": 1,
///                "modes": [[k, amplitude(, phase)], ...]},
///    "time": {"t_end": 2, "t0": 0, "safety": 0.5},
///    "output": {"stride": 1, "interval": 0.01}}
/// Only structure is checked here (InvalidConfig, InvalidSpeedLaw); call
/// FlowConfig::validate for the numeric constraints.
FlowConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a config file. Throws InvalidConfig on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Normalized form of a config, as echoed into meta.json.
nlohmann::json config_to_json(const FlowConfig& config);

/// {kind, a, beta} plus b = -beta when the law is dF/dt = K^{-b} nu.
nlohmann::json law_mapping(const SpeedLaw& law);

}  // namespace gcf
