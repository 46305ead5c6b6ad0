#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agripv/crop.hpp"
#include "agripv/econ.hpp"
#include "agripv/energy.hpp"
#include "agripv/optics.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// Sweep axes and requested metrics, parsed from the [sweep] section.
struct SweepSettings {
  std::vector<double> ph_axis;
  std::vector<double> ml_axis;
  std::vector<std::string> metrics;  // validated metric names

  void validate() const;
  static SweepSettings defaults();
};

// A fully validated simulation scenario: site, weather source, the AV and
// GMPV geometries, module electrical parameters, crop rotation, and
// economics. Parsed from the sectioned key=value scenario format.
struct Scenario {
  std::string name = "scenario";
  std::filesystem::path base_dir;  // for resolving relative weather paths

  Site site;
  bool use_clearsky = true;
  ClearSkyParams clearsky;
  std::filesystem::path weather_file;

  ArrayGeometry gmpv = ArrayGeometry::default_gmpv();
  ArrayGeometry av = ArrayGeometry::default_av_ns();
  ModuleParams module;
  CropRotation rotation;
  EconParams econ;
  double delta_fit = 0.0;
  int ground_points = 100;
  std::optional<SweepSettings> sweep;

  void validate() const;
  // Deterministic dump of every field; basis of the scenario hash.
  std::string canonical_string() const;
  std::string hash_hex() const;  // FNV-1a 64 over canonical_string()
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text, const std::string& name,
                             const std::filesystem::path& base_dir = ".");

WeatherSeries resolve_weather(const Scenario& scenario);

}  // namespace agripv
