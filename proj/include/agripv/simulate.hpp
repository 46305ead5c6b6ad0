#pragma once

#include <vector>

#include "agripv/crop.hpp"
#include "agripv/energy.hpp"
#include "agripv/optics.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// One pass over the weather year for a single geometry, producing the
// electrical yield and (when a rotation is given) per-season relative
// useful PAR. Module irradiance and the ground profile are evaluated once
// per hour and shared between the two outputs.
struct AnnualSimResult {
  double yield_kwh_m2 = 0.0;
  std::vector<double> season_y_par;  // parallel to rotation.seasons
  // Diagnostics: annual horizontal irradiation, Wh/m2.
  double mean_ground_wh_m2 = 0.0;  // spatial mean at crop height
  double open_field_wh_m2 = 0.0;   // unobstructed ground
};

// Precomputed per-hour sun positions for one site/weather pairing,
// shareable across geometries.
std::vector<SunPosition> sun_table(const Site& site, const WeatherSeries& weather);

AnnualSimResult simulate_annual(const Site& site, const ArrayGeometry& geom,
                                const WeatherSeries& weather, const ModuleParams& params,
                                const CropRotation* rotation, int n_ground_points = 100,
                                const std::vector<SunPosition>* suns = nullptr);

}  // namespace agripv
