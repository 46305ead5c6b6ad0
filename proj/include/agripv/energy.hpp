#pragma once

#include "agripv/optics.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// Electrical conversion parameters. The feasibility criteria are ratios
// in which these cancel; absolute values only matter for beta (USD/kWh).
struct ModuleParams {
  double efficiency = 0.20;         // STC, applied to the front face
  double bifaciality = 0.90;        // rear-side conversion relative to front
  double performance_ratio = 0.80;  // lumped system losses

  void validate() const;
};

struct AnnualYield {
  double kwh_per_m2 = 0.0;  // per m2 of module area per year
};

// Hourly left-endpoint integration of module-plane irradiance:
//   yy = PR * eta * sum_hours(front + bifaciality * back) / 1000.
AnnualYield annual_yield(const Site& site, const ArrayGeometry& geom,
                         const WeatherSeries& weather, const ModuleParams& params,
                         int n_ground_points = 100);

// Y_PV = yy_av / yy_gmpv. Throws SimulationError when the baseline is zero.
double y_pv_ratio(const AnnualYield& av, const AnnualYield& gmpv);

// Tilt in [0, 60] degrees maximizing annual yield for an ns_tilted array,
// golden-section search with 0.5 degree tolerance.
double find_optimal_tilt(const Site& site, const WeatherSeries& weather,
                         double pitch_over_height, const ModuleParams& params,
                         double clearance_over_height = 0.5, double albedo = 0.25);

// 1-degree grid scan over [0, 60]; the slower argmax fallback.
double find_optimal_tilt_grid(const Site& site, const WeatherSeries& weather,
                              double pitch_over_height, const ModuleParams& params,
                              double clearance_over_height = 0.5, double albedo = 0.25);

}  // namespace agripv
