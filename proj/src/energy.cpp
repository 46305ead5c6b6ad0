#include "agripv/energy.hpp"

#include <cmath>

#include "agripv/errors.hpp"
#include "agripv/simulate.hpp"

namespace agripv {

void ModuleParams::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw ValidationError("module efficiency must be in (0, 1]");
  if (!(bifaciality >= 0.0 && bifaciality <= 1.0))
    throw ValidationError("module bifaciality must be in [0, 1]");
  if (!(performance_ratio > 0.0 && performance_ratio <= 1.0))
    throw ValidationError("performance_ratio must be in (0, 1]");
}

AnnualYield annual_yield(const Site& site, const ArrayGeometry& geom,
                         const WeatherSeries& weather, const ModuleParams& params,
                         int n_ground_points) {
  AnnualSimResult r = simulate_annual(site, geom, weather, params, nullptr, n_ground_points);
  return {r.yield_kwh_m2};
}

double y_pv_ratio(const AnnualYield& av, const AnnualYield& gmpv) {
  if (!(gmpv.kwh_per_m2 > 0.0))
    throw SimulationError("GMPV annual yield is zero; Y_PV baseline is degenerate");
  return av.kwh_per_m2 / gmpv.kwh_per_m2;
}

namespace {

double yield_at_tilt(double tilt_deg, const Site& site, const WeatherSeries& weather,
                     double p_over_h, const ModuleParams& params, double clearance,
                     double albedo, const std::vector<SunPosition>& suns) {
  // tilt 0 is outside the geometry domain; the yield is continuous there
  double tilt = std::max(tilt_deg, 0.05);
  ArrayGeometry geom{Orientation::ns_tilted, tilt, p_over_h, clearance, 0.9, albedo};
  return simulate_annual(site, geom, weather, params, nullptr, 64, &suns).yield_kwh_m2;
}

}  // namespace

double find_optimal_tilt(const Site& site, const WeatherSeries& weather,
                         double pitch_over_height, const ModuleParams& params,
                         double clearance_over_height, double albedo) {
  std::vector<SunPosition> suns = sun_table(site, weather);
  auto f = [&](double tilt) {
    return yield_at_tilt(tilt, site, weather, pitch_over_height, params,
                         clearance_over_height, albedo, suns);
  };
  // golden-section search on [0, 60], 0.5 degree tolerance
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 60.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 0.5) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double find_optimal_tilt_grid(const Site& site, const WeatherSeries& weather,
                              double pitch_over_height, const ModuleParams& params,
                              double clearance_over_height, double albedo) {
  std::vector<SunPosition> suns = sun_table(site, weather);
  double best_tilt = 0.0;
  double best = -1.0;
  for (int t = 0; t <= 60; ++t) {
    double y = yield_at_tilt(t, site, weather, pitch_over_height, params,
                             clearance_over_height, albedo, suns);
    if (y > best) {
      best = y;
      best_tilt = t;
    }
  }
  return best_tilt;
}

}  // namespace agripv
