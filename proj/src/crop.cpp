#include "agripv/crop.hpp"

#include <algorithm>
#include <cmath>

#include "agripv/errors.hpp"
#include "agripv/simulate.hpp"

namespace agripv {

void CropSeason::validate() const {
  if (name.empty()) throw ValidationError("crop season must have a name");
  if (start_month < 1 || start_month > 12 || end_month < 1 || end_month > 12)
    throw ValidationError("crop '" + name + "': months must be in 1..12");
  if (!(open_profit_usd_ha >= 0.0))
    throw ValidationError("crop '" + name + "': open_profit must be >= 0");
  if (!(par_saturation_umol > 0.0))
    throw ValidationError("crop '" + name + "': par_saturation must be > 0");
}

bool CropSeason::contains_month(int month) const {
  if (start_month <= end_month) return month >= start_month && month <= end_month;
  return month >= start_month || month <= end_month;  // wraps over new year
}

int CropSeason::n_months() const {
  if (start_month <= end_month) return end_month - start_month + 1;
  return 12 - start_month + 1 + end_month;
}

void CropRotation::validate() const {
  int owner[13];
  for (int m = 1; m <= 12; ++m) owner[m] = -1;
  for (size_t i = 0; i < seasons.size(); ++i) {
    seasons[i].validate();
    for (int m = 1; m <= 12; ++m) {
      if (!seasons[i].contains_month(m)) continue;
      if (owner[m] >= 0) {
        throw ValidationError("month " + std::to_string(m) + " belongs to both '" +
                              seasons[owner[m]].name + "' and '" + seasons[i].name + "'");
      }
      owner[m] = static_cast<int>(i);
    }
  }
}

CropRotation CropRotation::khanewal_high_value() {
  return {{
      {"tomato", 4, 6, 948.81, 1400.0},
      {"cauliflower", 7, 9, 1145.98, 900.0},
      {"garlic", 10, 3, 7097.54, 800.0},
  }};
}

CropRotation CropRotation::khanewal_low_value() {
  return {{
      {"cotton", 4, 9, 69.88, 1600.0},
      {"wheat", 10, 3, 228.43, 1200.0},
  }};
}

double par_from_irradiance(double ghi_w_m2) {
  // 45% of shortwave is PAR; 4.57 umol of photons per joule of PAR
  return ghi_w_m2 * 0.45 * 4.57;
}

double daily_useful_par(std::span<const double> hourly_par_umol, double saturation_umol) {
  if (!(saturation_umol > 0.0)) throw ValidationError("par saturation must be > 0");
  double sum = 0.0;
  for (double par : hourly_par_umol) sum += std::min(par, saturation_umol);
  return sum * 3600.0 / 1e6;
}

SeasonalYield seasonal_y_par(const Site& site, const ArrayGeometry& geom,
                             const WeatherSeries& weather, const CropSeason& season,
                             int n_points) {
  CropRotation single{{season}};
  AnnualSimResult r =
      simulate_annual(site, geom, weather, ModuleParams{}, &single, n_points);
  return {r.season_y_par.at(0)};
}

double rotation_profit(const CropRotation& rotation, std::span<const SeasonalYield> yields) {
  if (yields.size() != rotation.seasons.size())
    throw ValidationError("rotation_profit: need one yield per season");
  double total = 0.0;
  for (size_t i = 0; i < yields.size(); ++i)
    total += yields[i].y_par * rotation.seasons[i].open_profit_usd_ha;
  return total;
}

}  // namespace agripv
